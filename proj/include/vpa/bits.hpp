#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace vpa {

namespace detail {

/// 64-bit finalizer used for hashing packed words.
inline std::uint64_t hash_mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace detail

/// Fixed-size bit set over dense state ids.
class StateBits {
 public:
  StateBits() = default;
  explicit StateBits(std::uint32_t size)
      : size_(size), words_((size + 63) / 64, 0) {}

  std::uint32_t size() const { return size_; }

  void set(std::uint32_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::uint32_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  bool intersects(const StateBits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  StateBits& operator|=(const StateBits& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  bool operator==(const StateBits&) const = default;

  /// Calls f(i) for every set bit, ascending.
  template <typename F>
  void for_each(F f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::uint32_t> to_vector() const {
    std::vector<std::uint32_t> out;
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }

  std::size_t hash() const {
    std::uint64_t h = size_;
    for (std::uint64_t w : words_) h = detail::hash_mix(h ^ w);
    return static_cast<std::size_t>(h);
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::uint64_t& word(std::uint32_t w) { return words_[w]; }

 private:
  std::uint32_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Binary relation over dense state ids, stored as a packed bit matrix.
/// Row q holds the successor set of q; the packed form is canonical, so
/// equality and hashing work directly on the word array.
class BitRelation {
 public:
  BitRelation() = default;
  explicit BitRelation(std::uint32_t n)
      : n_(n), row_words_((n + 63) / 64), bits_(std::size_t{row_words_} * n, 0) {}

  /// Identity restricted to the given set: { (q, q) : q in over }.
  static BitRelation identity_over(const StateBits& over) {
    BitRelation r(over.size());
    over.for_each([&](std::uint32_t q) { r.set(q, q); });
    return r;
  }

  std::uint32_t domain_size() const { return n_; }

  void set(std::uint32_t q, std::uint32_t r) {
    bits_[std::size_t{q} * row_words_ + (r >> 6)] |= std::uint64_t{1}
                                                     << (r & 63);
  }
  bool test(std::uint32_t q, std::uint32_t r) const {
    return (bits_[std::size_t{q} * row_words_ + (r >> 6)] >> (r & 63)) & 1;
  }

  bool empty() const {
    for (std::uint64_t w : bits_)
      if (w) return false;
    return true;
  }

  std::size_t pair_count() const {
    std::size_t n = 0;
    for (std::uint64_t w : bits_) n += std::popcount(w);
    return n;
  }

  /// Relational composition: { (q, r) : exists m. (q, m) in this, (m, r) in rhs }.
  BitRelation compose(const BitRelation& rhs) const {
    BitRelation out(n_);
    for (std::uint32_t q = 0; q < n_; ++q) {
      const std::uint64_t* row = row_ptr(q);
      std::uint64_t* orow = out.row_ptr(q);
      for (std::uint32_t w = 0; w < row_words_; ++w) {
        std::uint64_t bits = row[w];
        while (bits) {
          std::uint32_t mid =
              w * 64 + static_cast<std::uint32_t>(std::countr_zero(bits));
          bits &= bits - 1;
          const std::uint64_t* rrow = rhs.row_ptr(mid);
          for (std::uint32_t v = 0; v < row_words_; ++v) orow[v] |= rrow[v];
        }
      }
    }
    return out;
  }

  /// Image of a set: { r : exists q in src. (q, r) in this }.
  StateBits image(const StateBits& src) const {
    StateBits out(n_);
    src.for_each([&](std::uint32_t q) {
      const std::uint64_t* row = row_ptr(q);
      for (std::uint32_t w = 0; w < row_words_; ++w) out.word(w) |= row[w];
    });
    return out;
  }

  /// Union of all rows (the second projection).
  StateBits range() const {
    StateBits out(n_);
    for (std::uint32_t q = 0; q < n_; ++q) {
      const std::uint64_t* row = row_ptr(q);
      for (std::uint32_t w = 0; w < row_words_; ++w) out.word(w) |= row[w];
    }
    return out;
  }

  /// Pairs whose second component lies in keep.
  BitRelation with_columns(const StateBits& keep) const {
    BitRelation out(n_);
    for (std::uint32_t q = 0; q < n_; ++q) {
      const std::uint64_t* row = row_ptr(q);
      std::uint64_t* orow = out.row_ptr(q);
      for (std::uint32_t w = 0; w < row_words_; ++w)
        orow[w] = row[w] & keep.words()[w];
    }
    return out;
  }

  BitRelation& operator|=(const BitRelation& o) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
  }

  bool operator==(const BitRelation&) const = default;

  /// Calls f(q, r) for every pair, ascending by (q, r).
  template <typename F>
  void for_each_pair(F f) const {
    for (std::uint32_t q = 0; q < n_; ++q) {
      const std::uint64_t* row = row_ptr(q);
      for (std::uint32_t w = 0; w < row_words_; ++w) {
        std::uint64_t bits = row[w];
        while (bits) {
          f(q, w * 64 + static_cast<std::uint32_t>(std::countr_zero(bits)));
          bits &= bits - 1;
        }
      }
    }
  }

  std::size_t hash() const {
    std::uint64_t h = n_;
    for (std::uint64_t w : bits_) h = detail::hash_mix(h ^ w);
    return static_cast<std::size_t>(h);
  }

 private:
  std::uint64_t* row_ptr(std::uint32_t q) {
    return bits_.data() + std::size_t{q} * row_words_;
  }
  const std::uint64_t* row_ptr(std::uint32_t q) const {
    return bits_.data() + std::size_t{q} * row_words_;
  }

  std::uint32_t n_ = 0;
  std::uint32_t row_words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace vpa
