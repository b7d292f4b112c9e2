#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vpa {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

enum class SymbolClass { Call, Return, Internal };

/// Input alphabet split into call, return, and internal symbols.
/// Symbols are dense ids: calls first, then returns, then internals.
class PartitionedAlphabet {
 public:
  PartitionedAlphabet(std::vector<std::string> calls,
                      std::vector<std::string> returns,
                      std::vector<std::string> internals);

  std::size_t size() const { return names_.size(); }
  std::size_t call_count() const { return call_count_; }
  std::size_t return_count() const { return return_count_; }
  std::size_t internal_count() const {
    return names_.size() - call_count_ - return_count_;
  }

  SymbolClass class_of(Symbol s) const {
    if (s < call_count_) return SymbolClass::Call;
    if (s < call_count_ + return_count_) return SymbolClass::Return;
    return SymbolClass::Internal;
  }
  bool is_call(Symbol s) const { return class_of(s) == SymbolClass::Call; }
  bool is_return(Symbol s) const { return class_of(s) == SymbolClass::Return; }
  bool is_internal(Symbol s) const {
    return class_of(s) == SymbolClass::Internal;
  }
  bool contains(Symbol s) const { return s < names_.size(); }

  const std::string& name(Symbol s) const { return names_[s]; }
  std::optional<Symbol> find(std::string_view name) const;

  const std::vector<Symbol>& calls() const { return calls_; }
  const std::vector<Symbol>& returns() const { return returns_; }
  const std::vector<Symbol>& internals() const { return internals_; }

  bool operator==(const PartitionedAlphabet& o) const {
    return names_ == o.names_ && call_count_ == o.call_count_ &&
           return_count_ == o.return_count_;
  }

 private:
  std::vector<std::string> names_;
  std::size_t call_count_ = 0;
  std::size_t return_count_ = 0;
  std::vector<Symbol> calls_, returns_, internals_;
  std::map<std::string, Symbol, std::less<>> by_name_;
};

}  // namespace vpa
