#include "vpa/text_format.hpp"

#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vpa/error.hpp"

namespace vpa {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  for (std::size_t number = 1; std::getline(in, raw); ++number) {
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::istringstream words(raw);
    Line line{number, {}};
    for (std::string t; words >> t;) line.tokens.push_back(std::move(t));
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

constexpr const char* kSections[] = {"calls:",  "returns:", "internals:",
                                     "stack:",  "states:",  "initial:",
                                     "final:"};

bool is_section(const std::string& token) {
  for (const char* s : kSections)
    if (token == s) return true;
  return false;
}

class Parser {
 public:
  Vpa parse(std::istream& in) {
    split(tokenize(in));
    declare_alphabet();
    VpaBuilder b(PartitionedAlphabet(section("calls:").tokens,
                                     section("returns:").tokens,
                                     section("internals:").tokens));
    declare_states(b);
    declare_stack(b);
    mark("initial:", [&](State q) { b.mark_initial(q); });
    mark("final:", [&](State q) { b.mark_final(q); });
    for (const Line& line : rules_) add_rule(b, line);
    return b.build();
  }

 private:
  void split(std::vector<Line> lines) {
    for (Line& line : lines) {
      std::string head = line.tokens.front();
      if (is_section(head)) {
        if (sections_.count(head))
          throw ParseError(line.number, "duplicate section '" + head + "'");
        line.tokens.erase(line.tokens.begin());
        sections_.emplace(head, std::move(line));
      } else if (head == "call" || head == "ret" || head == "int") {
        rules_.push_back(std::move(line));
      } else {
        throw ParseError(line.number, "unknown directive '" + head + "'");
      }
    }
    for (const char* s : kSections)
      if (!sections_.count(s))
        throw Error("missing section '" + std::string(s) + "'");
  }

  const Line& section(const std::string& name) const {
    return sections_.at(name);
  }

  void declare_alphabet() {
    std::unordered_set<std::string> seen;
    for (const char* s : {"calls:", "returns:", "internals:"}) {
      const Line& line = section(s);
      for (const std::string& name : line.tokens)
        if (!seen.insert(name).second)
          throw ParseError(line.number, "duplicate symbol '" + name + "'");
    }
  }

  void declare_states(VpaBuilder& b) {
    const Line& line = section("states:");
    for (const std::string& name : line.tokens) {
      if (states_.count(name))
        throw ParseError(line.number, "duplicate state '" + name + "'");
      states_.emplace(name, b.add_state(name));
    }
  }

  void declare_stack(VpaBuilder& b) {
    const Line& line = section("stack:");
    stack_.emplace("BOT", kBottom);
    for (const std::string& name : line.tokens) {
      if (name == "BOT")
        throw ParseError(line.number, "'BOT' is reserved");
      if (stack_.count(name))
        throw ParseError(line.number, "duplicate stack symbol '" + name + "'");
      stack_.emplace(name, b.add_stack_symbol(name));
    }
  }

  template <typename Mark>
  void mark(const std::string& name, Mark apply) {
    const Line& line = section(name);
    for (const std::string& q : line.tokens) apply(state(line, q));
  }

  State state(const Line& line, const std::string& name) const {
    auto it = states_.find(name);
    if (it == states_.end())
      throw ParseError(line.number, "undeclared state '" + name + "'");
    return it->second;
  }

  StackSymbol stack(const Line& line, const std::string& name) const {
    auto it = stack_.find(name);
    if (it == stack_.end())
      throw ParseError(line.number, "undeclared stack symbol '" + name + "'");
    return it->second;
  }

  Symbol symbol(const VpaBuilder& b, const Line& line, const std::string& name,
                SymbolClass cls, const char* what) const {
    std::optional<Symbol> s = b.alphabet().find(name);
    if (!s)
      throw ParseError(line.number, "undeclared symbol '" + name + "'");
    if (b.alphabet().class_of(*s) != cls)
      throw ParseError(line.number,
                       "'" + name + "' is not " + std::string(what));
    return *s;
  }

  void add_rule(VpaBuilder& b, const Line& line) {
    const std::vector<std::string>& t = line.tokens;
    auto fresh = [&](auto& seen, auto key) {
      if (!seen.insert(key).second)
        throw ParseError(line.number, "duplicate rule");
    };
    try {
      if (t[0] == "call") {
        if (t.size() != 5)
          throw ParseError(line.number,
                           "expected 'call <state> <symbol> <state> <stack>'");
        StackSymbol push = stack(line, t[4]);
        if (push == kBottom)
          throw ParseError(line.number, "call rule cannot push BOT");
        State from = state(line, t[1]);
        Symbol sym = symbol(b, line, t[2], SymbolClass::Call, "a call symbol");
        State to = state(line, t[3]);
        fresh(seen_calls_, std::tuple(from, sym, to, push));
        b.add_call_rule(from, sym, to, push);
      } else if (t[0] == "ret") {
        if (t.size() != 5)
          throw ParseError(line.number,
                           "expected 'ret <state> <symbol> <stack> <state>'");
        State from = state(line, t[1]);
        Symbol sym =
            symbol(b, line, t[2], SymbolClass::Return, "a return symbol");
        StackSymbol top = stack(line, t[3]);
        State to = state(line, t[4]);
        fresh(seen_returns_, std::tuple(from, sym, top, to));
        b.add_return_rule(from, sym, top, to);
      } else {
        if (t.size() != 4)
          throw ParseError(line.number,
                           "expected 'int <state> <symbol> <state>'");
        State from = state(line, t[1]);
        Symbol sym = symbol(b, line, t[2], SymbolClass::Internal,
                            "an internal symbol");
        State to = state(line, t[3]);
        fresh(seen_internals_, std::tuple(from, sym, to));
        b.add_internal_rule(from, sym, to);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line.number, e.what());
    }
  }

  std::unordered_map<std::string, Line> sections_;
  std::vector<Line> rules_;
  std::unordered_map<std::string, State> states_;
  std::unordered_map<std::string, StackSymbol> stack_;
  std::set<std::tuple<State, Symbol, State, StackSymbol>> seen_calls_;
  std::set<std::tuple<State, Symbol, StackSymbol, State>> seen_returns_;
  std::set<std::tuple<State, Symbol, State>> seen_internals_;
};

void render_section(std::ostringstream& out, const char* name,
                    const std::vector<std::string>& tokens) {
  out << name;
  if (!tokens.empty()) {
    for (std::size_t col = std::string(name).size(); col < 11; ++col)
      out << ' ';
    for (std::size_t i = 0; i < tokens.size(); ++i)
      out << (i ? " " : "") << tokens[i];
  }
  out << '\n';
}

std::vector<std::string> class_names(const PartitionedAlphabet& alphabet,
                                     const std::vector<Symbol>& symbols) {
  std::vector<std::string> names;
  for (Symbol s : symbols) names.push_back(alphabet.name(s));
  return names;
}

}  // namespace

Vpa parse_vpa(std::istream& in) { return Parser().parse(in); }

Vpa parse_vpa(const std::string& text) {
  std::istringstream in(text);
  return parse_vpa(in);
}

std::string render_vpa(const Vpa& m) {
  const PartitionedAlphabet& alpha = m.alphabet();
  std::ostringstream out;
  render_section(out, "calls:", class_names(alpha, alpha.calls()));
  render_section(out, "returns:", class_names(alpha, alpha.returns()));
  render_section(out, "internals:", class_names(alpha, alpha.internals()));
  std::vector<std::string> stack;
  for (StackSymbol g = 1; g < m.num_stack_symbols(); ++g)
    stack.push_back(m.stack_name(g));
  render_section(out, "stack:", stack);
  std::vector<std::string> states;
  for (State q = 0; q < m.num_states(); ++q) states.push_back(m.state_name(q));
  render_section(out, "states:", states);
  render_section(out, "initial:", [&] {
    std::vector<std::string> names;
    for (State q : m.initials()) names.push_back(m.state_name(q));
    return names;
  }());
  render_section(out, "final:", [&] {
    std::vector<std::string> names;
    for (State q = 0; q < m.num_states(); ++q)
      if (m.final_bits().test(q)) names.push_back(m.state_name(q));
    return names;
  }());
  for (const CallRule& r : m.call_rules())
    out << "call " << m.state_name(r.from) << ' ' << alpha.name(r.symbol)
        << ' ' << m.state_name(r.to) << ' ' << m.stack_name(r.push) << '\n';
  for (const ReturnRule& r : m.return_rules())
    out << "ret  " << m.state_name(r.from) << ' ' << alpha.name(r.symbol)
        << ' ' << m.stack_name(r.top) << ' ' << m.state_name(r.to) << '\n';
  for (const InternalRule& r : m.internal_rules())
    out << "int  " << m.state_name(r.from) << ' ' << alpha.name(r.symbol)
        << ' ' << m.state_name(r.to) << '\n';
  return out.str();
}

Word parse_word(const PartitionedAlphabet& alphabet,
                const std::vector<std::string>& names) {
  Word w;
  for (const std::string& name : names) {
    std::optional<Symbol> s = alphabet.find(name);
    if (!s) throw Error("unknown symbol '" + name + "'");
    w.push_back(*s);
  }
  return w;
}

std::string render_word(const PartitionedAlphabet& alphabet, const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += alphabet.name(w[i]);
  }
  return out;
}

}  // namespace vpa
