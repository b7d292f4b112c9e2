#include "vpa/alphabet.hpp"

#include "vpa/error.hpp"

namespace vpa {

PartitionedAlphabet::PartitionedAlphabet(std::vector<std::string> calls,
                                         std::vector<std::string> returns,
                                         std::vector<std::string> internals)
    : call_count_(calls.size()), return_count_(returns.size()) {
  if (calls.empty() && returns.empty() && internals.empty())
    throw Error("alphabet: at least one symbol class must be nonempty");
  auto absorb = [&](std::vector<std::string>& group) {
    for (auto& name : group) {
      if (name.empty()) throw Error("alphabet: empty symbol name");
      Symbol id = static_cast<Symbol>(names_.size());
      if (!by_name_.emplace(name, id).second)
        throw Error("alphabet: duplicate symbol '" + name + "'");
      names_.push_back(std::move(name));
    }
  };
  absorb(calls);
  absorb(returns);
  absorb(internals);
  for (Symbol s = 0; s < names_.size(); ++s) {
    switch (class_of(s)) {
      case SymbolClass::Call: calls_.push_back(s); break;
      case SymbolClass::Return: returns_.push_back(s); break;
      case SymbolClass::Internal: internals_.push_back(s); break;
    }
  }
}

std::optional<Symbol> PartitionedAlphabet::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

}  // namespace vpa
