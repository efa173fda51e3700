#include "gradsym/expr.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace gradsym {

namespace {

struct SymbolInfo {
  std::string name;
  SymbolKind kind;
  std::vector<Symbol> jet_index;
  Symbol dependent;
};

class SymbolTable {
public:
  SymbolTable() {
    register_space("u", {"t", "x"}, 2);
    register_space("u", {"t", "x1", "x2"}, 2);
  }

  Symbol intern(std::string_view name, SymbolKind kind) {
    std::lock_guard lock(mu_);
    return intern_locked(name, kind);
  }

  std::optional<Symbol> lookup(std::string_view name) {
    std::lock_guard lock(mu_);
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return Symbol::from_id(it->second);
  }

  const SymbolInfo& info(int id) {
    std::lock_guard lock(mu_);
    return infos_.at(static_cast<std::size_t>(id));
  }

  void register_space(std::string_view dependent, const std::vector<std::string>& bases,
                      int max_order) {
    std::lock_guard lock(mu_);
    Symbol dep = intern_locked(dependent, SymbolKind::Jet);
    infos_[dep.id()].dependent = dep;
    std::vector<Symbol> base_syms;
    for (const auto& b : bases) base_syms.push_back(intern_locked(b, SymbolKind::Base));
    std::vector<int> counts(bases.size(), 0);
    register_rec(dep, base_syms, counts, 0, max_order);
  }

  std::optional<Symbol> child(Symbol jet, Symbol base) {
    std::lock_guard lock(mu_);
    const auto& ji = infos_.at(jet.id());
    if (ji.kind != SymbolKind::Jet) return std::nullopt;
    std::vector<int> key{ji.dependent.id()};
    std::vector<Symbol> idx = ji.jet_index;
    idx.push_back(base);
    std::sort(idx.begin(), idx.end(), [](Symbol a, Symbol b) { return a.id() < b.id(); });
    for (Symbol s : idx) key.push_back(s.id());
    auto it = by_index_.find(key_str(key));
    if (it == by_index_.end()) return std::nullopt;
    return Symbol::from_id(it->second);
  }

private:
  static std::string key_str(const std::vector<int>& k) {
    std::string s;
    for (int v : k) s += std::to_string(v) + ",";
    return s;
  }

  Symbol intern_locked(std::string_view name, SymbolKind kind) {
    std::string n(name);
    auto it = by_name_.find(n);
    if (it != by_name_.end()) {
      if (infos_[it->second].kind != kind)
        throw InvalidArgument("symbol '" + n + "' already declared with a different kind");
      return Symbol::from_id(it->second);
    }
    int id = static_cast<int>(infos_.size());
    infos_.push_back(SymbolInfo{n, kind, {}, Symbol{}});
    by_name_.emplace(n, id);
    return Symbol::from_id(id);
  }

  void register_rec(Symbol dep, const std::vector<Symbol>& bases, std::vector<int>& counts,
                    std::size_t pos, int remaining) {
    if (pos == bases.size()) {
      std::string name = infos_[dep.id()].name;
      std::vector<Symbol> idx;
      std::string suffix;
      for (std::size_t i = 0; i < bases.size(); ++i)
        for (int c = 0; c < counts[i]; ++c) {
          idx.push_back(bases[i]);
          suffix += infos_[bases[i].id()].name;
        }
      if (idx.empty()) {
        std::vector<int> key{dep.id()};
        by_index_[key_str(key)] = dep.id();
        return;
      }
      Symbol s = intern_locked(name + "_" + suffix, SymbolKind::Jet);
      auto& si = infos_[s.id()];
      std::sort(idx.begin(), idx.end(), [](Symbol a, Symbol b) { return a.id() < b.id(); });
      si.jet_index = idx;
      si.dependent = dep;
      std::vector<int> key{dep.id()};
      for (Symbol b : idx) key.push_back(b.id());
      by_index_[key_str(key)] = s.id();
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      register_rec(dep, bases, counts, pos + 1, remaining - c);
    }
    counts[pos] = 0;
  }

  std::mutex mu_;
  std::deque<SymbolInfo> infos_;
  std::unordered_map<std::string, int> by_name_;
  std::unordered_map<std::string, int> by_index_;
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view name, SymbolKind kind) {
  return table().intern(name, kind);
}

std::optional<Symbol> Symbol::lookup(std::string_view name) { return table().lookup(name); }

void Symbol::register_jet_space(std::string_view dependent,
                                const std::vector<std::string>& bases, int max_order) {
  table().register_space(dependent, bases, max_order);
}

std::optional<Symbol> Symbol::jet_child(Symbol jet, Symbol base) {
  return table().child(jet, base);
}

const std::string& Symbol::name() const { return table().info(id_).name; }
SymbolKind Symbol::kind() const { return table().info(id_).kind; }
int Symbol::order() const { return static_cast<int>(table().info(id_).jet_index.size()); }
const std::vector<Symbol>& Symbol::jet_index() const { return table().info(id_).jet_index; }
Symbol Symbol::dependent() const { return table().info(id_).dependent; }

}  // namespace gradsym
