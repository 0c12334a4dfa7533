#include "eau/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace eau {

SymbolId Signature::intern(std::string name, int arity, bool is_var) {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) {
    const Info& info = infos_[it->second];
    if (info.arity != arity || info.is_var != is_var)
      throw std::runtime_error("symbol '" + name + "' redeclared with different arity");
    return it->second;
  }
  SymbolId id = static_cast<SymbolId>(infos_.size());
  infos_.push_back(Info{name, arity, is_var, {}, -1});
  by_name_.emplace(std::move(name), id);
  return id;
}

SymbolId Signature::lookup(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? kNoSymbol : it->second;
}

void Signature::set_infix(SymbolId s, std::string token) {
  infos_[s].infix = token;
  by_infix_[std::move(token)] = s;
}

SymbolId Signature::by_infix(std::string_view token) const {
  auto it = by_infix_.find(std::string(token));
  return it == by_infix_.end() ? kNoSymbol : it->second;
}

void Signature::set_order_override(const std::vector<std::string>& names) {
  for (Info& info : infos_) info.override_rank = -1;
  int rank = 0;
  for (const std::string& n : names) {
    SymbolId s = lookup(n);
    if (s != kNoSymbol) infos_[s].override_rank = rank;
    ++rank;
  }
}

bool Signature::precedes(SymbolId a, SymbolId b) const {
  const Info& ia = infos_[a];
  const Info& ib = infos_[b];
  int ra = ia.override_rank < 0 ? INT32_MAX : ia.override_rank;
  int rb = ib.override_rank < 0 ? INT32_MAX : ib.override_rank;
  if (ra != rb) return ra < rb;
  if (ia.arity != ib.arity) return ia.arity < ib.arity;
  const std::string& na = ia.infix.empty() ? ia.name : ia.infix;
  const std::string& nb = ib.infix.empty() ? ib.name : ib.infix;
  if (na != nb) return na < nb;
  return a < b;
}

TermId TermBank::app(SymbolId f, std::span<const TermId> args) {
  if (static_cast<int>(args.size()) != sig_->arity(f))
    throw std::runtime_error("arity mismatch applying '" + sig_->name(f) + "'");
  uint64_t h = 1469598103934665603ull ^ static_cast<uint64_t>(f);
  for (TermId a : args) h = (h ^ static_cast<uint64_t>(a)) * 1099511628211ull;
  auto& bucket = buckets_[h];
  for (TermId cand : bucket) {
    const Node& n = nodes_[cand];
    if (n.head != f) continue;
    if (n.args_end - n.args_begin != args.size()) continue;
    bool same = true;
    for (size_t i = 0; i < args.size(); ++i)
      if (arg_pool_[n.args_begin + i] != args[i]) { same = false; break; }
    if (same) return cand;
  }
  Node n;
  n.head = f;
  n.args_begin = static_cast<uint32_t>(arg_pool_.size());
  arg_pool_.insert(arg_pool_.end(), args.begin(), args.end());
  n.args_end = static_cast<uint32_t>(arg_pool_.size());
  TermId id = static_cast<TermId>(nodes_.size());
  nodes_.push_back(n);
  bucket.push_back(id);
  return id;
}

int TermBank::node_count(TermId t) const {
  int n = 1;
  for (TermId a : args(t)) n += node_count(a);
  return n;
}

int TermBank::height(TermId t) const {
  int h = 0;
  for (TermId a : args(t)) h = std::max(h, height(a));
  return h + 1;
}

bool TermBank::is_ground(TermId t) const {
  if (is_var(t)) return false;
  for (TermId a : args(t))
    if (!is_ground(a)) return false;
  return true;
}

static void collect_vars(const TermBank& bank, TermId t, std::vector<SymbolId>& out) {
  if (bank.is_var(t)) {
    SymbolId v = bank.head(t);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return;
  }
  for (TermId a : bank.args(t)) collect_vars(bank, a, out);
}

std::vector<SymbolId> TermBank::vars(TermId t) const {
  std::vector<SymbolId> out;
  collect_vars(*this, t, out);
  return out;
}

static bool linear_walk(const TermBank& bank, TermId t, std::vector<SymbolId>& seen) {
  if (bank.is_var(t)) {
    SymbolId v = bank.head(t);
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) return false;
    seen.push_back(v);
    return true;
  }
  for (TermId a : bank.args(t))
    if (!linear_walk(bank, a, seen)) return false;
  return true;
}

bool TermBank::is_linear(TermId t) const {
  std::vector<SymbolId> seen;
  return linear_walk(*this, t, seen);
}

void Substitution::bind(SymbolId var, TermId t) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), var,
                             [](const auto& e, SymbolId v) { return e.first < v; });
  if (it != entries_.end() && it->first == var) {
    it->second = t;
    return;
  }
  entries_.insert(it, {var, t});
}

std::optional<TermId> Substitution::lookup(SymbolId var) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), var,
                             [](const auto& e, SymbolId v) { return e.first < v; });
  if (it != entries_.end() && it->first == var) return it->second;
  return std::nullopt;
}

TermId Substitution::apply(TermBank& bank, TermId t) const {
  if (bank.is_var(t)) {
    if (auto img = lookup(bank.head(t))) return *img;
    return t;
  }
  auto as = bank.args(t);
  if (as.empty()) return t;
  std::vector<TermId> out(as.begin(), as.end());
  bool changed = false;
  for (TermId& a : out) {
    TermId b = apply(bank, a);
    if (b != a) { a = b; changed = true; }
  }
  return changed ? bank.app(bank.head(t), out) : t;
}

bool Substitution::is_flat(const TermBank& bank) const {
  for (auto& [v, t] : entries_)
    if (!bank.is_var(t)) return false;
  return true;
}

bool Substitution::is_linear(const TermBank& bank) const {
  std::vector<SymbolId> seen;
  for (auto& [v, t] : entries_)
    if (!linear_walk(bank, t, seen)) return false;
  return true;
}

bool Substitution::is_renaming(const TermBank& bank) const {
  return is_flat(bank) && is_linear(bank);
}

bool match_term(const TermBank& bank, TermId pattern, TermId subject, Substitution& out) {
  if (bank.is_var(pattern)) {
    SymbolId v = bank.head(pattern);
    if (auto bound = out.lookup(v)) return *bound == subject;
    out.bind(v, subject);
    return true;
  }
  if (bank.head(pattern) != bank.head(subject)) return false;
  auto pa = bank.args(pattern);
  auto sa = bank.args(subject);
  for (size_t i = 0; i < pa.size(); ++i)
    if (!match_term(bank, pa[i], sa[i], out)) return false;
  return true;
}

SymbolId VarRegistry::var_for(KeyKind kind, std::span<const int32_t> key) {
  std::string packed;
  packed.reserve(key.size() * 5 + 1);
  packed.push_back(static_cast<char>(kind));
  for (int32_t k : key) {
    packed.push_back(static_cast<char>(k & 0xff));
    packed.push_back(static_cast<char>((k >> 8) & 0xff));
    packed.push_back(static_cast<char>((k >> 16) & 0xff));
    packed.push_back(static_cast<char>((k >> 24) & 0xff));
  }
  auto it = by_key_.find(packed);
  if (it != by_key_.end()) return it->second;
  std::string name = prefix_ + std::to_string(vars_.size() + 1);
  while (sig_->lookup(name) != kNoSymbol) name += "'";
  SymbolId v = sig_->intern(name, 0, /*is_var=*/true);
  vars_.push_back(v);
  entries_.emplace(v, Entry{kind, std::vector<int32_t>(key.begin(), key.end())});
  by_key_.emplace(std::move(packed), v);
  return v;
}

bool VarRegistry::contains(SymbolId v) const { return entries_.count(v) != 0; }

const std::vector<int32_t>* VarRegistry::key_of(SymbolId v) const {
  auto it = entries_.find(v);
  return it == entries_.end() ? nullptr : &it->second.key;
}

VarRegistry::KeyKind VarRegistry::kind_of(SymbolId v) const {
  return entries_.at(v).kind;
}

Substitution VarRegistry::projection(int i) const {
  if (i < 0 || i >= width_) throw std::out_of_range("projection index out of range");
  Substitution sigma;
  for (SymbolId v : vars_) {
    const Entry& e = entries_.at(v);
    if (e.kind != KeyKind::Terms) continue;
    sigma.bind(v, static_cast<TermId>(e.key[i]));
  }
  return sigma;
}

TermId syntactic_au(TermBank& bank, VarRegistry& reg, std::span<const TermId> terms) {
  if (terms.empty()) throw std::invalid_argument("syntactic_au needs at least one term");
  if (static_cast<int>(terms.size()) != reg.width())
    throw std::invalid_argument("registry width does not match term count");
  SymbolId f = bank.head(terms[0]);
  bool same_head = true;
  for (TermId t : terms)
    if (bank.head(t) != f) { same_head = false; break; }
  if (!same_head)
    return bank.leaf(reg.var_for(VarRegistry::KeyKind::Terms,
                                 std::span<const int32_t>(terms.data(), terms.size())));
  int n = bank.sig().arity(f);
  std::vector<TermId> children(n);
  std::vector<TermId> column(terms.size());
  for (int j = 0; j < n; ++j) {
    for (size_t i = 0; i < terms.size(); ++i) column[i] = bank.args(terms[i])[j];
    children[j] = syntactic_au(bank, reg, column);
  }
  return bank.app(f, children);
}

}  // namespace eau
