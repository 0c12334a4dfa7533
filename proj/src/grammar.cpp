#include "eau/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_set>

#include "eau/syntax.hpp"

namespace eau {

SortId GrammarSystem::add_sort(std::string name) {
  if (by_name_.count(name)) {
    std::string base = name;
    int k = 1;
    do {
      name = base + "_" + std::to_string(k++);
    } while (by_name_.count(name));
  }
  SortId id = static_cast<SortId>(defs_.size());
  defs_.push_back(Def{name, {}});
  by_name_.emplace(std::move(name), id);
  mark_dirty();
  return id;
}

SortId GrammarSystem::find_sort(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? kNoSort : it->second;
}

void GrammarSystem::add_alt(SortId s, Alt alt) {
  if (static_cast<int>(alt.args.size()) != sig_->arity(alt.head))
    throw std::runtime_error("arity mismatch in alternative of " + defs_[s].name);
  auto& alts = defs_[s].alts;
  if (std::find(alts.begin(), alts.end(), alt) != alts.end()) return;
  alts.push_back(std::move(alt));
  mark_dirty();
}

void GrammarSystem::insert_alt(SortId s, size_t pos, Alt alt) {
  auto& alts = defs_[s].alts;
  if (std::find(alts.begin(), alts.end(), alt) != alts.end()) return;
  alts.insert(alts.begin() + std::min(pos, alts.size()), std::move(alt));
  mark_dirty();
}

void GrammarSystem::set_alts(SortId s, std::vector<Alt> alts) {
  defs_[s].alts = std::move(alts);
  mark_dirty();
}

void GrammarSystem::clear_alts(SortId s) {
  defs_[s].alts.clear();
  mark_dirty();
}

void GrammarSystem::set_depth_skip(std::vector<SymbolId> skip) {
  depth_skip_ = std::move(skip);
  mark_dirty();
}

int GrammarSystem::alt_cost(const Alt& a) const {
  return std::find(depth_skip_.begin(), depth_skip_.end(), a.head) == depth_skip_.end() ? 1 : 0;
}

void GrammarSystem::finalize() {
  if (finalized_) return;
  size_t k = defs_.size();
  min_depth_.assign(k, kEmptyDepth);
  // Solve S = min over alternatives of cost + max(args) by value iteration;
  // unsolved entries are empty sorts.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t s = 0; s < k; ++s) {
      for (const Alt& a : defs_[s].alts) {
        int m = 0;
        bool ok = true;
        for (SortId arg : a.args) {
          if (min_depth_[arg] == kEmptyDepth) { ok = false; break; }
          m = std::max(m, min_depth_[arg]);
        }
        if (!ok) continue;
        int d = m + alt_cost(a);
        if (d < min_depth_[s]) {
          min_depth_[s] = d;
          changed = true;
        }
      }
    }
  }
  // Replace empty sorts by bottom and drop alternatives that mention them.
  for (size_t s = 0; s < k; ++s) {
    if (min_depth_[s] == kEmptyDepth) {
      defs_[s].alts.clear();
      continue;
    }
    auto& alts = defs_[s].alts;
    alts.erase(std::remove_if(alts.begin(), alts.end(),
                              [&](const Alt& a) {
                                for (SortId arg : a.args)
                                  if (min_depth_[arg] == kEmptyDepth) return true;
                                return false;
                              }),
               alts.end());
  }
  finalized_ = true;
}

int GrammarSystem::min_depth(SortId s) {
  finalize();
  return min_depth_[s];
}

std::vector<SortId> GrammarSystem::reachable(SortId s) const {
  std::vector<SortId> order;
  std::vector<char> seen(defs_.size(), 0);
  std::vector<SortId> stack{s};
  while (!stack.empty()) {
    SortId cur = stack.back();
    stack.pop_back();
    if (seen[cur]) continue;
    seen[cur] = 1;
    order.push_back(cur);
    for (const Alt& a : defs_[cur].alts)
      for (SortId arg : a.args)
        if (!seen[arg]) stack.push_back(arg);
  }
  return order;
}

bool GrammarSystem::is_finite(SortId s) {
  finalize();
  if (is_empty(s)) return true;
  // A cycle among reachable (productive) sorts pumps arbitrarily large terms.
  std::vector<int> color(defs_.size(), 0);  // 0 new, 1 on stack, 2 done
  bool cyclic = false;
  std::function<void(SortId)> dfs = [&](SortId cur) {
    color[cur] = 1;
    for (const Alt& a : defs_[cur].alts) {
      for (SortId arg : a.args) {
        if (color[arg] == 1) { cyclic = true; return; }
        if (color[arg] == 0) {
          dfs(arg);
          if (cyclic) return;
        }
      }
    }
    color[cur] = 2;
  };
  dfs(s);
  return !cyclic;
}

// --- membership -------------------------------------------------------------

bool* MembershipCache::find(TermId t, SortId s) {
  uint64_t key = (static_cast<uint64_t>(t) << 32) | static_cast<uint32_t>(s);
  auto it = map_.find(key);
  return it == map_.end() ? nullptr : &it->second;
}

void MembershipCache::put(TermId t, SortId s, bool v) {
  uint64_t key = (static_cast<uint64_t>(t) << 32) | static_cast<uint32_t>(s);
  map_[key] = v;
}

bool member_alt(GrammarSystem& gs, const TermBank& bank, TermId t, const Alt& alt,
                MembershipCache& cache) {
  if (bank.head(t) != alt.head) return false;
  auto as = bank.args(t);
  for (size_t i = 0; i < as.size(); ++i)
    if (!member(gs, bank, as[i], alt.args[i], cache)) return false;
  return true;
}

bool member(GrammarSystem& gs, const TermBank& bank, TermId t, SortId s, MembershipCache& cache) {
  if (bool* hit = cache.find(t, s)) return *hit;
  bool res = false;
  for (const Alt& a : gs.alts(s)) {
    if (member_alt(gs, bank, t, a, cache)) { res = true; break; }
  }
  cache.put(t, s, res);
  return res;
}

bool member(GrammarSystem& gs, const TermBank& bank, TermId t, SortId s) {
  MembershipCache cache;
  return member(gs, bank, t, s, cache);
}

// --- enumeration ------------------------------------------------------------

namespace {

// Depth-first product over the argument sorts; the leftmost argument is
// the slowest index, matching the paper's traces.
bool enum_args(GrammarSystem& gs, TermBank& bank, const Alt& alt, size_t i, int budget,
               std::vector<TermId>& acc, const std::function<bool(TermId)>& sink) {
  if (i == alt.args.size()) return sink(bank.app(alt.head, acc));
  bool go = true;
  enumerate_bounded(gs, bank, alt.args[i], budget, [&](TermId t) {
    acc[i] = t;
    go = enum_args(gs, bank, alt, i + 1, budget, acc, sink);
    return go;
  });
  return go;
}

}  // namespace

bool enumerate_bounded(GrammarSystem& gs, TermBank& bank, SortId s, int depth,
                       const std::function<bool(TermId)>& sink) {
  int md = gs.min_depth(s);
  if (md == kEmptyDepth || depth < md) return true;
  for (const Alt& a : gs.alts(s)) {
    int rem = depth - gs.alt_cost(a);
    if (rem < 0) continue;
    std::vector<TermId> acc(a.args.size());
    if (!enum_args(gs, bank, a, 0, rem, acc, sink)) return false;
  }
  return true;
}

bool enumerate_deepening(GrammarSystem& gs, TermBank& bank, SortId s,
                         const std::function<bool(TermId, int)>& sink, int max_depth) {
  int md = gs.min_depth(s);
  if (md == kEmptyDepth) return true;
  int bound = max_depth;
  if (gs.is_finite(s))
    bound = std::min<int>(max_depth, static_cast<int>(gs.reachable(s).size()) + 1);
  std::unordered_set<TermId> seen;
  for (int d = md; d <= bound; ++d) {
    bool go = enumerate_bounded(gs, bank, s, d, [&](TermId t) {
      if (!seen.insert(t).second) return true;
      return sink(t, d);
    });
    if (!go) return false;
  }
  return true;
}

std::vector<TermId> enumerate_to_vector(GrammarSystem& gs, TermBank& bank, SortId s, int depth) {
  std::vector<TermId> out;
  enumerate_bounded(gs, bank, s, depth, [&](TermId t) {
    out.push_back(t);
    return true;
  });
  return out;
}

namespace {

// Canonical prefix form used for tie-breaking only.
void canonical_print(const TermBank& bank, TermId t, std::string& out) {
  out += bank.sig().name(bank.head(t));
  auto args = bank.args(t);
  if (args.empty()) return;
  out += '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    canonical_print(bank, args[i], out);
  }
  out += ')';
}

}  // namespace

TermId minimal_term(GrammarSystem& gs, TermBank& bank, SortId s) {
  gs.finalize();
  if (gs.is_empty(s)) throw std::runtime_error("minimal_term of empty sort " + gs.name(s));
  size_t k = gs.sort_count();
  std::vector<TermId> best(k, kNoTerm);
  std::vector<int> best_size(k, INT32_MAX);
  std::unordered_map<TermId, std::string> printed;
  auto print_of = [&](TermId t) -> const std::string& {
    auto it = printed.find(t);
    if (it == printed.end()) {
      std::string form;
      canonical_print(bank, t, form);
      it = printed.emplace(t, std::move(form)).first;
    }
    return it->second;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < k; ++i) {
      for (const Alt& a : gs.alts(static_cast<SortId>(i))) {
        int sz = 1;
        bool ok = true;
        for (SortId arg : a.args) {
          if (best[arg] == kNoTerm) { ok = false; break; }
          sz += best_size[arg];
        }
        if (!ok || sz > best_size[i]) continue;
        std::vector<TermId> args;
        args.reserve(a.args.size());
        for (SortId arg : a.args) args.push_back(best[arg]);
        TermId cand = bank.app(a.head, args);
        if (sz < best_size[i] ||
            (cand != best[i] && print_of(cand) < print_of(best[i]))) {
          best[i] = cand;
          best_size[i] = sz;
          changed = true;
        }
      }
    }
  }
  return best[s];
}

// --- normalization ----------------------------------------------------------

namespace {

// Collects the application leaves of an expression, queueing name
// references for the per-root closure and auxiliary definitions for
// complex application arguments.
struct Normalizer {
  GrammarSystem& gs;
  const std::vector<std::pair<SortId, SortExpr>>& defs;
  std::vector<std::pair<SortId, SortExpr>> aux_work;

  const SortExpr* def_of(SortId s) const {
    for (auto& [id, e] : defs)
      if (id == s) return &e;
    return nullptr;
  }

  SortId arg_sort(const SortExpr& e) {
    if (e.kind == SortExpr::Name) return e.name;
    SortId aux = gs.add_sort("aux" + std::to_string(gs.sort_count()));
    aux_work.emplace_back(aux, e);
    return aux;
  }

  void collect(SortId root, const SortExpr& e, std::vector<char>& visiting) {
    switch (e.kind) {
      case SortExpr::Bottom:
        return;
      case SortExpr::Disj:
        for (const SortExpr& c : e.children) collect(root, c, visiting);
        return;
      case SortExpr::Name: {
        if (e.name < static_cast<SortId>(visiting.size()) && visiting[e.name]) return;
        if (const SortExpr* d = def_of(e.name)) {
          if (e.name >= static_cast<SortId>(visiting.size())) visiting.resize(e.name + 1, 0);
          visiting[e.name] = 1;
          collect(root, *d, visiting);
          visiting[e.name] = 0;
        } else {
          // already head-normal sort in gs: inline its alternatives
          for (const Alt& a : gs.alts(e.name)) gs.add_alt(root, a);
        }
        return;
      }
      case SortExpr::App: {
        Alt alt;
        alt.head = e.head;
        for (const SortExpr& c : e.children) alt.args.push_back(arg_sort(c));
        gs.add_alt(root, std::move(alt));
        return;
      }
    }
  }
};

}  // namespace

void normalize(GrammarSystem& gs, const std::vector<std::pair<SortId, SortExpr>>& defs) {
  Normalizer nz{gs, defs, {}};
  for (const auto& [sort, expr] : defs) {
    std::vector<char> visiting(gs.sort_count(), 0);
    if (sort < static_cast<SortId>(visiting.size())) visiting[sort] = 1;
    nz.collect(sort, expr, visiting);
  }
  while (!nz.aux_work.empty()) {
    auto [sort, expr] = nz.aux_work.back();
    nz.aux_work.pop_back();
    std::vector<char> visiting(gs.sort_count(), 0);
    visiting[sort] = 1;
    nz.collect(sort, expr, visiting);
  }
}

std::vector<NormalDef> to_normal_form(GrammarSystem& gs) {
  gs.finalize();
  std::vector<NormalDef> out;
  size_t k = gs.sort_count();
  std::vector<int> union_index(k);
  for (size_t s = 0; s < k; ++s) {
    union_index[s] = static_cast<int>(out.size());
    NormalDef u;
    u.name = gs.name(static_cast<SortId>(s));
    u.is_union = true;
    out.push_back(std::move(u));
  }
  for (size_t s = 0; s < k; ++s) {
    const auto& alts = gs.alts(static_cast<SortId>(s));
    for (size_t i = 0; i < alts.size(); ++i) {
      NormalDef d;
      d.name = gs.name(static_cast<SortId>(s)) + "#" + std::to_string(i + 1);
      d.is_union = false;
      d.head = alts[i].head;
      for (SortId arg : alts[i].args) d.args.push_back(union_index[arg]);
      out[union_index[s]].members.push_back(static_cast<int>(out.size()));
      out.push_back(std::move(d));
    }
  }
  return out;
}

// --- text format ------------------------------------------------------------

std::string print_alt(const GrammarSystem& gs, const Alt& alt) {
  const Signature& sig = gs.sig();
  const std::string& tok = sig.infix(alt.head);
  if (!tok.empty() && alt.args.size() == 2)
    return gs.name(alt.args[0]) + tok + gs.name(alt.args[1]);
  std::string out = sig.name(alt.head);
  if (!alt.args.empty()) {
    out += '(';
    for (size_t i = 0; i < alt.args.size(); ++i) {
      if (i) out += ',';
      out += gs.name(alt.args[i]);
    }
    out += ')';
  }
  return out;
}

std::string print_grammar(GrammarSystem& gs, std::span<const SortId> sorts) {
  std::string out;
  for (SortId s : sorts) {
    out += gs.name(s);
    out += " = ";
    const auto& alts = gs.alts(s);
    if (alts.empty()) {
      out += "_|_";
    } else {
      for (size_t i = 0; i < alts.size(); ++i) {
        if (i) out += " | ";
        out += print_alt(gs, alts[i]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string print_grammar(GrammarSystem& gs) {
  std::vector<SortId> all(gs.sort_count());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<SortId>(i);
  return print_grammar(gs, all);
}

namespace {

std::vector<std::string> split_alternatives(std::string_view rhs) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : rhs) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == '|' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// identifier or quoted operator name token
std::string take_ident(std::string_view& s) {
  s = trim(s);
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '$')
      ++i;
    else
      break;
  }
  std::string out(s.substr(0, i));
  s.remove_prefix(i);
  return out;
}

SortId resolve_sort_arg(GrammarSystem& gs, const std::string& ident) {
  SortId s = gs.find_sort(ident);
  if (s == kNoSort)
    throw ParseError("unknown sort name '" + ident + "' in grammar alternative");
  return s;
}

Alt parse_alternative(GrammarSystem& gs, std::string_view text, bool allow_new_vars) {
  Signature& sig = gs.sig();
  text = trim(text);
  std::string first = take_ident(text);
  if (first.empty()) throw ParseError("empty alternative");
  text = trim(text);
  if (text.empty()) {
    // nullary symbol or variable
    SymbolId h = sig.lookup(first);
    if (h == kNoSymbol) {
      if (!allow_new_vars && first[0] != '$')
        throw ParseError("unknown identifier '" + first + "'");
      h = sig.intern(first, 0, /*is_var=*/true);
    }
    if (sig.arity(h) != 0) throw ParseError("symbol '" + first + "' needs arguments");
    return Alt{h, {}};
  }
  if (text.front() == '(') {
    text.remove_prefix(1);
    std::vector<SortId> args;
    for (;;) {
      std::string ident = take_ident(text);
      args.push_back(resolve_sort_arg(gs, ident));
      text = trim(text);
      if (text.empty()) throw ParseError("missing ')' in alternative");
      if (text.front() == ',') { text.remove_prefix(1); continue; }
      if (text.front() == ')') { text.remove_prefix(1); break; }
      throw ParseError("bad character in alternative: " + std::string(text));
    }
    if (!trim(text).empty()) throw ParseError("trailing text in alternative");
    SymbolId h = sig.lookup(first);
    if (h == kNoSymbol) h = sig.intern(first, static_cast<int>(args.size()));
    return Alt{h, std::move(args)};
  }
  // infix: NAME TOK NAME
  std::string tok;
  if (text.size() >= 2 && text.substr(0, 2) == "->") {
    tok = "->";
    text.remove_prefix(2);
  } else {
    tok = std::string(1, text.front());
    text.remove_prefix(1);
  }
  SymbolId h = sig.by_infix(tok);
  if (h == kNoSymbol) throw ParseError("unknown infix operator '" + tok + "'");
  SortId left = resolve_sort_arg(gs, first);
  std::string second = take_ident(text);
  if (!trim(text).empty()) throw ParseError("trailing text in alternative");
  SortId right = resolve_sort_arg(gs, second);
  return Alt{h, {left, right}};
}

}  // namespace

std::vector<SortId> parse_grammar(GrammarSystem& gs, std::string_view text, bool allow_new_vars) {
  std::vector<std::pair<SortId, std::string>> lines;
  size_t pos = 0;
  std::vector<SortId> added;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("grammar line without '='");
    std::string name(trim(line.substr(0, eq)));
    SortId s = gs.find_sort(name);
    if (s == kNoSort) s = gs.add_sort(name);
    added.push_back(s);
    lines.emplace_back(s, std::string(trim(line.substr(eq + 1))));
  }
  for (auto& [s, rhs] : lines) {
    if (trim(rhs) == "_|_") continue;
    for (const std::string& part : split_alternatives(rhs))
      gs.add_alt(s, parse_alternative(gs, part, allow_new_vars));
  }
  return added;
}

}  // namespace eau
