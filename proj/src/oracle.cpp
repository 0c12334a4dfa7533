#include "eau/oracle.hpp"

#include <algorithm>
#include <unordered_set>

namespace eau {

TermId RewriteEngine::step_root(TermId t, bool* changed) {
  for (const Equation& r : rules_) {
    Substitution sigma;
    if (match_term(*bank_, r.lhs, t, sigma)) {
      *changed = true;
      if (--fuel_ < 0) throw FuelExhausted("rewrite fuel exhausted");
      return sigma.apply(*bank_, r.rhs);
    }
  }
  *changed = false;
  return t;
}

TermId RewriteEngine::normalize(TermId t, int depth_guard) {
  if (depth_guard <= 0) throw FuelExhausted("rewrite recursion too deep");
  auto it = cache_.find(t);
  if (it != cache_.end()) return it->second;
  TermId cur = t;
  for (;;) {
    // innermost: normalize arguments first
    auto as = bank_->args(cur);
    if (!as.empty()) {
      std::vector<TermId> na(as.begin(), as.end());
      bool arg_changed = false;
      for (TermId& a : na) {
        TermId b = normalize(a, depth_guard - 1);
        if (b != a) arg_changed = true;
        a = b;
      }
      if (arg_changed) cur = bank_->app(bank_->head(cur), na);
    }
    bool changed = false;
    TermId next = step_root(cur, &changed);
    if (!changed) break;
    cur = next;
  }
  cache_.emplace(t, cur);
  return cur;
}

TermId RewriteEngine::to_nf(TermId t) {
  fuel_ = fuel_budget_;
  return normalize(t, 10000);
}

bool RewriteEngine::reducible(TermId t) const {
  for (const Equation& r : rules_) {
    Substitution sigma;
    if (match_term(*bank_, r.lhs, t, sigma)) return true;
  }
  for (TermId a : bank_->args(t))
    if (reducible(a)) return true;
  return false;
}

TermId rewrite_to_nf(TermBank& bank, const std::vector<Equation>& rules, TermId t, int fuel) {
  RewriteEngine e(bank, rules, fuel);
  return e.to_nf(t);
}

std::vector<TermId> enumerate_terms(TermBank& bank, std::span<const SymbolId> symbols, int depth) {
  const Signature& sig = bank.sig();
  std::vector<TermId> all;
  std::unordered_set<TermId> seen;
  size_t prev_count = 0;
  for (int h = 1; h <= depth; ++h) {
    size_t snapshot = all.size();
    for (SymbolId f : symbols) {
      int k = sig.arity(f);
      if (h == 1) {
        if (k != 0) continue;
        TermId t = bank.leaf(f);
        if (seen.insert(t).second) all.push_back(t);
        continue;
      }
      if (k == 0) continue;
      // arguments over terms of height <= h-1, i.e. all[0..snapshot)
      std::vector<size_t> idx(k, 0);
      if (snapshot == 0) continue;
      for (;;) {
        std::vector<TermId> args(k);
        for (int j = 0; j < k; ++j) args[j] = all[idx[j]];
        TermId t = bank.app(f, args);
        if (seen.insert(t).second) all.push_back(t);
        int pos = k - 1;
        while (pos >= 0 && ++idx[pos] == snapshot) {
          idx[pos] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    }
    if (all.size() == prev_count) break;  // saturated early
    prev_count = all.size();
  }
  return all;
}

std::vector<TermId> reference_generalizations(TermBank& bank, const VarRegistry& reg,
                                              std::span<const SymbolId> allowed_vars,
                                              std::span<const SymbolId> function_symbols,
                                              std::span<const TermId> targets,
                                              const std::vector<Equation>& rules, int depth,
                                              int fuel) {
  std::vector<SymbolId> alphabet(function_symbols.begin(), function_symbols.end());
  for (SymbolId v : allowed_vars) alphabet.push_back(v);
  std::vector<TermId> candidates = enumerate_terms(bank, alphabet, depth);

  RewriteEngine rw(bank, rules, fuel);
  std::vector<TermId> target_nf;
  for (TermId t : targets) target_nf.push_back(rw.to_nf(t));
  std::vector<Substitution> projections;
  for (size_t i = 0; i < targets.size(); ++i)
    projections.push_back(reg.projection(static_cast<int>(i)));

  std::vector<TermId> out;
  for (TermId cand : candidates) {
    bool ok = true;
    for (size_t i = 0; i < targets.size() && ok; ++i) {
      TermId inst = projections[i].apply(bank, cand);
      ok = rw.to_nf(inst) == target_nf[i];
    }
    if (ok) out.push_back(cand);
  }
  return out;
}

std::vector<TermId> reference_language(GrammarSystem& gs, TermBank& bank, SortId s, int depth) {
  size_t k = gs.sort_count();
  // level[d][sort] = set of terms with unfolding depth <= d
  std::vector<std::vector<std::vector<TermId>>> level(
      depth + 1, std::vector<std::vector<TermId>>(k));
  std::vector<std::vector<std::unordered_set<TermId>>> level_set(
      depth + 1, std::vector<std::unordered_set<TermId>>(k));

  for (int d = 1; d <= depth; ++d) {
    // carry over the previous level
    for (size_t i = 0; i < k; ++i) {
      level[d][i] = level[d - 1][i];
      level_set[d][i] = level_set[d - 1][i];
    }
    bool changed = true;
    while (changed) {  // inner fixpoint for zero-cost alternatives
      changed = false;
      for (size_t i = 0; i < k; ++i) {
        for (const Alt& a : gs.alts(static_cast<SortId>(i))) {
          int sub = d - gs.alt_cost(a);
          if (sub < 0) continue;
          // cross product over argument languages at level `sub`
          size_t arity = a.args.size();
          std::vector<size_t> idx(arity, 0);
          bool any_empty = false;
          for (SortId arg : a.args)
            if (level[sub][arg].empty()) { any_empty = true; break; }
          if (any_empty) continue;
          for (;;) {
            std::vector<TermId> args(arity);
            for (size_t j = 0; j < arity; ++j) args[j] = level[sub][a.args[j]][idx[j]];
            TermId t = bank.app(a.head, args);
            if (level_set[d][i].insert(t).second) {
              level[d][i].push_back(t);
              changed = true;
            }
            if (arity == 0) break;
            int pos = static_cast<int>(arity) - 1;
            while (pos >= 0 && ++idx[pos] == level[sub][a.args[pos]].size()) {
              idx[pos] = 0;
              --pos;
            }
            if (pos < 0) break;
          }
        }
      }
    }
  }
  std::vector<TermId> out = level[depth][s];
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace eau
