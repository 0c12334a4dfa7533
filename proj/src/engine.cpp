#include "eau/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace eau {

void SearchTree::insert(std::span<const SymbolId> path) {
  int cur = kRoot;
  for (SymbolId f : path) {
    Node& n = nodes_[cur];
    auto it = std::lower_bound(n.begin(), n.end(), f,
                               [](const auto& e, SymbolId s) { return e.first < s; });
    if (it != n.end() && it->first == f) {
      cur = it->second;
    } else {
      int next = static_cast<int>(nodes_.size());
      // n may dangle after emplace_back; insert first.
      nodes_[cur].insert(it, {f, next});
      nodes_.emplace_back();
      cur = next;
    }
  }
}

int SearchTree::child(int node, SymbolId f) const {
  if (node == kNil) return kNil;
  const Node& n = nodes_[node];
  auto it = std::lower_bound(n.begin(), n.end(), f,
                             [](const auto& e, SymbolId s) { return e.first < s; });
  if (it != n.end() && it->first == f) return it->second;
  return kNil;
}

std::vector<PreGroup> pre_group(const GrammarSystem& gs, SortId s) {
  const Signature& sig = gs.sig();
  const auto& alts = gs.alts(s);
  std::vector<int> order(alts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (alts[a].head == alts[b].head) return false;
    return sig.precedes(alts[a].head, alts[b].head);
  });
  std::vector<PreGroup> groups;
  for (int idx : order) {
    if (!groups.empty() && groups.back().head == alts[idx].head) {
      groups.back().alt_index.push_back(idx);
    } else {
      groups.push_back(PreGroup{alts[idx].head, {idx}});
    }
  }
  return groups;
}

namespace {

struct Grouping {
  const GrammarSystem& gs;
  const SearchTree& vt;
  const std::vector<std::vector<PreGroup>>& lists;
  const std::vector<SortId>& sorts;
  std::vector<ArgTuple>& out;

  SymbolId head_of(size_t sort_pos, const PreGroup& g) const { return g.head; }

  void emit(const std::vector<const PreGroup*>& group, bool eq) {
    size_t n = group.size();
    std::vector<size_t> idx(n, 0);
    for (;;) {
      ArgTuple t;
      t.equal_heads = eq;
      t.alt_index.resize(n);
      for (size_t i = 0; i < n; ++i) t.alt_index[i] = group[i]->alt_index[idx[i]];
      out.push_back(std::move(t));
      size_t pos = n;
      while (pos > 0) {
        --pos;
        if (++idx[pos] < group[pos]->alt_index.size()) break;
        idx[pos] = 0;
        if (pos == 0) return;
      }
      if (pos == 0 && idx[0] == 0) return;
    }
  }

  // Priorized rules: Join, Output, Abort Ne, Abort Eq, Follow, Skip, Init,
  // Abort [].
  void go(bool eq, int vtn, std::vector<const PreGroup*>& group, size_t o, size_t i) {
    if (o == lists.size()) {  // (Output)
      emit(group, eq);
      return;
    }
    const std::vector<PreGroup>& cur = lists[o];
    // (Join)
    if (eq && !group.empty() && i < cur.size() && cur[i].head == group.back()->head) {
      group.push_back(&cur[i]);
      go(true, vt.child(vtn, cur[i].head), group, o + 1, 0);
      group.pop_back();
      go(true, vtn, group, o, i + 1);
      return;
    }
    // (Abort Ne)
    if (!eq && vtn == SearchTree::kNil) return;
    // (Abort Eq)
    if (eq && vtn == SearchTree::kNil && !group.empty() && i < cur.size() &&
        gs.sig().precedes(group.back()->head, cur[i].head))
      return;
    // (Follow)
    if (!group.empty() && i < cur.size()) {
      int child = vt.child(vtn, cur[i].head);
      if (child != SearchTree::kNil) {
        group.push_back(&cur[i]);
        go(false, child, group, o + 1, 0);
        group.pop_back();
        go(eq, vtn, group, o, i + 1);
        return;
      }
    }
    // (Skip)
    if (!group.empty() && i < cur.size()) {
      go(eq, vtn, group, o, i + 1);
      return;
    }
    // (Init)
    if (group.empty() && i < cur.size()) {
      group.push_back(&cur[i]);
      go(true, vt.child(vtn, cur[i].head), group, o + 1, 0);
      group.pop_back();
      go(true, vtn, group, o, i + 1);
      return;
    }
    // (Abort []) : i == cur.size()
  }
};

}  // namespace

std::vector<ArgTuple> select_argument_tuples(const GrammarSystem& gs, const SearchTree& vt,
                                             const std::vector<std::vector<PreGroup>>& pregrouped,
                                             const std::vector<SortId>& sorts) {
  std::vector<ArgTuple> out;
  Grouping g{gs, vt, pregrouped, sorts, out};
  std::vector<const PreGroup*> group;
  g.go(true, SearchTree::kRoot, group, 0, 0);
  return out;
}

Engine::Engine(GrammarSystem& gs, TermBank& bank, VarRegistry& reg,
               std::vector<SymbolId> allowed_vars, EngineOptions opts)
    : gs_(&gs), bank_(&bank), reg_(&reg), allowed_(std::move(allowed_vars)), opts_(opts) {
  std::vector<SymbolId> path;
  for (SymbolId v : allowed_) {
    const std::vector<int32_t>* key = reg.key_of(v);
    if (!key || reg.kind_of(v) != VarRegistry::KeyKind::Terms)
      throw std::invalid_argument("allowed variable without term tuple in registry");
    path.clear();
    for (int32_t t : *key) path.push_back(bank.head(static_cast<TermId>(t)));
    vt_.insert(path);
  }
}

SortId Engine::materialize_alt(SortId s, int alt_index) {
  auto it = alt_sorts_.find({s, alt_index});
  if (it != alt_sorts_.end()) return it->second;
  SortId id = gs_->add_sort(gs_->name(s) + "#" + std::to_string(alt_index));
  gs_->add_alt(id, gs_->alts(s)[alt_index]);
  alt_sorts_.emplace(std::make_pair(s, alt_index), id);
  return id;
}

SortId Engine::run(const std::vector<SortId>& sorts, bool hsg_mode, int depth_left) {
  int depth_key = opts_.cutoff ? depth_left : 0;
  auto key = std::make_pair(sorts, depth_key);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;  // Case 1

  SortId theta = gs_->add_sort("g" + std::to_string(gs_->sort_count() + 1));
  memo_.emplace(std::move(key), theta);

  if (hsg_mode) {
    std::vector<int32_t> skey(sorts.begin(), sorts.end());
    SymbolId v = reg_->var_for(VarRegistry::KeyKind::Sorts, skey);
    gs_->add_alt(theta, Alt{v, {}});
  }
  if (opts_.cutoff && depth_left <= 0) return theta;  // cut off: bottom

  std::vector<ArgTuple> tuples;
  if (opts_.plain_rsg) {
    // Alg. rsg: the naive cross product; every head disagreement becomes
    // its own variable.
    std::vector<int> idx(sorts.size(), 0);
    bool any_empty = false;
    for (SortId s : sorts)
      if (gs_->alts(s).empty()) any_empty = true;
    while (!any_empty) {
      ArgTuple t;
      t.alt_index = idx;
      SymbolId h = gs_->alts(sorts[0])[idx[0]].head;
      t.equal_heads = true;
      for (size_t i = 0; i < sorts.size(); ++i)
        if (gs_->alts(sorts[i])[idx[i]].head != h) t.equal_heads = false;
      tuples.push_back(std::move(t));
      int pos = static_cast<int>(sorts.size()) - 1;
      while (pos >= 0 && ++idx[pos] == static_cast<int>(gs_->alts(sorts[pos]).size())) {
        idx[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  } else {
    std::vector<std::vector<PreGroup>> lists;
    lists.reserve(sorts.size());
    for (SortId s : sorts) lists.push_back(pre_group(*gs_, s));
    tuples = select_argument_tuples(*gs_, vt_, lists, sorts);
  }
  // Argument order is semantically significant but the emitted grammar
  // follows the source-disjunct positions of the naive double loop, which
  // the paper's figures (and the enumeration goldens) use.
  std::stable_sort(tuples.begin(), tuples.end(),
                   [](const ArgTuple& a, const ArgTuple& b) { return a.alt_index < b.alt_index; });

  for (const ArgTuple& t : tuples) {
    bool want_vars = !t.equal_heads || opts_.overgeneralize;
    if (t.equal_heads) {
      SymbolId f = gs_->alts(sorts[0])[t.alt_index[0]].head;
      int arity = gs_->sig().arity(f);
      Alt alt;
      alt.head = f;
      alt.args.reserve(arity);
      std::vector<SortId> child(sorts.size());
      bool ok = true;
      for (int j = 0; j < arity && ok; ++j) {
        for (size_t i = 0; i < sorts.size(); ++i)
          child[i] = gs_->alts(sorts[i])[t.alt_index[i]].args[j];
        alt.args.push_back(run(child, hsg_mode, depth_left - 1));
      }
      if (ok) gs_->add_alt(theta, std::move(alt));
    }
    if (!want_vars || hsg_mode) continue;
    if (opts_.plain_rsg && !t.equal_heads) {
      std::vector<int32_t> skey;
      skey.reserve(sorts.size());
      for (size_t i = 0; i < sorts.size(); ++i)
        skey.push_back(materialize_alt(sorts[i], t.alt_index[i]));
      SymbolId v = reg_->var_for(VarRegistry::KeyKind::Sorts, skey);
      gs_->add_alt(theta, Alt{v, {}});
      continue;
    }
    // Case 5: each tuple of TP is tested for membership in the selected
    // disjuncts.
    for (SymbolId v : allowed_) {
      const std::vector<int32_t>& terms = *reg_->key_of(v);
      bool ok = true;
      for (size_t i = 0; i < sorts.size() && ok; ++i) {
        const Alt& d = gs_->alts(sorts[i])[t.alt_index[i]];
        ok = member_alt(*gs_, *bank_, static_cast<TermId>(terms[i]), d, member_cache_);
      }
      if (ok) gs_->add_alt(theta, Alt{v, {}});
    }
  }
  return theta;
}

SortId Engine::rsg_v(std::span<const SortId> sorts) {
  if (sorts.empty()) throw std::invalid_argument("rsg_v needs at least one sort");
  gs_->finalize();
  std::vector<SortId> v(sorts.begin(), sorts.end());
  SortId r = run(v, /*hsg_mode=*/false, opts_.cutoff.value_or(1 << 30));
  gs_->finalize();
  return r;
}

SortId Engine::hsg(std::span<const SortId> sorts) {
  if (sorts.empty()) throw std::invalid_argument("hsg needs at least one sort");
  gs_->finalize();
  std::vector<SortId> v(sorts.begin(), sorts.end());
  SortId r = run(v, /*hsg_mode=*/true, opts_.cutoff.value_or(1 << 30));
  gs_->finalize();
  return r;
}

SortId intersect(GrammarSystem& gs, std::span<const SortId> sorts) {
  TermBank scratch(gs.sig());
  VarRegistry reg(gs.sig(), static_cast<int>(sorts.size()), "i");
  Engine e(gs, scratch, reg);
  return e.rsg_v(sorts);
}

// --- nonlinear second phase ---------------------------------------------------

std::vector<std::vector<SymbolId>> calc_infs_list(
    const std::vector<SymbolId>& vars, const std::vector<std::pair<SymbolId, SymbolId>>& l2,
    const std::vector<std::pair<SymbolId, int>>& v2,
    const std::function<bool(const std::vector<SymbolId>&)>& infs_nonempty) {
  auto count_of = [&](SymbolId v) {
    for (auto& [w, c] : v2)
      if (w == v) return c;
    return 0;
  };
  auto in_l2 = [&](SymbolId a, SymbolId b) {
    for (auto& [x, y] : l2)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  };
  auto rank = [&](SymbolId v) {
    return std::find(vars.begin(), vars.end(), v) - vars.begin();
  };
  auto sorted_set = [&](std::vector<SymbolId> s) {
    std::sort(s.begin(), s.end(), [&](SymbolId a, SymbolId b) { return rank(a) < rank(b); });
    return s;
  };

  std::vector<std::vector<SymbolId>> out;
  auto subset_of_output = [&](const std::vector<SymbolId>& s) {
    for (const auto& o : out) {
      if (std::includes(o.begin(), o.end(), s.begin(), s.end(),
                        [&](SymbolId a, SymbolId b) { return rank(a) < rank(b); }))
        return true;
    }
    return false;
  };

  std::function<void(std::vector<SymbolId>, std::vector<SymbolId>, std::vector<SymbolId>)> go =
      [&](std::vector<SymbolId> set, std::vector<SymbolId> list, std::vector<SymbolId> susp) {
        while (!list.empty()) {
          SymbolId v = list.front();
          list.erase(list.begin());
          if (std::find(set.begin(), set.end(), v) != set.end()) continue;  // (Member)
          if (count_of(v) < static_cast<int>(set.size())) continue;        // (Count)
          bool missing_pair = false;                                       // (Sublist2)
          for (SymbolId w : set)
            if (!in_l2(v, w)) { missing_pair = true; break; }
          if (missing_pair) continue;
          std::vector<SymbolId> bigger = sorted_set([&] {                  // (Suplist)
            auto b = set;
            b.push_back(v);
            return b;
          }());
          if (subset_of_output(bigger)) {
            susp.insert(susp.begin(), v);
            continue;
          }
          if (infs_nonempty(bigger)) {  // (Inf Inh)
            std::vector<SymbolId> released = list;
            released.insert(released.end(), susp.begin(), susp.end());
            go(bigger, released, {});
            go(set, released, {});
            return;
          }
          // (Inf Empty): drop v
        }
        if (!susp.empty()) return;              // (Max Subs Susp)
        if (subset_of_output(set)) return;      // (Max Subsumed)
        out.push_back(sorted_set(set));         // (Output Max)
      };

  for (auto& [v1, v2pair] : l2) {
    go(sorted_set({v1, v2pair}), vars, {});
  }
  return out;
}

NonlinearResult nonlinear_phase(GrammarSystem& gs, TermBank& bank, VarRegistry& reg,
                                std::span<const SortId> roots) {
  gs.finalize();
  NonlinearResult res;

  // Variables introduced by the first phase, in creation order, restricted
  // to those occurring in the result sorts.
  std::vector<char> occurs(gs.sig().size(), 0);
  for (SortId root : roots)
    for (SortId s : gs.reachable(root))
      for (const Alt& a : gs.alts(s))
        if (a.args.empty() && reg.contains(a.head) &&
            reg.kind_of(a.head) == VarRegistry::KeyKind::Sorts)
          occurs[a.head] = 1;
  std::vector<SymbolId> vars;
  for (SymbolId v : reg.variables())
    if (v < static_cast<SymbolId>(occurs.size()) && occurs[v]) vars.push_back(v);

  // Pairwise sort intersections (I2) and memoized k-ary intersections.
  std::map<std::vector<SortId>, bool> inter_memo;
  auto tuple_nonempty = [&](std::vector<SortId> comps) {
    std::sort(comps.begin(), comps.end());
    comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
    if (comps.size() == 1) return !gs.is_empty(comps[0]);
    auto it = inter_memo.find(comps);
    if (it != inter_memo.end()) return it->second;
    SortId inter = intersect(gs, comps);
    bool ne = !gs.is_empty(inter);
    inter_memo.emplace(comps, ne);
    return ne;
  };

  std::vector<SortId> component_sorts;
  for (SymbolId v : vars)
    for (int32_t s : *reg.key_of(v))
      if (std::find(component_sorts.begin(), component_sorts.end(), static_cast<SortId>(s)) ==
          component_sorts.end())
        component_sorts.push_back(static_cast<SortId>(s));
  std::sort(component_sorts.begin(), component_sorts.end());
  for (size_t a = 0; a < component_sorts.size(); ++a)
    for (size_t b = a + 1; b < component_sorts.size(); ++b)
      if (tuple_nonempty({component_sorts[a], component_sorts[b]}))
        res.data.i2.emplace_back(component_sorts[a], component_sorts[b]);

  auto infs_nonempty = [&](const std::vector<SymbolId>& varset) {
    if (varset.empty()) return false;
    size_t width = reg.key_of(varset[0])->size();
    for (size_t i = 0; i < width; ++i) {
      std::vector<SortId> comps;
      for (SymbolId v : varset) comps.push_back(static_cast<SortId>((*reg.key_of(v))[i]));
      if (!tuple_nonempty(std::move(comps))) return false;
    }
    return true;
  };

  for (size_t a = 0; a < vars.size(); ++a)
    for (size_t b = a + 1; b < vars.size(); ++b)
      if (infs_nonempty({vars[a], vars[b]})) res.data.l2.emplace_back(vars[a], vars[b]);
  for (SymbolId v : vars) {
    int c = 0;
    for (auto& [x, y] : res.data.l2)
      if (x == v || y == v) ++c;
    res.data.v2.emplace_back(v, c);
  }

  res.maximal_sets = calc_infs_list(vars, res.data.l2, res.data.v2, infs_nonempty);

  // Fresh variable per maximal set; every occurrence of a member gains the
  // new variable as an additional alternative right after it.
  std::map<SymbolId, std::vector<SymbolId>> additions;
  for (const auto& set : res.maximal_sets) {
    std::vector<int32_t> key(set.begin(), set.end());
    SymbolId fresh = reg.var_for(VarRegistry::KeyKind::VarSet, key);
    res.new_vars.push_back(fresh);
    for (SymbolId member : set) additions[member].push_back(fresh);
  }
  for (size_t s = 0; s < gs.sort_count(); ++s) {
    const auto& alts = gs.alts(static_cast<SortId>(s));
    std::vector<Alt> updated;
    bool changed = false;
    for (const Alt& a : alts) {
      updated.push_back(a);
      if (!a.args.empty()) continue;
      auto it = additions.find(a.head);
      if (it == additions.end()) continue;
      for (SymbolId fresh : it->second) {
        Alt extra{fresh, {}};
        if (std::find(updated.begin(), updated.end(), extra) == updated.end()) {
          updated.push_back(extra);
          changed = true;
        }
      }
    }
    if (changed) gs.set_alts(static_cast<SortId>(s), std::move(updated));
  }
  gs.finalize();
  return res;
}

AntiunifyResult antiunify(GrammarSystem& gs, TermBank& bank, VarRegistry& reg,
                          std::span<const SortId> classes, AuMode mode,
                          std::vector<SymbolId> allowed_vars, EngineOptions opts) {
  AntiunifyResult out;
  if (mode == AuMode::TwoPhase) {
    Engine e(gs, bank, reg, {}, opts);
    out.sort = e.hsg(classes);
    out.nonlinear = nonlinear_phase(gs, bank, reg, std::span<const SortId>(&out.sort, 1));
  } else {
    Engine e(gs, bank, reg, std::move(allowed_vars), opts);
    out.sort = e.rsg_v(classes);
  }
  return out;
}

}  // namespace eau
