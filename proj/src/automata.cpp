#include <algorithm>
#include <map>
#include <stdexcept>

#include "eau/grammar.hpp"

namespace eau {

// Relative complement via the classic route: view `minus` as a bottom-up
// nondeterministic tree automaton, determinize it by subset construction
// over the joint alphabet, complement (accepting subsets are those that
// avoid the `minus` root), and intersect with `whole` by a product
// construction on the grammar side.
SortId subtract(GrammarSystem& gs, SortId whole, SortId minus) {
  gs.finalize();

  // Joint alphabet: every head symbol reachable from either operand.
  std::vector<SymbolId> alphabet;
  for (SortId root : {whole, minus})
    for (SortId s : gs.reachable(root))
      for (const Alt& a : gs.alts(s))
        if (std::find(alphabet.begin(), alphabet.end(), a.head) == alphabet.end())
          alphabet.push_back(a.head);
  std::sort(alphabet.begin(), alphabet.end());

  std::vector<SortId> mstates = gs.reachable(minus);

  using Subset = std::vector<SortId>;  // sorted
  std::vector<Subset> subsets;
  std::map<Subset, int> subset_index;
  auto intern_subset = [&](Subset q) {
    auto it = subset_index.find(q);
    if (it != subset_index.end()) return it->second;
    int idx = static_cast<int>(subsets.size());
    subsets.push_back(q);
    subset_index.emplace(std::move(q), idx);
    return idx;
  };

  // delta(f, arg subsets) = { s in mstates | some alt f(a1..ak) of s with ai in qi }
  auto delta = [&](SymbolId f, std::span<const int> argq) {
    Subset out;
    for (SortId s : mstates) {
      for (const Alt& a : gs.alts(s)) {
        if (a.head != f) continue;
        bool ok = true;
        for (size_t i = 0; i < a.args.size(); ++i) {
          const Subset& qi = subsets[argq[i]];
          if (!std::binary_search(qi.begin(), qi.end(), a.args[i])) { ok = false; break; }
        }
        if (ok) {
          if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
          break;
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  // Closure: iterate until no new subsets arise. The empty subset acts as
  // the sink, making the automaton complete over the alphabet.
  std::map<std::pair<SymbolId, std::vector<int>>, int> trans;
  bool grew = true;
  while (grew) {
    size_t before = subsets.size();
    for (SymbolId f : alphabet) {
      int k = gs.sig().arity(f);
      if (k == 0) {
        auto key = std::make_pair(f, std::vector<int>{});
        if (!trans.count(key)) trans.emplace(key, intern_subset(delta(f, {})));
        continue;
      }
      if (before == 0) continue;
      std::vector<int> combo(k, 0);
      bool done = false;
      while (!done) {
        auto key = std::make_pair(f, combo);
        if (!trans.count(key)) trans.emplace(key, intern_subset(delta(f, combo)));
        int pos = k - 1;
        while (pos >= 0 && ++combo[pos] == static_cast<int>(before)) {
          combo[pos] = 0;
          --pos;
        }
        done = pos < 0;
      }
    }
    grew = subsets.size() > before;
  }

  // Inverse transition index per (symbol, target subset).
  std::map<std::pair<SymbolId, int>, std::vector<std::vector<int>>> into;
  for (const auto& [key, target] : trans)
    into[{key.first, target}].push_back(key.second);

  // Product of `whole` with the determinized automaton, built lazily.
  std::map<std::pair<SortId, int>, SortId> pair_sort;
  std::vector<std::pair<SortId, int>> work;
  auto get_pair = [&](SortId w, int q) {
    auto it = pair_sort.find({w, q});
    if (it != pair_sort.end()) return it->second;
    SortId id = gs.add_sort(gs.name(w) + "@" + std::to_string(q));
    pair_sort.emplace(std::make_pair(w, q), id);
    work.emplace_back(w, q);
    return id;
  };

  SortId result = gs.add_sort(gs.name(whole) + "\\" + gs.name(minus));
  for (size_t q = 0; q < subsets.size(); ++q) {
    if (std::binary_search(subsets[q].begin(), subsets[q].end(), minus)) continue;
    get_pair(whole, static_cast<int>(q));
  }

  while (!work.empty()) {
    auto [w, q] = work.back();
    work.pop_back();
    SortId id = pair_sort.at({w, q});
    for (const Alt& a : gs.alts(w)) {
      auto it = into.find({a.head, q});
      if (it == into.end()) continue;
      for (const std::vector<int>& argq : it->second) {
        Alt pa;
        pa.head = a.head;
        for (size_t i = 0; i < a.args.size(); ++i) pa.args.push_back(get_pair(a.args[i], argq[i]));
        gs.add_alt(id, std::move(pa));
      }
    }
  }

  // The result unions all accepting (whole, q) components.
  for (size_t q = 0; q < subsets.size(); ++q) {
    if (std::binary_search(subsets[q].begin(), subsets[q].end(), minus)) continue;
    SortId p = pair_sort.at({whole, static_cast<int>(q)});
    for (const Alt& a : gs.alts(p)) gs.add_alt(result, a);
  }
  gs.finalize();
  return result;
}

}  // namespace eau
