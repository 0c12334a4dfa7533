#include "eau/apps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eau/oracle.hpp"
#include "eau/syntax.hpp"

namespace eau {

MatrixReport validate_instance_matrix(const TermBank& bank, const InstanceMatrix& g) {
  MatrixReport r;
  if (g.rows.empty()) {
    r.req1_column_heads = false;
    r.notes.push_back("no rows given");
    return r;
  }
  size_t cols = g.rows[0].size();
  for (size_t c = 0; c < cols; ++c) {
    SymbolId first = bank.head(g.rows[0][c]);
    bool differs = false;
    for (const auto& row : g.rows)
      if (bank.head(row[c]) != first) { differs = true; break; }
    if (!differs) r.req1_column_heads = false;
  }
  for (size_t c1 = 0; c1 < cols && r.req2_columns_distinct; ++c1)
    for (size_t c2 = c1 + 1; c2 < cols; ++c2) {
      bool same = true;
      for (const auto& row : g.rows)
        if (row[c1] != row[c2]) { same = false; break; }
      if (same) { r.req2_columns_distinct = false; break; }
    }
  for (size_t r1 = 0; r1 < g.rows.size() && r.req5_rows_distinct; ++r1)
    for (size_t r2 = r1 + 1; r2 < g.rows.size(); ++r2)
      if (g.rows[r1] == g.rows[r2]) { r.req5_rows_distinct = false; break; }
  if (g.rows.size() > 4)
    r.notes.push_back("requirement 4: " + std::to_string(g.rows.size()) + " rows may be slow");
  size_t biggest = 0;
  for (const auto& row : g.rows)
    for (TermId t : row) biggest = std::max<size_t>(biggest, bank.node_count(t));
  if (biggest > 12)
    r.notes.push_back("requirement 6: instance of size " + std::to_string(biggest));
  return r;
}

namespace {

SortId apply_filters(ClassGrammar& cg, SortId raw, const Filters& filters,
                     std::span<const SymbolId> result_vars) {
  GrammarSystem& gs = cg.grammar();
  std::vector<SortId> parts{raw};
  std::vector<SymbolId> funcs = cg.function_symbols();
  if (filters.normal_form) {
    parts.push_back(
        normal_form_sort(gs, cg.bank(), cg.rules(), funcs, result_vars, filters.approx));
  }
  if (!filters.may_occur.empty()) {
    parts.push_back(var_filter_sort(gs, funcs, filters.must_occur, filters.may_occur));
  }
  if (parts.size() == 1) return raw;
  SortId filtered = intersect(gs, parts);
  gs.finalize();
  return filtered;
}

}  // namespace

LemmaCandidates generate_lemma_candidates(ClassGrammar& classes, TermId t,
                                          const InstanceMatrix& g, const Filters& filters) {
  TermBank& bank = classes.bank();
  LemmaCandidates out;
  out.report = validate_instance_matrix(bank, g);

  std::vector<SymbolId> tvars = bank.vars(t);
  size_t m = g.rows.size();
  std::vector<TermId> instances;
  for (const auto& row : g.rows) {
    if (row.size() != tvars.size())
      throw std::invalid_argument("instance row width differs from vars(t)");
    Substitution sigma;
    for (size_t c = 0; c < tvars.size(); ++c) sigma.bind(tvars[c], row[c]);
    instances.push_back(sigma.apply(bank, t));
  }

  out.registry = std::make_unique<VarRegistry>(bank.sig(), static_cast<int>(m));
  out.pattern = syntactic_au(bank, *out.registry, instances);

  std::vector<SymbolId> v = bank.vars(out.pattern);
  std::vector<SortId> class_sorts;
  for (TermId inst : instances) class_sorts.push_back(classes.class_of(inst));

  Engine engine(classes.grammar(), bank, *out.registry, v);
  out.raw_sort = engine.rsg_v(class_sorts);
  out.sort = apply_filters(classes, out.raw_sort, filters, v);
  return out;
}

SeriesGuess guess_series(ClassGrammar& classes, std::span<const TermId> newest_first, int k,
                         const Filters& filters) {
  TermBank& bank = classes.bank();
  Signature& sig = bank.sig();
  size_t n = newest_first.size();
  if (k <= 0 || static_cast<size_t>(k) > n)
    throw std::invalid_argument("example count k must satisfy 1 <= k <= n");
  SymbolId nil = sig.lookup("[]");
  SymbolId cons = sig.lookup(".");
  SymbolId zero = sig.lookup("0");
  SymbolId suc = sig.lookup("suc");
  if (nil == kNoSymbol || cons == kNoSymbol || zero == kNoSymbol || suc == kNoSymbol)
    throw std::runtime_error("series guessing needs [], ., 0 and suc in the signature");

  // oldest-first view: t_1 .. t_n
  std::vector<TermId> asc(newest_first.rbegin(), newest_first.rend());
  SeriesGuess out;
  for (int j = 1; j <= k; ++j) {
    size_t target = n - k + j;  // 1-based index of the successor element
    // annotation suc^{target-1}(0), then the target-1 preceding elements,
    // newest first
    TermId rank = bank.leaf(zero);
    for (size_t i = 0; i + 1 < target; ++i) rank = bank.app(suc, {rank});
    TermId list = bank.leaf(nil);
    for (size_t i = 1; i <= target - 1; ++i) list = bank.app(cons, {asc[i - 1], list});
    out.suffixes.push_back(bank.app(cons, {rank, list}));
    out.targets.push_back(asc[target - 1]);
  }

  out.registry = std::make_unique<VarRegistry>(sig, k);
  out.pattern = syntactic_au(bank, *out.registry, out.suffixes);

  std::vector<SymbolId> v = bank.vars(out.pattern);
  std::vector<SortId> class_sorts;
  for (TermId t : out.targets) class_sorts.push_back(classes.class_of(t));

  Engine engine(classes.grammar(), bank, *out.registry, v);
  out.raw_sort = engine.rsg_v(class_sorts);
  out.sort = apply_filters(classes, out.raw_sort, filters, v);
  out.finite = classes.grammar().is_finite(out.sort);
  return out;
}

TermId apply_series_law(TermBank& bank, TermId pattern, TermId law, TermId annotated_suffix) {
  Substitution sigma;
  if (!match_term(bank, pattern, annotated_suffix, sigma))
    throw std::runtime_error("series pattern does not match the suffix");
  return sigma.apply(bank, law);
}

double quality(std::span<const TermId> stream, const std::function<bool(TermId)>& desired,
               double delta, size_t horizon) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  double q = 0.0;
  double w = 1.0;
  for (size_t i = 0; i < stream.size() && i < horizon; ++i) {
    w *= delta;
    if (desired(stream[i])) q += w;
  }
  return q;
}

// --- axiomatization ----------------------------------------------------------------

namespace {

// One-sided matching where exactly the given variables are substitutable;
// all other symbols (including foreign variables) act as constants.
bool match_over(const TermBank& bank, TermId pattern, TermId subject, Substitution& out,
                std::span<const SymbolId> variables) {
  SymbolId h = bank.head(pattern);
  if (std::find(variables.begin(), variables.end(), h) != variables.end()) {
    if (auto bound = out.lookup(h)) return *bound == subject;
    out.bind(h, subject);
    return true;
  }
  if (h != bank.head(subject)) return false;
  auto pa = bank.args(pattern);
  auto sa = bank.args(subject);
  for (size_t i = 0; i < pa.size(); ++i)
    if (!match_over(bank, pa[i], sa[i], out, variables)) return false;
  return true;
}

}  // namespace

std::vector<size_t> subsume_instances(const TermBank& bank, const AxiomSet& ax,
                                      std::span<const SymbolId> variables) {
  auto instance_of = [&](const FormalEquation& gen, const FormalEquation& e) {
    Substitution sigma;
    return match_over(bank, gen.lhs, e.lhs, sigma, variables) &&
           match_over(bank, gen.rhs, e.rhs, sigma, variables);
  };
  std::vector<size_t> kept;
  const auto& eqs = ax.equations;
  for (size_t i = 0; i < eqs.size(); ++i) {
    bool drop = false;
    for (size_t j = 0; j < eqs.size() && !drop; ++j) {
      if (i == j) continue;
      if (!instance_of(eqs[j], eqs[i])) continue;
      if (instance_of(eqs[i], eqs[j])) {
        if (j < i) drop = true;  // variant of an earlier equation
      } else {
        drop = true;  // proper instance
      }
    }
    if (!drop) kept.push_back(i);
  }
  return kept;
}

AxiomatizeResult axiomatize_typed(const Theory& th, std::span<const TypedVarSpec> vars,
                                  const AxiomatizeOptions& opts) {
  const FiniteAlgebra& alg = th.algebra;
  if (alg.empty()) throw std::invalid_argument("axiomatize needs a finite algebra");
  TermBank& bank = *th.bank;
  AxiomatizeResult out;
  out.gs = std::make_unique<GrammarSystem>(*th.sig);
  GrammarSystem& gs = *out.gs;

  AlgebraClassGrammar classes(gs, bank, alg);

  // B matrix: one column per assignment of carrier elements to the
  // variables, lexicographic over the carrier element order.
  size_t width = 1;
  for (const TypedVarSpec& v : vars) {
    if (v.carrier < 0 || v.carrier >= static_cast<int>(alg.carriers.size()))
      throw std::invalid_argument("typed variable with unknown carrier");
    width *= alg.carriers[v.carrier].elements.size();
  }
  if (width == 0 || width > opts.tuple_cap)
    throw std::runtime_error("tuple width exceeds the configured cap");
  size_t tuple_total = 0;
  for (size_t c = 0; c < alg.carriers.size(); ++c) {
    size_t cnt = 1;
    for (size_t i = 0; i < width; ++i) {
      cnt *= alg.carriers[c].elements.size();
      if (cnt > opts.tuple_cap) throw std::runtime_error("tuple count exceeds the configured cap");
    }
    tuple_total += cnt;
  }

  out.registry = std::make_unique<VarRegistry>(*th.sig, static_cast<int>(width), "x");
  // column j assigns element index (j / stride_i) % |carrier_i| to var i
  std::vector<size_t> strides(vars.size(), 1);
  for (size_t i = vars.size(); i-- > 1;)
    strides[i - 1] = strides[i] * alg.carriers[vars[i].carrier].elements.size();
  for (size_t i = 0; i < vars.size(); ++i) {
    std::vector<int32_t> key;
    for (size_t j = 0; j < width; ++j) {
      size_t idx = (j / strides[i]) % alg.carriers[vars[i].carrier].elements.size();
      key.push_back(bank.leaf(alg.carriers[vars[i].carrier].elements[idx]));
    }
    out.vars.push_back(out.registry->var_for(VarRegistry::KeyKind::Terms, key));
  }

  Engine engine(gs, bank, *out.registry, out.vars);

  // rsg_V for every tuple class, per carrier, tuples in lexicographic order.
  struct TupleClass {
    int carrier;
    std::vector<int> elems;
    SortId sort;
  };
  std::vector<TupleClass> tuples;
  for (size_t c = 0; c < alg.carriers.size(); ++c) {
    size_t m = alg.carriers[c].elements.size();
    std::vector<int> elems(width, 0);
    for (;;) {
      std::vector<SortId> arg_sorts;
      for (int e : elems) arg_sorts.push_back(classes.class_of_element(static_cast<int>(c), e));
      SortId r = engine.rsg_v(arg_sorts);
      tuples.push_back(TupleClass{static_cast<int>(c), elems, r});
      int pos = static_cast<int>(width) - 1;
      while (pos >= 0 && ++elems[pos] == static_cast<int>(m)) {
        elems[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  gs.finalize();
  out.total_tuples = tuples.size();

  std::unordered_map<SortId, int> class_index;
  for (const TupleClass& tc : tuples) {
    if (gs.is_empty(tc.sort)) {
      ++out.empty_tuples;
      continue;
    }
    int idx = static_cast<int>(out.class_sorts.size());
    class_index.emplace(tc.sort, idx);
    out.class_sorts.push_back(tc.sort);
    std::string label = alg.carriers[tc.carrier].type_name + "(";
    for (size_t i = 0; i < tc.elems.size(); ++i) {
      if (i) label += ",";
      label += th.sig->name(alg.carriers[tc.carrier].elements[tc.elems[i]]);
    }
    label += ")";
    out.class_labels.push_back(label);
    out.class_nf.push_back(minimal_term(gs, bank, tc.sort));
  }

  // TH per the deductive-closure construction: one equation per head-normal
  // production, f(nf_args) : nf.
  for (size_t ci = 0; ci < out.class_sorts.size(); ++ci) {
    SortId s = out.class_sorts[ci];
    for (const Alt& a : gs.alts(s)) {
      FormalEquation eq;
      eq.source_class = static_cast<int>(ci);
      eq.rhs = out.class_nf[ci];
      if (a.args.empty()) {
        eq.lhs = bank.leaf(a.head);
      } else {
        std::vector<TermId> args;
        for (SortId arg : a.args) {
          auto it = class_index.find(arg);
          if (it == class_index.end())
            throw std::logic_error("production refers to an unknown tuple class");
          args.push_back(out.class_nf[it->second]);
        }
        eq.lhs = bank.app(a.head, args);
      }
      out.th.equations.push_back(eq);
    }
  }

  // s_valid as the union of r:r over the nonempty classes.
  SymbolId colon = th.sig->lookup(":");
  if (colon == kNoSymbol) {
    colon = th.sig->intern(":", 2);
    th.sig->set_infix(colon, ":");
  }
  out.s_valid = gs.add_sort("s_valid");
  for (SortId s : out.class_sorts) gs.add_alt(out.s_valid, Alt{colon, {s, s}});
  gs.finalize();

  out.kept = subsume_instances(bank, out.th, out.vars);
  return out;
}

AxiomatizeResult axiomatize(const Theory& th, int n, const AxiomatizeOptions& opts) {
  if (th.algebra.carriers.size() != 1)
    throw std::invalid_argument("untyped axiomatization needs a single carrier");
  std::vector<TypedVarSpec> vars;
  for (int i = 0; i < n; ++i) vars.push_back(TypedVarSpec{"x" + std::to_string(i + 1), 0});
  return axiomatize_typed(th, vars, opts);
}

TermId ground_rewrite_nf(TermBank& bank, const AxiomSet& ax, TermId t, int fuel) {
  // Ground rewriting: an equation applies where a subterm equals its
  // left-hand side literally (variables act as constants).
  std::unordered_map<TermId, TermId> step;
  for (const FormalEquation& e : ax.equations)
    if (e.lhs != e.rhs && !step.count(e.lhs)) step.emplace(e.lhs, e.rhs);
  std::function<TermId(TermId)> nf = [&](TermId u) -> TermId {
    for (;;) {
      if (--fuel < 0) throw FuelExhausted("ground rewrite fuel exhausted");
      auto as = bank.args(u);
      if (!as.empty()) {
        std::vector<TermId> na(as.begin(), as.end());
        bool ch = false;
        for (TermId& a : na) {
          TermId b = nf(a);
          if (b != a) ch = true;
          a = b;
        }
        if (ch) u = bank.app(bank.head(u), na);
      }
      auto it = step.find(u);
      if (it == step.end()) return u;
      u = it->second;
    }
  };
  return nf(t);
}

}  // namespace eau
