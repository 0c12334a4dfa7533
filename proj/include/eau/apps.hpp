#ifndef EAU_APPS_HPP
#define EAU_APPS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eau/builders.hpp"
#include "eau/engine.hpp"

namespace eau {

// --- lemma-candidate generation -------------------------------------------------

// Rows m x columns n of ground terms; columns are indexed by the variables
// of the left-hand side term.
struct InstanceMatrix {
  std::vector<std::vector<TermId>> rows;
};

struct MatrixReport {
  bool req1_column_heads = true;   // each column has two different head symbols
  bool req2_columns_distinct = true;
  bool req5_rows_distinct = true;
  std::vector<std::string> notes;  // advisory (requirements 3, 4, 6)
  bool hard_ok() const { return req1_column_heads && req2_columns_distinct && req5_rows_distinct; }
};

MatrixReport validate_instance_matrix(const TermBank& bank, const InstanceMatrix& g);

struct Filters {
  bool normal_form = false;
  NonlinearLhs approx = NonlinearLhs::Error;  // for nonlinear redexes
  std::vector<SymbolId> must_occur;  // var filter V (subset of W)
  std::vector<SymbolId> may_occur;   // var filter W; empty = no var filter
};

struct LemmaCandidates {
  TermId pattern = kNoTerm;  // t^l
  SortId sort = kNoSort;     // s^r after filters
  SortId raw_sort = kNoSort;
  std::unique_ptr<VarRegistry> registry;
  MatrixReport report;
};

// t^l := sg of the row instances; s^r := rsg_V(vars(t^l), [eqc(sigma_i t)...]),
// filters applied by sort intersection.
LemmaCandidates generate_lemma_candidates(ClassGrammar& classes, TermId t,
                                          const InstanceMatrix& g, const Filters& filters = {});

// --- series guessing -------------------------------------------------------------

struct SeriesGuess {
  TermId pattern = kNoTerm;          // t^l over the length-annotated suffixes
  std::vector<TermId> suffixes;      // the k annotated suffixes, oldest target first
  std::vector<TermId> targets;       // t_{n-k+1} .. t_n
  SortId sort = kNoSort;             // law sort after filters
  SortId raw_sort = kNoSort;
  bool finite = false;
  std::unique_ptr<VarRegistry> registry;
};

// series is given newest first; k example suffixes are built and
// anti-unified, then rsg_V over the classes of the last k elements.
SeriesGuess guess_series(ClassGrammar& classes, std::span<const TermId> newest_first, int k,
                         const Filters& filters = {});

// Applies the rewrite rule t^l ~> law to a length-annotated suffix.
TermId apply_series_law(TermBank& bank, TermId pattern, TermId law, TermId annotated_suffix);

// Truncated quality measure q = sum d_i * delta^i.
double quality(std::span<const TermId> stream, const std::function<bool(TermId)>& desired,
               double delta, size_t horizon);

// --- axiomatization ---------------------------------------------------------------

struct FormalEquation {
  TermId lhs = kNoTerm;
  TermId rhs = kNoTerm;
  int source_class = -1;  // index into AxiomatizeResult::class_sorts
};

struct AxiomSet {
  std::vector<FormalEquation> equations;
};

// Removes every equation that is a proper instance of another, or a
// variant of an earlier one. Matching is purely syntactic; returns the
// kept indices in order.
std::vector<size_t> subsume_instances(const TermBank& bank, const AxiomSet& ax,
                                      std::span<const SymbolId> variables);

struct TypedVarSpec {
  std::string name;
  int carrier = 0;
};

struct AxiomatizeOptions {
  size_t tuple_cap = 1 << 20;  // cap on the number of tuple classes
};

struct AxiomatizeResult {
  std::unique_ptr<GrammarSystem> gs;
  std::unique_ptr<VarRegistry> registry;
  std::vector<SymbolId> vars;               // x_1..x_n
  std::vector<SortId> class_sorts;          // nonempty tuple classes, emission order
  std::vector<std::string> class_labels;    // printable tuple descriptions
  std::vector<TermId> class_nf;             // chosen normal forms
  size_t total_tuples = 0;
  size_t empty_tuples = 0;
  AxiomSet th;                              // full TH
  std::vector<size_t> kept;                 // indices after subsume_instances
  SortId s_valid = kNoSort;
};

// Axiomatization of a finite algebra over typed variables (Thm. z2 /
// Cor. z4); the untyped case passes n variables of the sole carrier.
AxiomatizeResult axiomatize_typed(const Theory& th, std::span<const TypedVarSpec> vars,
                                  const AxiomatizeOptions& opts = {});
AxiomatizeResult axiomatize(const Theory& th, int n, const AxiomatizeOptions& opts = {});

// Noetherian ground rewriting with the TH equations (variables treated as
// constants); used for the deductive-closure checks.
TermId ground_rewrite_nf(TermBank& bank, const AxiomSet& ax, TermId t, int fuel = 10000);

}  // namespace eau

#endif
