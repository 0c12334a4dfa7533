#ifndef EAU_ORACLE_HPP
#define EAU_ORACLE_HPP

#include <vector>

#include "eau/grammar.hpp"
#include "eau/term.hpp"
#include "eau/theory.hpp"

namespace eau {

// Brute-force reference implementations. These stay independent of the
// grammar/engine machinery they are used to check; reference_language
// iterates the semantics equations directly.

struct FuelExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Leftmost-innermost rewriting to normal form with a result cache.
class RewriteEngine {
 public:
  RewriteEngine(TermBank& bank, std::vector<Equation> rules, int fuel = 10000)
      : bank_(&bank), rules_(std::move(rules)), fuel_(fuel), fuel_budget_(fuel) {}

  TermId to_nf(TermId t);
  // True if some rule matches at some position.
  bool reducible(TermId t) const;

 private:
  TermId step_root(TermId t, bool* changed);
  TermId normalize(TermId t, int depth_guard);

  TermBank* bank_;
  std::vector<Equation> rules_;
  int fuel_;        // remaining steps for the current call
  int fuel_budget_; // steps granted per to_nf call
  std::unordered_map<TermId, TermId> cache_;
};

TermId rewrite_to_nf(TermBank& bank, const std::vector<Equation>& rules, TermId t,
                     int fuel = 10000);

// All terms over the given symbols with height <= depth, no duplicates,
// deterministic order (height ascending, then construction order).
std::vector<TermId> enumerate_terms(TermBank& bank, std::span<const SymbolId> symbols, int depth);

// Right-hand side of the vrsg1 equivalence, realized directly:
// { t | height(t) <= depth, vars(t) subset V, nf(sigma_i t) = nf(target_i) }.
std::vector<TermId> reference_generalizations(TermBank& bank, const VarRegistry& reg,
                                              std::span<const SymbolId> allowed_vars,
                                              std::span<const SymbolId> function_symbols,
                                              std::span<const TermId> targets,
                                              const std::vector<Equation>& rules, int depth,
                                              int fuel = 10000);

// Naive fixpoint of the L(.) equations, bounded by unfolding depth.
std::vector<TermId> reference_language(GrammarSystem& gs, TermBank& bank, SortId s, int depth);

}  // namespace eau

#endif
