#ifndef EAU_BUILDERS_HPP
#define EAU_BUILDERS_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "eau/grammar.hpp"
#include "eau/term.hpp"
#include "eau/theory.hpp"

namespace eau {

// Equivalence-class grammars: a grammar system together with the map from
// ground terms to their class sort, generated on demand and memoized.
class ClassGrammar {
 public:
  virtual ~ClassGrammar() = default;

  GrammarSystem& grammar() { return *gs_; }
  TermBank& bank() { return *bank_; }

  // eqc(t); throws when t is outside the preset's domain.
  virtual SortId class_of(TermId ground) = 0;
  // The sort of all terms when the scheme has one (s_n), else kNoSort.
  virtual SortId universal_sort() { return kNoSort; }
  // The equational theory's function symbols (for filter sorts).
  virtual std::vector<SymbolId> function_symbols() const = 0;
  // Oriented reduction rules of the background theory.
  virtual const std::vector<Equation>& rules() const = 0;

 protected:
  GrammarSystem* gs_ = nullptr;
  TermBank* bank_ = nullptr;
};

// --- finite algebras ---------------------------------------------------------

// One class sort per carrier element: a production f(eqc(a1)..eqc(an))
// appears in eqc(e) iff the table gives f(a1..an) = e (Lemma 6).
class AlgebraClassGrammar : public ClassGrammar {
 public:
  AlgebraClassGrammar(GrammarSystem& gs, TermBank& bank, const FiniteAlgebra& alg,
                      std::vector<Equation> rules = {});
  SortId class_of(TermId ground) override;
  SortId class_of_element(int carrier, int element) const;
  std::vector<SymbolId> function_symbols() const override;
  const std::vector<Equation>& rules() const override { return rules_; }
  const FiniteAlgebra& algebra() const { return *alg_; }
  // Evaluates a ground term over the algebra; returns {carrier, element}.
  std::pair<int, int> eval(TermId t) const;

 private:
  const FiniteAlgebra* alg_;
  std::vector<std::vector<SortId>> sorts_;  // per carrier, per element
  std::vector<Equation> rules_;
};

// --- preset theory schemes ----------------------------------------------------

enum class NatPreset { Plus, PlusTimes, PlusMinusCutoff };

// Dynamic sort generation for the nat theories (0), (1) and the cut-off
// approximation of theory (6). Definitions are generated per value as
// needed and memoized.
class NatClassGrammar : public ClassGrammar {
 public:
  NatClassGrammar(GrammarSystem& gs, TermBank& bank, NatPreset preset, int cutoff = -1);

  SortId class_of(TermId ground) override;
  SortId sort_for_value(long value);
  SortId universal_sort() override;
  std::vector<SymbolId> function_symbols() const override;
  const std::vector<Equation>& rules() const override { return rules_; }
  long eval(TermId ground) const;  // throws outside the domain

  SymbolId zero, suc, plus, times = kNoSymbol, minus = kNoSymbol;

 private:
  NatPreset preset_;
  int cutoff_;
  std::map<long, SortId> memo_;
  SortId universal_ = kNoSort;
  std::vector<Equation> rules_;
};

// Equivalence classes of (possibly non-ground) list terms modulo append
// and reverse, following the displayed schemes. Keys are normalized in
// the intended list model (literal app/rev computed, app with [] and
// rev(rev(.)) collapsed).
class ListClassGrammar : public ClassGrammar {
 public:
  ListClassGrammar(GrammarSystem& gs, TermBank& bank);

  SortId class_of(TermId term) override;
  std::vector<SymbolId> function_symbols() const override;
  const std::vector<Equation>& rules() const override { return rules_; }
  TermId normalize_key(TermId t) const;

  SymbolId nil, cons, app, rev;

 private:
  std::map<TermId, SortId> memo_;
  std::vector<Equation> rules_;
};

// The hand-built equivalence classes for background theory (5)
// (0..5, s_p, s_e, s_o, s_n over 0,suc,+,*,if,ev), shipped literally.
class Theory5ClassGrammar : public ClassGrammar {
 public:
  Theory5ClassGrammar(GrammarSystem& gs, TermBank& bank);
  SortId class_of(TermId ground) override;
  SortId sort_for_value(long value);
  SortId universal_sort() override { return s_n; }
  std::vector<SymbolId> function_symbols() const override;
  const std::vector<Equation>& rules() const override { return rules_; }
  long eval(TermId ground) const;

  SymbolId zero, suc, plus, times, iff, ev;
  SortId s_val[6];
  SortId s_p, s_e, s_o, s_n;

 private:
  std::vector<Equation> rules_;
};

std::unique_ptr<ClassGrammar> make_preset(const std::string& name, GrammarSystem& gs,
                                          TermBank& bank);

// --- filter sorts --------------------------------------------------------------

// s_TOP of all terms over the function symbols and the given variables.
SortId top_sort(GrammarSystem& gs, std::span<const SymbolId> funcs,
                std::span<const SymbolId> vars);

enum class NonlinearLhs { Error, Drop, Linearize };

// s_RED of all terms containing a redex of the given rules at any position.
SortId reducible_sort(GrammarSystem& gs, TermBank& bank, const std::vector<Equation>& rules,
                      SortId top, std::span<const SymbolId> funcs,
                      NonlinearLhs mode = NonlinearLhs::Error);

// s_NF := s_TOP \ s_RED.
SortId normal_form_sort(GrammarSystem& gs, TermBank& bank, const std::vector<Equation>& rules,
                        std::span<const SymbolId> funcs, std::span<const SymbolId> vars,
                        NonlinearLhs mode = NonlinearLhs::Error);

// s_V^W of all terms t with V subset vars(t) subset W.
SortId var_filter_sort(GrammarSystem& gs, std::span<const SymbolId> funcs,
                       std::span<const SymbolId> must_occur, std::span<const SymbolId> may_occur);

// All partitions of `vars` into `arity` disjoint (possibly empty) blocks,
// ordered by number of occupied blocks, then assignment order; parts(V,0)
// is empty.
std::vector<std::vector<std::vector<SymbolId>>> parts(std::span<const SymbolId> vars, int arity);

}  // namespace eau

#endif
