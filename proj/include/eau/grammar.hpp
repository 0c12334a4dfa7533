#ifndef EAU_GRAMMAR_HPP
#define EAU_GRAMMAR_HPP

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "eau/term.hpp"

namespace eau {

// General sort expressions, used by the text format and normalize().
// Internally the system keeps every definition in head normal form.
struct SortExpr {
  enum Kind { Name, Disj, App, Bottom } kind = Bottom;
  SortId name = kNoSort;              // Kind::Name
  SymbolId head = kNoSymbol;          // Kind::App (function symbol or variable)
  std::vector<SortExpr> children;     // Disj alternatives / App arguments

  static SortExpr bottom() { return SortExpr{}; }
  static SortExpr of_name(SortId s) {
    SortExpr e; e.kind = Name; e.name = s; return e;
  }
  static SortExpr app(SymbolId f, std::vector<SortExpr> args = {}) {
    SortExpr e; e.kind = App; e.head = f; e.children = std::move(args); return e;
  }
  static SortExpr disj(std::vector<SortExpr> alts) {
    SortExpr e; e.kind = Disj; e.children = std::move(alts); return e;
  }
};

// One head-normal alternative: a function symbol or variable applied to
// sort names. Nullary symbols and variables have no arguments.
struct Alt {
  SymbolId head = kNoSymbol;
  std::vector<SortId> args;
  bool operator==(const Alt&) const = default;
};

constexpr int kEmptyDepth = std::numeric_limits<int>::max();

// A system of sort definitions in head normal form with cached minimum
// depths and emptiness. Mutation marks the caches dirty; they are rebuilt
// lazily by finalize(), which also removes alternatives that mention
// empty sorts (the sorts themselves become bottom: no alternatives).
class GrammarSystem {
 public:
  explicit GrammarSystem(Signature& sig) : sig_(&sig) {}

  Signature& sig() const { return *sig_; }

  SortId add_sort(std::string name);
  SortId find_sort(std::string_view name) const;
  size_t sort_count() const { return defs_.size(); }
  const std::string& name(SortId s) const { return defs_[s].name; }

  void add_alt(SortId s, Alt alt);            // ignores exact duplicates
  void insert_alt(SortId s, size_t pos, Alt alt);
  void set_alts(SortId s, std::vector<Alt> alts);
  const std::vector<Alt>& alts(SortId s) const { return defs_[s].alts; }
  void clear_alts(SortId s);

  // Depth measure: unfolding a definition costs 1 unless the alternative's
  // head symbol is in the skip set (cf. the 0/suc remark).
  void set_depth_skip(std::vector<SymbolId> skip);
  int alt_cost(const Alt& a) const;

  void finalize();            // solve depth equations + drop empty material
  bool finalized() const { return finalized_; }
  int min_depth(SortId s);    // kEmptyDepth when L(s) is empty
  bool is_empty(SortId s) { return min_depth(s) == kEmptyDepth; }
  // True when L(s) is a finite set (no productive cycle reachable).
  bool is_finite(SortId s);

  // All sorts reachable from s (including s), in DFS order.
  std::vector<SortId> reachable(SortId s) const;

 private:
  struct Def {
    std::string name;
    std::vector<Alt> alts;
  };
  void mark_dirty() { finalized_ = false; }

  Signature* sig_;
  std::vector<Def> defs_;
  std::unordered_map<std::string, SortId> by_name_;
  std::vector<SymbolId> depth_skip_;
  std::vector<int> min_depth_;
  bool finalized_ = false;
};

// --- membership -----------------------------------------------------------

// Cache keyed by (term, sort name), per query session.
class MembershipCache {
 public:
  bool* find(TermId t, SortId s);
  void put(TermId t, SortId s, bool v);

 private:
  std::unordered_map<uint64_t, bool> map_;
};

bool member(GrammarSystem& gs, const TermBank& bank, TermId t, SortId s, MembershipCache& cache);
bool member(GrammarSystem& gs, const TermBank& bank, TermId t, SortId s);
bool member_alt(GrammarSystem& gs, const TermBank& bank, TermId t, const Alt& alt,
                MembershipCache& cache);

// --- enumeration ----------------------------------------------------------

// Emits the ground terms of L(s) with unfolding depth <= depth, in
// definition order of disjuncts, depth first (left argument slowest).
// The sink returns false to stop; the function returns false if stopped.
bool enumerate_bounded(GrammarSystem& gs, TermBank& bank, SortId s, int depth,
                       const std::function<bool(TermId)>& sink);

// Iterative deepening: each term exactly once, at its minimal depth,
// ascending by depth. Stops when the sink declines, when a finite sort is
// exhausted, or at max_depth.
bool enumerate_deepening(GrammarSystem& gs, TermBank& bank, SortId s,
                         const std::function<bool(TermId, int)>& sink,
                         int max_depth = 64);

std::vector<TermId> enumerate_to_vector(GrammarSystem& gs, TermBank& bank, SortId s, int depth);

// Minimal term of a nonempty sort: smallest node count, ties broken by the
// printed form. Used for normal-form representatives.
TermId minimal_term(GrammarSystem& gs, TermBank& bank, SortId s);

// --- set operations -------------------------------------------------------

// L(result) = intersection of the argument languages (ground terms).
// Delegates to the engine's rsg_v with an empty variable set.
SortId intersect(GrammarSystem& gs, std::span<const SortId> sorts);

// L(result) = L(whole) \ L(minus), via bottom-up determinization of
// `minus`, complementation, and product with `whole`.
SortId subtract(GrammarSystem& gs, SortId whole, SortId minus);

// --- normalization & text format -------------------------------------------

// Builds head-normal definitions from general expressions. `defs` pairs a
// sort (already added to gs) with its right side; names may refer to each
// other. Pure name cycles become bottom.
void normalize(GrammarSystem& gs, const std::vector<std::pair<SortId, SortExpr>>& defs);

// Normal form for proofs/tests: every definition is either a disjunction
// of names or a single application of names, with no name-to-name cycles.
struct NormalDef {
  std::string name;
  bool is_union = false;
  std::vector<int> members;        // indices into the result (is_union)
  SymbolId head = kNoSymbol;       // single application (!is_union)
  std::vector<int> args;
};
std::vector<NormalDef> to_normal_form(GrammarSystem& gs);

// One definition per line: `SortName = alt1 | alt2 | ...`; `_|_` is bottom.
std::string print_grammar(GrammarSystem& gs, std::span<const SortId> sorts);
std::string print_grammar(GrammarSystem& gs);
std::string print_alt(const GrammarSystem& gs, const Alt& alt);
// Parses definitions into gs (adding sorts and symbols as needed; unknown
// nullary identifiers become variables when allow_new_vars).
std::vector<SortId> parse_grammar(GrammarSystem& gs, std::string_view text,
                                  bool allow_new_vars = false);

}  // namespace eau

#endif
