#ifndef EAU_ENGINE_HPP
#define EAU_ENGINE_HPP

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "eau/grammar.hpp"
#include "eau/term.hpp"

namespace eau {

// Search tree VT* over head-symbol N-tuples of the allowed variables'
// preimages. Each root-to-leaf path has length N.
class SearchTree {
 public:
  SearchTree() { nodes_.emplace_back(); }
  void insert(std::span<const SymbolId> path);
  // Child at branch f; -1 when the branch is absent (nil).
  int child(int node, SymbolId f) const;
  static constexpr int kRoot = 0;
  static constexpr int kNil = -1;
  bool empty() const { return nodes_.size() == 1 && nodes_[0].empty(); }

 private:
  using Node = std::vector<std::pair<SymbolId, int>>;  // sorted by symbol
  std::vector<Node> nodes_;
};

// One pre-group: adjacent disjuncts of one definition sharing a head.
struct PreGroup {
  SymbolId head;
  std::vector<int> alt_index;  // indices into the sort's alternative list
};

// Disjuncts sorted ascending by head symbol, equal heads grouped.
std::vector<PreGroup> pre_group(const GrammarSystem& gs, SortId s);

// One selected argument tuple: per input sort the index of the chosen
// disjunct. `equal_heads` distinguishes recursive-descent tuples from
// possible-variable tuples (head tuple present in VT*).
struct ArgTuple {
  std::vector<int> alt_index;
  bool equal_heads;
};

// The kernel grouping algorithm (rules Join/Output/Abort Ne/Abort Eq/
// Follow/Skip/Init/Abort []), emitting tuples in trace order.
std::vector<ArgTuple> select_argument_tuples(const GrammarSystem& gs, const SearchTree& vt,
                                             const std::vector<std::vector<PreGroup>>& pregrouped,
                                             const std::vector<SortId>& sorts);

struct EngineOptions {
  // Depth-bounded variant: recursion below this depth yields bottom.
  std::optional<int> cutoff;
  // Alg. rsg test mode: head-symbol disagreements produce one variable per
  // disjunct tuple instead of consulting V.
  bool plain_rsg = false;
  // Experimental over-generalizing variant: variables from V are offered on
  // equal-head tuples as well (no vrsg1 contract).
  bool overgeneralize = false;
};

// One anti-unification run over a shared grammar system. A run owns its
// memo table and (for hsg) creates sort-keyed variables in the registry.
class Engine {
 public:
  Engine(GrammarSystem& gs, TermBank& bank, VarRegistry& reg,
         std::vector<SymbolId> allowed_vars = {}, EngineOptions opts = {});

  // Variable-restricted anti-unification (Alg. rsg_V). With an empty
  // variable set this computes the intersection of the argument sorts.
  SortId rsg_v(std::span<const SortId> sorts);

  // All linear generalizations with shared variables per sort tuple
  // (Alg. hsg); complete for the linear generalizations.
  SortId hsg(std::span<const SortId> sorts);

  GrammarSystem& grammar() { return *gs_; }
  VarRegistry& registry() { return *reg_; }

 private:
  friend SortId rsg_rec(Engine&, const std::vector<SortId>&, int);
  SortId run(const std::vector<SortId>& sorts, bool hsg_mode, int depth_left);
  SortId materialize_alt(SortId s, int alt_index);

  GrammarSystem* gs_;
  TermBank* bank_;
  VarRegistry* reg_;
  std::vector<SymbolId> allowed_;          // V, in registry order
  EngineOptions opts_;
  SearchTree vt_;
  std::map<std::pair<std::vector<SortId>, int>, SortId> memo_;  // (sorts, depth) -> result
  std::map<std::pair<SortId, int>, SortId> alt_sorts_;          // plain rsg keys
  MembershipCache member_cache_;
};

// --- nonlinear second phase --------------------------------------------------

// I2/L2/V2 bookkeeping of Sect. 3.3.
struct VarIntersectionData {
  std::vector<std::pair<SortId, SortId>> i2;       // nonempty pairwise intersections
  std::vector<std::pair<SymbolId, SymbolId>> l2;   // variable pairs with nonempty infs
  std::vector<std::pair<SymbolId, int>> v2;        // occurrence counts i_v
};

// Rules for calc_infs, run for each pair of L2; `infs_nonempty` decides
// whether a candidate variable set still has nonempty componentwise
// intersections. Returns the maximal sets in output order.
std::vector<std::vector<SymbolId>> calc_infs_list(
    const std::vector<SymbolId>& vars, const std::vector<std::pair<SymbolId, SymbolId>>& l2,
    const std::vector<std::pair<SymbolId, int>>& v2,
    const std::function<bool(const std::vector<SymbolId>&)>& infs_nonempty);

struct NonlinearResult {
  std::vector<std::vector<SymbolId>> maximal_sets;
  std::vector<SymbolId> new_vars;  // one per maximal set
  VarIntersectionData data;
};

// Introduces common variables to related sorts: for each maximal variable
// set with nonempty infs, a fresh variable is added after every occurrence
// of each member.
NonlinearResult nonlinear_phase(GrammarSystem& gs, TermBank& bank, VarRegistry& reg,
                                std::span<const SortId> roots);

// --- front door ---------------------------------------------------------------

enum class AuMode { TwoPhase, VarRestricted };

struct AntiunifyResult {
  SortId sort;
  std::optional<NonlinearResult> nonlinear;
};

AntiunifyResult antiunify(GrammarSystem& gs, TermBank& bank, VarRegistry& reg,
                          std::span<const SortId> classes, AuMode mode,
                          std::vector<SymbolId> allowed_vars = {}, EngineOptions opts = {});

}  // namespace eau

#endif
