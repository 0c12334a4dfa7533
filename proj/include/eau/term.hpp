#ifndef EAU_TERM_HPP
#define EAU_TERM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eau {

using SymbolId = int32_t;
using TermId = int32_t;
using SortId = int32_t;

constexpr SymbolId kNoSymbol = -1;
constexpr TermId kNoTerm = -1;
constexpr SortId kNoSort = -1;

// A ranked signature. Object variables are nullary symbols flagged as
// variables; generated generalization variables are added the same way.
class Signature {
 public:
  SymbolId intern(std::string name, int arity, bool is_var = false);
  SymbolId lookup(std::string_view name) const;

  const std::string& name(SymbolId s) const { return infos_[s].name; }
  int arity(SymbolId s) const { return infos_[s].arity; }
  bool is_var(SymbolId s) const { return infos_[s].is_var; }
  size_t size() const { return infos_.size(); }

  // Display token for infix printing/parsing; empty means prefix only.
  void set_infix(SymbolId s, std::string token);
  const std::string& infix(SymbolId s) const { return infos_[s].infix; }
  SymbolId by_infix(std::string_view token) const;

  // The irreflexive total ordering on function symbols used by
  // pre-grouping: override rank first, then arity, then display name.
  // The override list (EAU_SEED_ORDER) assigns the listed names the
  // smallest ranks in list order.
  void set_order_override(const std::vector<std::string>& names);
  bool precedes(SymbolId a, SymbolId b) const;

 private:
  struct Info {
    std::string name;
    int arity = 0;
    bool is_var = false;
    std::string infix;
    int override_rank = -1;
  };
  std::vector<Info> infos_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::unordered_map<std::string, SymbolId> by_infix_;
};

// Interned first-order terms. Equal terms share one id, so term equality
// is id equality and sets of terms are cheap.
class TermBank {
 public:
  explicit TermBank(Signature& sig) : sig_(&sig) {}

  TermId app(SymbolId f, std::span<const TermId> args);
  TermId app(SymbolId f, std::initializer_list<TermId> args) {
    return app(f, std::span<const TermId>(args.begin(), args.size()));
  }
  TermId leaf(SymbolId f) { return app(f, std::span<const TermId>()); }

  SymbolId head(TermId t) const { return nodes_[t].head; }
  std::span<const TermId> args(TermId t) const {
    const Node& n = nodes_[t];
    return {arg_pool_.data() + n.args_begin, static_cast<size_t>(n.args_end - n.args_begin)};
  }
  size_t size() const { return nodes_.size(); }
  Signature& sig() const { return *sig_; }

  bool is_var(TermId t) const { return sig_->is_var(nodes_[t].head); }
  int node_count(TermId t) const;
  int height(TermId t) const;
  bool is_ground(TermId t) const;
  bool is_linear(TermId t) const;
  // Variables occurring in t, in first-occurrence order.
  std::vector<SymbolId> vars(TermId t) const;

 private:
  struct Node {
    SymbolId head;
    uint32_t args_begin, args_end;
  };
  Signature* sig_;
  std::vector<Node> nodes_;
  std::vector<TermId> arg_pool_;
  std::unordered_map<uint64_t, std::vector<TermId>> buckets_;
};

// Finite map from variable symbols to terms, applied simultaneously.
class Substitution {
 public:
  void bind(SymbolId var, TermId t);
  std::optional<TermId> lookup(SymbolId var) const;
  TermId apply(TermBank& bank, TermId t) const;
  size_t size() const { return entries_.size(); }
  const std::vector<std::pair<SymbolId, TermId>>& entries() const { return entries_; }

  bool is_flat(const TermBank& bank) const;
  bool is_linear(const TermBank& bank) const;
  bool is_renaming(const TermBank& bank) const;

 private:
  std::vector<std::pair<SymbolId, TermId>> entries_;  // sorted by var id
};

// One-sided matching: extends `out` so that out(pattern) == subject.
bool match_term(const TermBank& bank, TermId pattern, TermId subject, Substitution& out);

// The injective mapping phi from key tuples to fresh variables, plus its
// inverse and the projection substitutions. Keys are tuples of terms, of
// sort ids, or (for the second anti-unification phase) of variable symbols.
class VarRegistry {
 public:
  enum class KeyKind : uint8_t { Terms, Sorts, VarSet };

  VarRegistry(Signature& sig, int width, std::string prefix = "v")
      : sig_(&sig), width_(width), prefix_(std::move(prefix)) {}

  int width() const { return width_; }

  SymbolId var_for(KeyKind kind, std::span<const int32_t> key);
  bool contains(SymbolId v) const;
  // phi^-1; null when v was not generated by this registry.
  const std::vector<int32_t>* key_of(SymbolId v) const;
  KeyKind kind_of(SymbolId v) const;
  // All generated variables in creation order.
  const std::vector<SymbolId>& variables() const { return vars_; }

  // sigma_i for term-keyed registries; i is 0-based, 0 <= i < width.
  Substitution projection(int i) const;

 private:
  Signature* sig_;
  int width_;
  std::string prefix_;
  struct Entry {
    KeyKind kind;
    std::vector<int32_t> key;
  };
  std::vector<SymbolId> vars_;
  std::unordered_map<SymbolId, Entry> entries_;
  std::unordered_map<std::string, SymbolId> by_key_;
};

// Simultaneous syntactic anti-unification of N terms (Alg. sg extended to
// N arguments). Equal head symbols recurse componentwise; any disagreement
// yields phi(subterm tuple). reg must be term-keyed with width == terms.size().
TermId syntactic_au(TermBank& bank, VarRegistry& reg, std::span<const TermId> terms);

}  // namespace eau

#endif
