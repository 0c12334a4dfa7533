#include <doctest.h>

#include <random>
#include <set>

#include "eau/oracle.hpp"
#include "eau/syntax.hpp"

using namespace eau;

namespace {

struct Nat {
  Signature sig;
  TermBank bank{sig};
  SymbolId zero = sig.intern("0", 0);
  SymbolId suc = sig.intern("suc", 1);
  SymbolId plus = sig.intern("+", 2);
  SymbolId times = sig.intern("*", 2);
  std::vector<Equation> rules;

  Nat() {
    sig.set_infix(plus, "+");
    sig.set_infix(times, "*");
    TermId x = bank.leaf(sig.intern("x", 0, true));
    TermId y = bank.leaf(sig.intern("y", 0, true));
    TermId z = bank.leaf(zero);
    rules.push_back({bank.app(plus, {x, z}), x, true});
    rules.push_back({bank.app(plus, {x, bank.app(suc, {y})}),
                     bank.app(suc, {bank.app(plus, {x, y})}), true});
    rules.push_back({bank.app(times, {x, z}), z, true});
    rules.push_back({bank.app(times, {x, bank.app(suc, {y})}),
                     bank.app(plus, {bank.app(times, {x, y}), x}), true});
  }

  TermId parse(const std::string& s) {
    TermParser p(bank, false);
    return p.parse(s);
  }
};

// A deliberately different strategy for the confluence spot check:
// leftmost-outermost single steps to fixpoint.
TermId outermost_nf(TermBank& bank, const std::vector<Equation>& rules, TermId t, int fuel) {
  std::function<TermId(TermId, bool*)> step = [&](TermId u, bool* changed) -> TermId {
    for (const Equation& r : rules) {
      Substitution s;
      if (match_term(bank, r.lhs, u, s)) {
        *changed = true;
        return s.apply(bank, r.rhs);
      }
    }
    auto as = bank.args(u);
    std::vector<TermId> na(as.begin(), as.end());
    for (TermId& a : na) {
      bool ch = false;
      TermId b = step(a, &ch);
      if (ch) {
        a = b;
        *changed = true;
        return bank.app(bank.head(u), na);
      }
    }
    return u;
  };
  for (int i = 0; i < fuel; ++i) {
    bool changed = false;
    TermId next = step(t, &changed);
    if (!changed) return t;
    t = next;
  }
  throw FuelExhausted("outermost fuel");
}

TermId random_ground(Nat& n, std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 1 ? 0 : 3);
  switch (pick(rng)) {
    case 0: return n.bank.leaf(n.zero);
    case 1: return n.bank.app(n.suc, {random_ground(n, rng, depth - 1)});
    case 2:
      return n.bank.app(n.plus,
                        {random_ground(n, rng, depth - 1), random_ground(n, rng, depth - 1)});
    default:
      return n.bank.app(n.times,
                        {random_ground(n, rng, depth - 1), random_ground(n, rng, depth - 1)});
  }
}

}  // namespace

TEST_CASE("rewriting to normal form") {
  Nat n;
  CHECK(rewrite_to_nf(n.bank, n.rules, n.parse("suc(0)+suc(0)")) == n.parse("suc(suc(0))"));
  CHECK(rewrite_to_nf(n.bank, n.rules, n.parse("suc(suc(0))*suc(suc(0))")) == n.parse("4"));
  CHECK(rewrite_to_nf(n.bank, n.rules, n.parse("0")) == n.parse("0"));
}

TEST_CASE("fuel exhaustion is a hard error") {
  Signature sig;
  TermBank bank(sig);
  SymbolId a = sig.intern("a", 0);
  SymbolId f = sig.intern("f", 1);
  TermId fa = bank.app(f, {bank.leaf(a)});
  std::vector<Equation> looping{{fa, fa, true}};
  CHECK_THROWS_AS(rewrite_to_nf(bank, looping, fa, 10), FuelExhausted);
}

TEST_CASE("term enumeration is deterministic and duplicate free") {
  Nat n;
  auto only_zero = enumerate_terms(n.bank, std::vector<SymbolId>{n.zero}, 1);
  CHECK(only_zero == std::vector<TermId>{n.parse("0")});
  auto zs = enumerate_terms(n.bank, std::vector<SymbolId>{n.zero, n.suc}, 2);
  CHECK(zs == std::vector<TermId>{n.parse("0"), n.parse("suc(0)")});
  auto d3 = enumerate_terms(n.bank, std::vector<SymbolId>{n.zero, n.suc, n.plus}, 3);
  CHECK(d3.size() == 13);  // frozen regression value
  for (TermId t : d3) CHECK(n.bank.height(t) <= 3);
}

TEST_CASE("reference generalizations basics") {
  Nat n;
  VarRegistry reg(n.sig, 2);
  TermId zero = n.parse("0");
  TermId one = n.parse("suc(0)");

  // no variables, incompatible targets: empty
  auto none = reference_generalizations(n.bank, reg, {}, std::vector<SymbolId>{n.zero, n.suc, n.plus, n.times},
                                        std::vector<TermId>{zero, one}, n.rules, 3);
  CHECK(none.empty());

  SymbolId v = reg.var_for(VarRegistry::KeyKind::Terms, std::vector<int32_t>{zero, zero});
  auto both_zero = reference_generalizations(n.bank, reg, std::vector<SymbolId>{v},
                                             std::vector<SymbolId>{n.zero, n.suc, n.plus, n.times},
                                             std::vector<TermId>{zero, zero}, n.rules, 2);
  std::set<TermId> got(both_zero.begin(), both_zero.end());
  CHECK(got.count(zero));
  CHECK(got.count(n.bank.leaf(v)));
  CHECK(got.count(n.parse("0+0")));
}

TEST_CASE("confluence spot check: two strategies agree on 100 random terms") {
  Nat n;
  std::mt19937 rng(123);
  for (int i = 0; i < 100; ++i) {
    TermId t = random_ground(n, rng, 4);
    TermId a = rewrite_to_nf(n.bank, n.rules, t, 100000);
    TermId b = outermost_nf(n.bank, n.rules, t, 100000);
    CHECK(a == b);
  }
}
