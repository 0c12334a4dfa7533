#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "eau/grammar.hpp"
#include "eau/oracle.hpp"
#include "eau/syntax.hpp"

using namespace eau;

namespace {

struct Theory1 {
  Signature sig;
  TermBank bank{sig};
  GrammarSystem gs{sig};
  SortId s0, s1, sn;

  Theory1() {
    sig.intern("0", 0);
    sig.intern("suc", 1);
    SymbolId plus = sig.intern("+", 2);
    sig.set_infix(plus, "+");
    SymbolId times = sig.intern("*", 2);
    sig.set_infix(times, "*");
    parse_grammar(gs,
                  "s0 = 0 | s0+s0 | s0*sn | sn*s0\n"
                  "s1 = suc(s0) | s0+s1 | s1+s0 | s1*s1\n"
                  "sn = 0 | suc(sn) | sn+sn | sn*sn\n");
    s0 = gs.find_sort("s0");
    s1 = gs.find_sort("s1");
    sn = gs.find_sort("sn");
    gs.finalize();
  }

  TermId parse(const std::string& s) {
    TermParser p(bank, false);
    return p.parse(s);
  }
};

std::set<TermId> as_set(const std::vector<TermId>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("grammar text round trip") {
  Theory1 t;
  std::string printed = print_grammar(t.gs);
  GrammarSystem gs2(t.sig);
  parse_grammar(gs2, printed);
  CHECK(print_grammar(gs2) == printed);
  CHECK(printed.find("s0 = 0 | s0+s0 | s0*sn | sn*s0") == 0);
}

TEST_CASE("membership on theory (1)") {
  Theory1 t;
  CHECK(member(t.gs, t.bank, t.parse("0+0"), t.s0));
  CHECK_FALSE(member(t.gs, t.bank, t.parse("0"), t.s1));
  CHECK(member(t.gs, t.bank, t.parse("suc(0)*suc(0)"), t.s1));
  CHECK(member(t.gs, t.bank, t.parse("0*suc(suc(0))"), t.s0));
  SortId bot = t.gs.add_sort("bot");
  t.gs.finalize();
  CHECK_FALSE(member(t.gs, t.bank, t.parse("0"), bot));
}

TEST_CASE("min depth basics") {
  Signature sig;
  GrammarSystem gs(sig);
  sig.intern("0", 0);
  sig.intern("f", 1);
  parse_grammar(gs, "a = 0\nb = f(b)\nc = f(a)\n");
  CHECK(gs.min_depth(gs.find_sort("a")) == 1);
  CHECK(gs.is_empty(gs.find_sort("b")));
  CHECK(gs.min_depth(gs.find_sort("c")) == 2);
  CHECK(gs.alts(gs.find_sort("b")).empty());
}

TEST_CASE("empty propagation drops alternatives mentioning empty sorts") {
  Signature sig;
  GrammarSystem gs(sig);
  sig.intern("0", 0);
  sig.intern("g", 2);
  parse_grammar(gs, "a = 0 | g(a,b)\nb = g(b,b)\n");
  gs.finalize();
  CHECK(gs.alts(gs.find_sort("a")).size() == 1);
  CHECK(gs.is_empty(gs.find_sort("b")));
}

TEST_CASE("normalize inlines chains and turns pure cycles to bottom") {
  Signature sig;
  GrammarSystem gs(sig);
  SymbolId zero = sig.intern("0", 0);
  SortId s = gs.add_sort("s");
  SortId sp = gs.add_sort("sp");
  std::vector<std::pair<SortId, SortExpr>> defs;
  defs.emplace_back(s, SortExpr::of_name(sp));
  defs.emplace_back(sp, SortExpr::app(zero));
  normalize(gs, defs);
  CHECK(gs.alts(s).size() == 1);
  CHECK(gs.alts(s)[0].head == zero);

  SortId c1 = gs.add_sort("c1");
  SortId c2 = gs.add_sort("c2");
  std::vector<std::pair<SortId, SortExpr>> cyc;
  cyc.emplace_back(c1, SortExpr::of_name(c2));
  cyc.emplace_back(c2, SortExpr::of_name(c1));
  normalize(gs, cyc);
  gs.finalize();
  CHECK(gs.is_empty(c1));
  CHECK(gs.is_empty(c2));
}

TEST_CASE("normalize introduces auxiliary sorts for nested arguments") {
  Signature sig;
  GrammarSystem gs(sig);
  SymbolId zero = sig.intern("0", 0);
  SymbolId one = sig.intern("1", 0);
  SymbolId f = sig.intern("f", 1);
  TermBank bank(sig);
  SortId s = gs.add_sort("s");
  std::vector<std::pair<SortId, SortExpr>> defs;
  defs.emplace_back(
      s, SortExpr::app(f, {SortExpr::disj({SortExpr::app(zero), SortExpr::app(one)})}));
  normalize(gs, defs);
  gs.finalize();
  TermParser p(bank, false);
  CHECK(member(gs, bank, p.parse("f(0)"), s));
  CHECK(member(gs, bank, p.parse("f(1)"), s));
  CHECK_FALSE(member(gs, bank, p.parse("0"), s));
}

TEST_CASE("to_normal_form splits definitions and stays cycle free") {
  Theory1 t;
  auto defs = to_normal_form(t.gs);
  for (const auto& d : defs) {
    if (d.is_union) {
      for (int m : d.members) CHECK_FALSE(defs[m].is_union);
    }
  }
}

TEST_CASE("bounded enumeration matches the language oracle") {
  Theory1 t;
  for (int depth = 1; depth <= 3; ++depth) {
    auto got = as_set(enumerate_to_vector(t.gs, t.bank, t.s0, depth));
    auto want = as_set(reference_language(t.gs, t.bank, t.s0, depth));
    CHECK(got == want);
  }
}

TEST_CASE("iterative deepening emits each term once at its minimal depth") {
  Theory1 t;
  std::vector<std::pair<TermId, int>> emitted;
  enumerate_deepening(t.gs, t.bank, t.s0, [&](TermId term, int d) {
    emitted.emplace_back(term, d);
    return emitted.size() < 40;
  });
  std::set<TermId> seen;
  int last = 0;
  for (auto& [term, d] : emitted) {
    CHECK(seen.insert(term).second);
    CHECK(d >= last);
    last = d;
  }
  CHECK(emitted.front().first == t.parse("0"));
}

TEST_CASE("finiteness detection") {
  Signature sig;
  GrammarSystem gs(sig);
  sig.intern("0", 0);
  sig.intern("f", 1);
  parse_grammar(gs, "fin = 0 | f(base)\nbase = 0\ninf = 0 | f(inf)\n");
  CHECK(gs.is_finite(gs.find_sort("fin")));
  CHECK_FALSE(gs.is_finite(gs.find_sort("inf")));
}

TEST_CASE("intersect: examples from theory (1)") {
  Theory1 t;
  SortId both = intersect(t.gs, std::vector<SortId>{t.s0, t.s1});
  CHECK(t.gs.is_empty(both));

  SortId self = intersect(t.gs, std::vector<SortId>{t.s0, t.s0});
  auto got = as_set(enumerate_to_vector(t.gs, t.bank, self, 4));
  auto want = as_set(enumerate_to_vector(t.gs, t.bank, t.s0, 4));
  CHECK(got == want);

  SortId with_top = intersect(t.gs, std::vector<SortId>{t.sn, t.s0});
  got = as_set(enumerate_to_vector(t.gs, t.bank, with_top, 4));
  CHECK(got == want);
}

TEST_CASE("subtract: basic identities") {
  Theory1 t;
  SortId nothing = subtract(t.gs, t.s0, t.s0);
  CHECK(t.gs.is_empty(nothing));

  SortId bot = t.gs.add_sort("bot2");
  SortId same = subtract(t.gs, t.s0, bot);
  auto got = as_set(enumerate_to_vector(t.gs, t.bank, same, 4));
  auto want = as_set(enumerate_to_vector(t.gs, t.bank, t.s0, 4));
  CHECK(got == want);

  SortId diff = subtract(t.gs, t.sn, t.s0);
  CHECK(member(t.gs, t.bank, t.parse("suc(0)"), diff));
  CHECK_FALSE(member(t.gs, t.bank, t.parse("0"), diff));
  CHECK_FALSE(member(t.gs, t.bank, t.parse("0+0"), diff));
  CHECK(member(t.gs, t.bank, t.parse("0+suc(0)"), diff));
}

namespace {

struct RandomGrammar {
  Signature sig;
  TermBank bank{sig};
  GrammarSystem gs{sig};
  std::vector<SortId> sorts;

  RandomGrammar(std::mt19937& rng) {
    SymbolId a = sig.intern("a", 0);
    SymbolId b = sig.intern("b", 0);
    SymbolId g = sig.intern("g", 1);
    SymbolId f = sig.intern("f", 2);
    std::uniform_int_distribution<int> nsorts(2, 6);
    int k = nsorts(rng);
    for (int i = 0; i < k; ++i) sorts.push_back(gs.add_sort("q" + std::to_string(i)));
    std::uniform_int_distribution<int> nalts(1, 4);
    std::uniform_int_distribution<int> pick_sym(0, 3);
    std::uniform_int_distribution<int> pick_sort(0, k - 1);
    for (SortId s : sorts) {
      int alts = nalts(rng);
      for (int i = 0; i < alts; ++i) {
        switch (pick_sym(rng)) {
          case 0: gs.add_alt(s, Alt{a, {}}); break;
          case 1: gs.add_alt(s, Alt{b, {}}); break;
          case 2: gs.add_alt(s, Alt{g, {sorts[pick_sort(rng)]}}); break;
          default: gs.add_alt(s, Alt{f, {sorts[pick_sort(rng)], sorts[pick_sort(rng)]}}); break;
        }
      }
    }
    gs.finalize();
  }
};

}  // namespace

TEST_CASE("random grammars: enumeration, membership and min depth vs oracle") {
  std::mt19937 rng(2024);
  for (int iter = 0; iter < 30; ++iter) {
    RandomGrammar r(rng);
    for (SortId s : r.sorts) {
      auto oracle = reference_language(r.gs, r.bank, s, 3);
      auto got = as_set(enumerate_to_vector(r.gs, r.bank, s, 3));
      CHECK(got == as_set(oracle));
      for (TermId t : oracle) CHECK(member(r.gs, r.bank, t, s));
      if (!oracle.empty()) {
        int md = r.gs.min_depth(s);
        bool any_at_md = false;
        enumerate_bounded(r.gs, r.bank, s, md, [&](TermId) {
          any_at_md = true;
          return false;
        });
        CHECK(any_at_md);
        bool below = false;
        if (md > 1)
          enumerate_bounded(r.gs, r.bank, s, md - 1, [&](TermId) {
            below = true;
            return false;
          });
        CHECK_FALSE(below);
      }
    }
  }
}

TEST_CASE("random grammars: boolean algebra of languages") {
  std::mt19937 rng(4711);
  for (int iter = 0; iter < 12; ++iter) {
    RandomGrammar r(rng);
    SortId x = r.sorts[0];
    SortId y = r.sorts.back();
    auto lang = [&](SortId s) { return as_set(reference_language(r.gs, r.bank, s, 3)); };
    auto inter_xy = lang(intersect(r.gs, std::vector<SortId>{x, y}));
    auto inter_yx = lang(intersect(r.gs, std::vector<SortId>{y, x}));
    CHECK(inter_xy == inter_yx);
    std::set<TermId> expect;
    auto lx = lang(x);
    auto ly = lang(y);
    std::set_intersection(lx.begin(), lx.end(), ly.begin(), ly.end(),
                          std::inserter(expect, expect.begin()));
    CHECK(inter_xy == expect);

    SortId xy = subtract(r.gs, x, subtract(r.gs, x, y));
    for (TermId t : lx) {
      bool in = member(r.gs, r.bank, t, xy);
      CHECK(in == (expect.count(t) != 0));
    }
  }
}
