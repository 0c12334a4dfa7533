// Command-line front end: anti-unification, lemma-candidate generation,
// series guessing and finite-algebra axiomatization over tree-grammar
// equivalence classes.
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <memory>

#include "eau/apps.hpp"
#include "eau/oracle.hpp"
#include "eau/syntax.hpp"

using namespace eau;

namespace {

struct World {
  Signature sig;
  TermBank bank{sig};
  GrammarSystem gs{sig};
  std::unique_ptr<ClassGrammar> classes;
  Theory theory;  // set when --theory names a file
  bool from_file = false;
};

bool is_preset_name(const std::string& name) {
  return name == "nat.plus" || name == "nat.plus_times" || name == "nat.theory5" ||
         name == "list.append_reverse" || name.rfind("nat.plus_minus_cutoff", 0) == 0;
}

std::unique_ptr<World> open_theory(const std::string& name) {
  auto w = std::make_unique<World>();
  if (is_preset_name(name)) {
    w->classes = make_preset(name, w->gs, w->bank);
  } else {
    w->theory = load_theory_file(name);
    w->from_file = true;
  }
  if (const char* order = std::getenv("EAU_SEED_ORDER")) {
    std::vector<std::string> names;
    std::string cur;
    for (char c : std::string(order)) {
      if (c == ',') {
        names.push_back(cur);
        cur.clear();
      } else
        cur.push_back(c);
    }
    if (!cur.empty()) names.push_back(cur);
    Signature& sig = w->from_file ? *w->theory.sig : w->sig;
    sig.set_order_override(names);
  }
  return w;
}

// Class grammars for theory files are available when the file carries a
// finite algebra; arbitrary confluent systems are out of scope.
ClassGrammar& class_grammar(World& w) {
  if (w.classes) return *w.classes;
  if (w.from_file && !w.theory.algebra.empty()) {
    static std::unique_ptr<AlgebraClassGrammar> holder;
    holder = std::make_unique<AlgebraClassGrammar>(w.gs, *w.theory.bank, w.theory.algebra,
                                                   w.theory.rules());
    return *holder;
  }
  throw std::runtime_error(
      "no class grammars for this theory (use a preset or a finite algebra)");
}

std::vector<TermId> parse_terms_csv(TermBank& bank, const std::string& csv) {
  std::vector<TermId> out;
  int depth = 0;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      TermParser p(bank, true);
      out.push_back(p.parse(cur));
      cur.clear();
    }
  };
  for (char c : csv) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      flush();
    } else
      cur.push_back(c);
  }
  flush();
  return out;
}

Filters make_filters(bool nf, const std::string& var_filter, const std::string& approx,
                     Signature& sig) {
  Filters f;
  f.normal_form = nf;
  if (approx == "over")
    f.approx = NonlinearLhs::Drop;
  else if (approx == "under")
    f.approx = NonlinearLhs::Linearize;
  if (!var_filter.empty()) {
    auto sep = var_filter.find("<=");
    if (sep == std::string::npos)
      throw ParseError("--var-filter expects V<=W, e.g. v1,v2<=v1,v2,v3");
    auto names = [&](const std::string& list) {
      std::vector<SymbolId> vs;
      std::string cur;
      for (char c : list + ",") {
        if (c == ',') {
          if (!cur.empty()) vs.push_back(sig.intern(cur, 0, true));
          cur.clear();
        } else
          cur.push_back(c);
      }
      return vs;
    };
    f.must_occur = names(var_filter.substr(0, sep));
    f.may_occur = names(var_filter.substr(sep + 2));
  }
  return f;
}

void print_result_grammar(GrammarSystem& gs, SortId root) {
  std::vector<SortId> order = gs.reachable(root);
  std::cout << print_grammar(gs, order);
}

int enumerate_and_print(GrammarSystem& gs, TermBank& bank, SortId s, int depth, size_t limit) {
  size_t count = 0;
  enumerate_deepening(
      gs, bank, s,
      [&](TermId t, int d) {
        std::cout << ++count << ": " << print_term(bank, t) << "  (depth " << d << ")\n";
        return count < limit;
      },
      depth);
  return static_cast<int>(count);
}

int run(int argc, char** argv) {
  CLI::App app{"anti-unification modulo equational theories via tree grammars"};
  app.require_subcommand(1);

  std::string theory_name = "nat.plus_times";
  int depth = 4;
  std::size_t limit = 20;
  bool nf_filter = false;
  bool oracle = false;
  bool finite_flag = false;
  std::string var_filter;
  std::string approx;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--theory", theory_name,
                    "preset name (nat.plus, nat.plus_times, nat.plus_minus_cutoffN, "
                    "list.append_reverse, nat.theory5) or theory file path")
        ->capture_default_str();
    cmd->add_option("--depth", depth, "enumeration depth bound")->capture_default_str();
    cmd->add_option("--limit", limit, "maximum number of printed terms")->capture_default_str();
    cmd->add_flag("--nf-filter", nf_filter, "restrict results to normal forms");
    cmd->add_option("--var-filter", var_filter, "variable filter V<=W (comma lists)");
    cmd->add_option("--approx", approx, "nonlinear redex handling: over or under")
        ->check(CLI::IsMember({"over", "under", ""}));
  };

  // --- antiunify ---
  auto* au = app.add_subcommand("antiunify", "anti-unify equivalence classes");
  std::string classes_csv, vars_mode = "auto";
  bool two_phase = false;
  add_common(au);
  au->add_option("--classes", classes_csv, "comma list of class representative terms")
      ->required();
  au->add_option("--vars", vars_mode, "auto, none, or a comma list of tuples")
      ->capture_default_str();
  au->add_flag("--two-phase", two_phase, "hsg followed by the nonlinear phase");
  au->add_flag("--oracle", oracle, "route the query through the brute-force oracle");

  // --- lemma ---
  auto* lm = app.add_subcommand("lemma", "generate lemma candidates");
  std::string lhs_text;
  std::vector<std::string> row_texts;
  add_common(lm);
  lm->add_option("--lhs", lhs_text, "left-hand side term")->required();
  lm->add_option("--row", row_texts, "ground instance row (comma list, one per variable)")
      ->required();

  // --- series ---
  auto* se = app.add_subcommand("series", "guess series-formation laws");
  std::string series_csv;
  int k = 3;
  bool oldest_first = false;
  add_common(se);
  se->add_option("series", series_csv, "series members, newest first")->required();
  se->add_option("--k", k, "number of example suffixes")->capture_default_str();
  se->add_flag("--oldest-first", oldest_first, "series is given oldest first");
  se->add_flag("--finite", finite_flag, "report whether the law sort is finite");

  // --- axiomatize ---
  auto* ax = app.add_subcommand("axiomatize", "axiomatize a finite algebra");
  int nvars = -1;
  std::string typed_vars;
  std::size_t cap = 1 << 20;
  ax->add_option("--theory", theory_name, "theory file with type/table blocks")
      ->capture_default_str();
  ax->add_option("--n", nvars, "number of (untyped) variables");
  ax->add_option("--typed-vars", typed_vars, "typed variables, e.g. x:N,y:B");
  ax->add_option("--cap", cap, "resource cap on the number of tuple classes")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (au->parsed()) {
    auto w = open_theory(theory_name);
    ClassGrammar& cg = class_grammar(*w);
    TermBank& bank = cg.bank();
    GrammarSystem& gs = cg.grammar();
    std::vector<TermId> reps = parse_terms_csv(bank, classes_csv);
    if (reps.empty()) throw std::runtime_error("no classes given");
    std::vector<SortId> class_sorts;
    for (TermId t : reps) class_sorts.push_back(cg.class_of(t));

    auto reg = std::make_unique<VarRegistry>(bank.sig(), static_cast<int>(reps.size()));
    std::vector<SymbolId> allowed;
    TermId pattern = kNoTerm;
    if (vars_mode == "auto") {
      pattern = syntactic_au(bank, *reg, reps);
      allowed = bank.vars(pattern);
    } else if (vars_mode != "none") {
      for (TermId t : parse_terms_csv(bank, vars_mode)) {
        std::vector<int32_t> key;
        for (TermId arg : bank.args(t)) key.push_back(arg);
        allowed.push_back(reg->var_for(VarRegistry::KeyKind::Terms, key));
      }
    }

    if (oracle) {
      ClassGrammar& c = cg;
      std::vector<SymbolId> funcs = c.function_symbols();
      auto terms = reference_generalizations(bank, *reg, allowed, funcs, reps, c.rules(),
                                             std::min(depth, 3));
      size_t count = 0;
      for (TermId t : terms) {
        std::cout << ++count << ": " << print_term(bank, t) << "\n";
        if (count >= limit) break;
      }
      return 0;
    }

    AntiunifyResult result =
        antiunify(gs, bank, *reg, class_sorts,
                  two_phase ? AuMode::TwoPhase : AuMode::VarRestricted, allowed);
    SortId shown = result.sort;
    Filters f = make_filters(nf_filter, var_filter, approx, bank.sig());
    if (f.normal_form || !f.may_occur.empty()) {
      std::vector<SortId> parts{shown};
      if (f.normal_form)
        parts.push_back(normal_form_sort(gs, bank, cg.rules(), cg.function_symbols(),
                                         allowed, f.approx));
      if (!f.may_occur.empty())
        parts.push_back(var_filter_sort(gs, cg.function_symbols(), f.must_occur, f.may_occur));
      if (parts.size() > 1) shown = intersect(gs, parts);
    }
    gs.finalize();
    print_result_grammar(gs, shown);
    std::cout << "--\n";
    enumerate_and_print(gs, bank, shown, depth, limit);
    return 0;
  }

  if (lm->parsed()) {
    auto w = open_theory(theory_name);
    ClassGrammar& cg = class_grammar(*w);
    TermBank& bank = cg.bank();
    TermParser p(bank, true);
    TermId lhs = p.parse(lhs_text);
    InstanceMatrix g;
    for (const std::string& row : row_texts) g.rows.push_back(parse_terms_csv(bank, row));
    Filters f = make_filters(nf_filter, var_filter, approx, bank.sig());
    auto lemma = generate_lemma_candidates(cg, lhs, g, f);
    if (!lemma.report.hard_ok())
      std::cout << "warning: instance matrix fails a hard requirement (1, 2 or 5)\n";
    for (const std::string& note : lemma.report.notes) std::cout << "note: " << note << "\n";
    std::cout << "lhs pattern: " << print_term(bank, lemma.pattern) << "\n";
    enumerate_and_print(cg.grammar(), bank, lemma.sort, depth, limit);
    return 0;
  }

  if (se->parsed()) {
    auto w = open_theory(theory_name);
    ClassGrammar& cg = class_grammar(*w);
    TermBank& bank = cg.bank();
    std::vector<TermId> series = parse_terms_csv(bank, series_csv);
    if (oldest_first) std::reverse(series.begin(), series.end());
    Filters f = make_filters(nf_filter, var_filter, approx, bank.sig());
    auto guess = guess_series(cg, series, k, f);
    std::cout << "pattern: " << print_term(bank, guess.pattern) << "\n";
    if (finite_flag)
      std::cout << "finite: " << (guess.finite ? "yes" : "no") << "\n";
    int printed = enumerate_and_print(cg.grammar(), bank, guess.sort, depth,
                                      guess.finite ? limit : limit);
    if (printed == 0) std::cout << "no laws\n";
    return 0;
  }

  if (ax->parsed()) {
    Theory th = load_theory_file(theory_name);
    AxiomatizeOptions opts;
    opts.tuple_cap = cap;
    AxiomatizeResult res;
    if (!typed_vars.empty()) {
      std::vector<TypedVarSpec> vars;
      std::string cur;
      for (char c : typed_vars + ",") {
        if (c == ',') {
          auto colon = cur.find(':');
          if (colon == std::string::npos) throw ParseError("typed var needs name:type");
          TypedVarSpec v;
          v.name = cur.substr(0, colon);
          std::string tname = cur.substr(colon + 1);
          v.carrier = -1;
          for (size_t i = 0; i < th.algebra.carriers.size(); ++i)
            if (th.algebra.carriers[i].type_name == tname) v.carrier = static_cast<int>(i);
          if (v.carrier < 0) throw std::runtime_error("unknown type '" + tname + "'");
          vars.push_back(v);
          cur.clear();
        } else
          cur.push_back(c);
      }
      res = axiomatize_typed(th, vars, opts);
    } else {
      if (nvars < 0) throw std::runtime_error("axiomatize needs --n or --typed-vars");
      res = axiomatize(th, nvars, opts);
    }
    std::cout << "tuple classes: " << res.total_tuples << " (" << res.empty_tuples
              << " empty, " << res.class_sorts.size() << " nonempty)\n";
    std::cout << "equations: " << res.th.equations.size() << " -> " << res.kept.size()
              << " after instance deletion\n";
    TermBank& bank = *th.bank;
    for (size_t idx : res.kept) {
      const auto& eq = res.th.equations[idx];
      std::cout << print_term(bank, eq.lhs) << " : " << print_term(bank, eq.rhs) << "  # "
                << res.class_labels[eq.source_class] << "\n";
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
