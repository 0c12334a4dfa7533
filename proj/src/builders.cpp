#include "eau/builders.hpp"

#include <algorithm>
#include <stdexcept>

#include "eau/syntax.hpp"

namespace eau {

// --- finite algebras ----------------------------------------------------------

AlgebraClassGrammar::AlgebraClassGrammar(GrammarSystem& gs, TermBank& bank,
                                         const FiniteAlgebra& alg, std::vector<Equation> rules)
    : alg_(&alg) {
  gs_ = &gs;
  bank_ = &bank;
  rules_ = std::move(rules);
  const Signature& sig = gs.sig();
  sorts_.resize(alg.carriers.size());
  for (size_t c = 0; c < alg.carriers.size(); ++c)
    for (SymbolId e : alg.carriers[c].elements)
      sorts_[c].push_back(gs.add_sort("eqc_" + sig.name(e)));
  // constants first, then one production per table row
  for (size_t c = 0; c < alg.carriers.size(); ++c)
    for (size_t e = 0; e < alg.carriers[c].elements.size(); ++e)
      gs.add_alt(sorts_[c][e], Alt{alg.carriers[c].elements[e], {}});
  for (const FiniteAlgebra::Op& op : alg.ops) {
    size_t k = op.arg_carriers.size();
    std::vector<int> idx(k, 0);
    size_t row = 0;
    for (;;) {
      int res = op.table[row++];
      Alt alt;
      alt.head = op.sym;
      for (size_t j = 0; j < k; ++j) alt.args.push_back(sorts_[op.arg_carriers[j]][idx[j]]);
      gs.add_alt(sorts_[op.result_carrier][res], std::move(alt));
      if (k == 0) break;
      int pos = static_cast<int>(k) - 1;
      while (pos >= 0 &&
             ++idx[pos] == static_cast<int>(alg.carriers[op.arg_carriers[pos]].elements.size())) {
        idx[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  gs.finalize();
}

SortId AlgebraClassGrammar::class_of_element(int carrier, int element) const {
  return sorts_[carrier][element];
}

std::pair<int, int> AlgebraClassGrammar::eval(TermId t) const {
  SymbolId h = bank_->head(t);
  int c = alg_->carrier_of_element(h);
  if (c >= 0) return {c, alg_->element_index(c, h)};
  const FiniteAlgebra::Op* op = alg_->op_for(h);
  if (!op) throw std::runtime_error("term not over the algebra's signature");
  std::vector<int> args;
  auto as = bank_->args(t);
  for (size_t i = 0; i < as.size(); ++i) {
    auto [ac, ae] = eval(as[i]);
    if (ac != op->arg_carriers[i]) throw std::runtime_error("ill-typed term over the algebra");
    args.push_back(ae);
  }
  return {op->result_carrier, alg_->eval(*op, args)};
}

SortId AlgebraClassGrammar::class_of(TermId ground) {
  auto [c, e] = eval(ground);
  return sorts_[c][e];
}

std::vector<SymbolId> AlgebraClassGrammar::function_symbols() const {
  std::vector<SymbolId> out;
  for (const auto& carrier : alg_->carriers)
    for (SymbolId e : carrier.elements) out.push_back(e);
  for (const auto& op : alg_->ops) out.push_back(op.sym);
  return out;
}

// --- nat presets ---------------------------------------------------------------

NatClassGrammar::NatClassGrammar(GrammarSystem& gs, TermBank& bank, NatPreset preset, int cutoff)
    : preset_(preset), cutoff_(cutoff) {
  gs_ = &gs;
  bank_ = &bank;
  Signature& sig = gs.sig();
  zero = sig.intern("0", 0);
  suc = sig.intern("suc", 1);
  plus = sig.intern("+", 2);
  sig.set_infix(plus, "+");
  if (preset == NatPreset::PlusTimes) {
    times = sig.intern("*", 2);
    sig.set_infix(times, "*");
  }
  if (preset == NatPreset::PlusMinusCutoff) {
    minus = sig.intern("-", 2);
    sig.set_infix(minus, "-");
    if (cutoff_ < 0) throw std::invalid_argument("cut-off preset needs a bound");
  }
  // list plumbing for the series application
  SymbolId nil = sig.intern("[]", 0);
  SymbolId cons = sig.intern(".", 2);
  sig.set_infix(cons, ".");
  (void)nil;

  SymbolId x = sig.intern("x", 0, true);
  SymbolId y = sig.intern("y", 0, true);
  TermId tx = bank.leaf(x), ty = bank.leaf(y);
  auto rule = [&](TermId l, TermId r) { rules_.push_back(Equation{l, r, true}); };
  TermId z = bank.leaf(zero);
  rule(bank.app(plus, {tx, z}), tx);
  rule(bank.app(plus, {z, tx}), tx);
  rule(bank.app(plus, {tx, bank.app(suc, {ty})}), bank.app(suc, {bank.app(plus, {tx, ty})}));
  rule(bank.app(plus, {bank.app(suc, {tx}), ty}), bank.app(suc, {bank.app(plus, {tx, ty})}));
  if (preset == NatPreset::PlusTimes) {
    rule(bank.app(times, {tx, z}), z);
    rule(bank.app(times, {z, tx}), z);
    rule(bank.app(times, {tx, bank.app(suc, {ty})}),
         bank.app(plus, {bank.app(times, {tx, ty}), tx}));
    rule(bank.app(times, {bank.app(suc, {tx}), ty}),
         bank.app(plus, {bank.app(times, {tx, ty}), ty}));
  }
  if (preset == NatPreset::PlusMinusCutoff) {
    rule(bank.app(minus, {tx, z}), tx);
    rule(bank.app(minus, {bank.app(suc, {tx}), bank.app(suc, {ty})}), bank.app(minus, {tx, ty}));
  }
}

SortId NatClassGrammar::universal_sort() {
  if (universal_ != kNoSort) return universal_;
  universal_ = gs_->add_sort("s_n");
  gs_->add_alt(universal_, Alt{zero, {}});
  gs_->add_alt(universal_, Alt{suc, {universal_}});
  gs_->add_alt(universal_, Alt{plus, {universal_, universal_}});
  if (times != kNoSymbol) gs_->add_alt(universal_, Alt{times, {universal_, universal_}});
  if (minus != kNoSymbol) gs_->add_alt(universal_, Alt{minus, {universal_, universal_}});
  return universal_;
}

SortId NatClassGrammar::sort_for_value(long value) {
  if (value < 0) throw std::out_of_range("value outside preset domain");
  if (preset_ == NatPreset::PlusMinusCutoff && value > cutoff_)
    throw std::out_of_range("value outside preset cut-off");
  auto it = memo_.find(value);
  if (it != memo_.end()) return it->second;
  SortId s = gs_->add_sort("s" + std::to_string(value));
  memo_.emplace(value, s);
  if (value == 0)
    gs_->add_alt(s, Alt{zero, {}});
  else
    gs_->add_alt(s, Alt{suc, {sort_for_value(value - 1)}});
  if (preset_ == NatPreset::PlusMinusCutoff) {
    for (long i = value; i >= 0; --i)  // descending, as in the cut-off figure
      gs_->add_alt(s, Alt{plus, {sort_for_value(i), sort_for_value(value - i)}});
    for (long j = 0; value + j <= cutoff_; ++j)
      gs_->add_alt(s, Alt{minus, {sort_for_value(value + j), sort_for_value(j)}});
  } else {
    for (long i = 0; i <= value; ++i)  // ascending, as in the s0/s1 figure
      gs_->add_alt(s, Alt{plus, {sort_for_value(i), sort_for_value(value - i)}});
    if (preset_ == NatPreset::PlusTimes) {
      if (value == 0) {
        gs_->add_alt(s, Alt{times, {sort_for_value(0), universal_sort()}});
        gs_->add_alt(s, Alt{times, {universal_sort(), sort_for_value(0)}});
      } else {
        for (long d = 1; d <= value; ++d)
          if (value % d == 0)
            gs_->add_alt(s, Alt{times, {sort_for_value(d), sort_for_value(value / d)}});
      }
    }
  }
  return s;
}

long NatClassGrammar::eval(TermId t) const {
  SymbolId h = bank_->head(t);
  auto as = bank_->args(t);
  if (h == zero) return 0;
  if (h == suc) return eval(as[0]) + 1;
  if (h == plus) return eval(as[0]) + eval(as[1]);
  if (h == times && times != kNoSymbol) return eval(as[0]) * eval(as[1]);
  if (h == minus && minus != kNoSymbol) {
    long a = eval(as[0]), b = eval(as[1]);
    if (a < b) throw std::out_of_range("negative value outside preset domain");
    return a - b;
  }
  throw std::runtime_error("term not over the nat preset signature");
}

SortId NatClassGrammar::class_of(TermId ground) { return sort_for_value(eval(ground)); }

std::vector<SymbolId> NatClassGrammar::function_symbols() const {
  std::vector<SymbolId> out{zero, suc, plus};
  if (times != kNoSymbol) out.push_back(times);
  if (minus != kNoSymbol) out.push_back(minus);
  return out;
}

// --- list preset ----------------------------------------------------------------

ListClassGrammar::ListClassGrammar(GrammarSystem& gs, TermBank& bank) {
  gs_ = &gs;
  bank_ = &bank;
  Signature& sig = gs.sig();
  nil = sig.intern("[]", 0);
  cons = sig.intern(".", 2);
  sig.set_infix(cons, ".");
  app = sig.intern("app", 2);
  rev = sig.intern("rev", 1);

  SymbolId x = sig.intern("x", 0, true);
  SymbolId y = sig.intern("y", 0, true);
  SymbolId zv = sig.intern("z", 0, true);
  TermId tx = bank.leaf(x), ty = bank.leaf(y), tz = bank.leaf(zv), tn = bank.leaf(nil);
  auto rule = [&](TermId l, TermId r) { rules_.push_back(Equation{l, r, true}); };
  rule(bank.app(app, {tn, tx}), tx);
  rule(bank.app(app, {bank.app(cons, {tx, ty}), tz}),
       bank.app(cons, {tx, bank.app(app, {ty, tz})}));
  rule(bank.app(rev, {tn}), tn);
  rule(bank.app(rev, {bank.app(cons, {tx, ty})}),
       bank.app(app, {bank.app(rev, {ty}), bank.app(cons, {tx, tn})}));
}

namespace {

bool list_literal(const TermBank& bank, TermId t, SymbolId nil, SymbolId cons,
                  std::vector<TermId>* items = nullptr) {
  while (bank.head(t) == cons) {
    if (items) items->push_back(bank.args(t)[0]);
    t = bank.args(t)[1];
  }
  return bank.head(t) == nil;
}

TermId make_list(TermBank& bank, std::span<const TermId> items, SymbolId nil, SymbolId cons) {
  TermId acc = bank.leaf(nil);
  for (auto it = items.rbegin(); it != items.rend(); ++it) acc = bank.app(cons, {*it, acc});
  return acc;
}

}  // namespace

TermId ListClassGrammar::normalize_key(TermId t) const {
  TermBank& bank = *bank_;
  SymbolId h = bank.head(t);
  if (h == cons) {
    TermId a = normalize_key(bank.args(t)[0]);
    TermId b = normalize_key(bank.args(t)[1]);
    return bank.app(cons, {a, b});
  }
  if (h == app) {
    TermId a = normalize_key(bank.args(t)[0]);
    TermId b = normalize_key(bank.args(t)[1]);
    if (bank.head(a) == nil) return b;
    if (bank.head(b) == nil) return a;
    std::vector<TermId> la, lb;
    if (list_literal(bank, a, nil, cons, &la) && list_literal(bank, b, nil, cons, &lb)) {
      la.insert(la.end(), lb.begin(), lb.end());
      return make_list(bank, la, nil, cons);
    }
    return bank.app(app, {a, b});
  }
  if (h == rev) {
    TermId a = normalize_key(bank.args(t)[0]);
    if (bank.head(a) == rev) return bank.args(a)[0];
    std::vector<TermId> la;
    if (list_literal(bank, a, nil, cons, &la)) {
      std::reverse(la.begin(), la.end());
      return make_list(bank, la, nil, cons);
    }
    return bank.app(rev, {a});
  }
  return t;
}

SortId ListClassGrammar::class_of(TermId term) {
  TermBank& bank = *bank_;
  TermId key = normalize_key(term);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  SortId s = gs_->add_sort("eqc" + std::to_string(memo_.size() + 1));
  memo_.emplace(key, s);

  SymbolId h = bank.head(key);
  std::vector<TermId> items;
  if ((h == nil || h == cons) && list_literal(bank, key, nil, cons, &items)) {
    // concrete list: element classes, all splits, and the reversed list
    if (items.empty()) {
      gs_->add_alt(s, Alt{nil, {}});
    } else {
      std::vector<TermId> tail(items.begin() + 1, items.end());
      gs_->add_alt(s, Alt{cons, {class_of(items[0]), class_of(make_list(bank, tail, nil, cons))}});
    }
    for (size_t i = items.size() + 1; i-- > 0;) {
      std::vector<TermId> left(items.begin(), items.begin() + i);
      std::vector<TermId> right(items.begin() + i, items.end());
      gs_->add_alt(s, Alt{app, {class_of(make_list(bank, left, nil, cons)),
                                class_of(make_list(bank, right, nil, cons))}});
    }
    std::vector<TermId> rv(items.rbegin(), items.rend());
    gs_->add_alt(s, Alt{rev, {class_of(make_list(bank, rv, nil, cons))}});
  } else if (h == rev) {
    gs_->add_alt(s, Alt{rev, {class_of(bank.args(key)[0])}});
    gs_->add_alt(s, Alt{app, {class_of(bank.leaf(nil)), s}});
    gs_->add_alt(s, Alt{app, {s, class_of(bank.leaf(nil))}});
  } else if (h == app) {
    gs_->add_alt(s, Alt{app, {class_of(bank.args(key)[0]), class_of(bank.args(key)[1])}});
    gs_->add_alt(s, Alt{app, {s, class_of(bank.leaf(nil))}});
    gs_->add_alt(s, Alt{app, {class_of(bank.leaf(nil)), s}});
    gs_->add_alt(s, Alt{rev, {class_of(bank.app(rev, {key}))}});
  } else if (h == cons) {
    // cons with a non-list tail
    gs_->add_alt(s, Alt{cons, {class_of(bank.args(key)[0]), class_of(bank.args(key)[1])}});
    gs_->add_alt(s, Alt{app, {s, class_of(bank.leaf(nil))}});
    gs_->add_alt(s, Alt{app, {class_of(bank.leaf(nil)), s}});
    gs_->add_alt(s, Alt{rev, {class_of(bank.app(rev, {key}))}});
  } else {
    // atoms and object variables
    gs_->add_alt(s, Alt{h, {}});
    gs_->add_alt(s, Alt{app, {class_of(bank.leaf(nil)), s}});
    gs_->add_alt(s, Alt{app, {s, class_of(bank.leaf(nil))}});
    gs_->add_alt(s, Alt{rev, {class_of(bank.app(rev, {key}))}});
  }
  return s;
}

std::vector<SymbolId> ListClassGrammar::function_symbols() const {
  return {nil, cons, app, rev};
}

// --- theory (5) -----------------------------------------------------------------

Theory5ClassGrammar::Theory5ClassGrammar(GrammarSystem& gs, TermBank& bank) {
  gs_ = &gs;
  bank_ = &bank;
  Signature& sig = gs.sig();
  zero = sig.intern("0", 0);
  suc = sig.intern("suc", 1);
  plus = sig.intern("+", 2);
  sig.set_infix(plus, "+");
  times = sig.intern("*", 2);
  sig.set_infix(times, "*");
  iff = sig.intern("if", 3);
  ev = sig.intern("ev", 1);
  SymbolId nil = sig.intern("[]", 0);
  SymbolId cons = sig.intern(".", 2);
  sig.set_infix(cons, ".");
  (void)nil;
  (void)cons;

  for (int i = 0; i < 6; ++i) s_val[i] = gs.add_sort("s" + std::to_string(i));
  s_p = gs.add_sort("s_p");
  s_e = gs.add_sort("s_e");
  s_o = gs.add_sort("s_o");
  s_n = gs.add_sort("s_n");
  auto A = [&](SortId s, SymbolId h, std::vector<SortId> args) {
    gs.add_alt(s, Alt{h, std::move(args)});
  };
  // Literal definitions of the hand-built class grammar for theory (5).
  A(s_val[0], zero, {});
  A(s_val[0], iff, {s_p, s_val[0], s_n});
  A(s_val[0], iff, {s_val[0], s_n, s_val[0]});
  A(s_val[0], ev, {s_o});
  A(s_val[0], plus, {s_val[0], s_val[0]});
  A(s_val[0], times, {s_val[0], s_n});
  A(s_val[0], times, {s_n, s_val[0]});

  A(s_val[1], suc, {s_val[0]});
  A(s_val[1], iff, {s_p, s_val[1], s_n});
  A(s_val[1], iff, {s_val[0], s_n, s_val[1]});
  A(s_val[1], ev, {s_e});
  A(s_val[1], plus, {s_val[1], s_val[0]});
  A(s_val[1], plus, {s_val[0], s_val[1]});
  A(s_val[1], times, {s_val[1], s_val[1]});

  A(s_val[2], suc, {s_val[1]});
  A(s_val[2], iff, {s_p, s_val[2], s_n});
  A(s_val[2], iff, {s_val[0], s_n, s_val[2]});
  A(s_val[2], plus, {s_val[2], s_val[0]});
  A(s_val[2], plus, {s_val[1], s_val[1]});
  A(s_val[2], plus, {s_val[0], s_val[2]});
  A(s_val[2], times, {s_val[1], s_val[2]});
  A(s_val[2], times, {s_val[2], s_val[1]});

  A(s_val[3], suc, {s_val[2]});
  A(s_val[3], iff, {s_p, s_val[3], s_n});
  A(s_val[3], iff, {s_val[0], s_n, s_val[3]});
  A(s_val[3], plus, {s_val[3], s_val[0]});
  A(s_val[3], plus, {s_val[2], s_val[1]});
  A(s_val[3], plus, {s_val[1], s_val[2]});
  A(s_val[3], plus, {s_val[0], s_val[3]});
  A(s_val[3], times, {s_val[1], s_val[3]});
  A(s_val[3], times, {s_val[3], s_val[1]});

  A(s_val[4], suc, {s_val[3]});
  A(s_val[4], iff, {s_p, s_val[4], s_n});
  A(s_val[4], iff, {s_val[0], s_n, s_val[4]});
  A(s_val[4], plus, {s_val[4], s_val[0]});
  A(s_val[4], plus, {s_val[3], s_val[1]});
  A(s_val[4], plus, {s_val[2], s_val[2]});
  A(s_val[4], plus, {s_val[1], s_val[3]});
  A(s_val[4], plus, {s_val[0], s_val[4]});
  A(s_val[4], times, {s_val[1], s_val[4]});
  A(s_val[4], times, {s_val[2], s_val[2]});
  A(s_val[4], times, {s_val[4], s_val[1]});

  A(s_val[5], suc, {s_val[4]});
  A(s_val[5], iff, {s_p, s_val[5], s_n});
  A(s_val[5], iff, {s_val[0], s_n, s_val[5]});
  A(s_val[5], plus, {s_val[5], s_val[0]});
  A(s_val[5], plus, {s_val[4], s_val[1]});
  A(s_val[5], plus, {s_val[3], s_val[2]});
  A(s_val[5], plus, {s_val[2], s_val[3]});
  A(s_val[5], plus, {s_val[1], s_val[4]});
  A(s_val[5], plus, {s_val[0], s_val[5]});
  A(s_val[5], times, {s_val[1], s_val[5]});
  A(s_val[5], times, {s_val[5], s_val[1]});

  A(s_p, suc, {s_n});
  A(s_p, iff, {s_p, s_p, s_n});
  A(s_p, iff, {s_val[0], s_n, s_p});
  A(s_p, ev, {s_e});
  A(s_p, plus, {s_p, s_n});
  A(s_p, plus, {s_n, s_p});
  A(s_p, times, {s_p, s_p});

  A(s_e, zero, {});
  A(s_e, iff, {s_p, s_e, s_n});
  A(s_e, iff, {s_val[0], s_n, s_e});
  A(s_e, ev, {s_o});
  A(s_e, suc, {s_o});
  A(s_e, plus, {s_e, s_e});
  A(s_e, plus, {s_o, s_o});
  A(s_e, times, {s_e, s_n});
  A(s_e, times, {s_n, s_e});

  A(s_o, suc, {s_e});
  A(s_o, iff, {s_p, s_o, s_n});
  A(s_o, iff, {s_val[0], s_n, s_o});
  A(s_o, ev, {s_e});
  A(s_o, plus, {s_o, s_e});
  A(s_o, plus, {s_e, s_o});
  A(s_o, times, {s_o, s_o});

  A(s_n, zero, {});
  A(s_n, suc, {s_n});
  A(s_n, iff, {s_n, s_n, s_n});
  A(s_n, ev, {s_n});
  A(s_n, plus, {s_n, s_n});
  A(s_n, times, {s_n, s_n});

  SymbolId x = sig.intern("x", 0, true);
  SymbolId y = sig.intern("y", 0, true);
  SymbolId zv = sig.intern("z", 0, true);
  TermId tx = bank.leaf(x), ty = bank.leaf(y), tz = bank.leaf(zv), t0 = bank.leaf(zero);
  auto rule = [&](TermId l, TermId r) { rules_.push_back(Equation{l, r, true}); };
  rule(bank.app(plus, {tx, t0}), tx);
  rule(bank.app(plus, {tx, bank.app(suc, {ty})}), bank.app(suc, {bank.app(plus, {tx, ty})}));
  rule(bank.app(times, {tx, t0}), t0);
  rule(bank.app(times, {tx, bank.app(suc, {ty})}),
       bank.app(plus, {bank.app(times, {tx, ty}), tx}));
  rule(bank.app(iff, {t0, tx, ty}), ty);
  rule(bank.app(iff, {bank.app(suc, {tz}), tx, ty}), tx);
  rule(bank.app(ev, {t0}), bank.app(suc, {t0}));
  rule(bank.app(ev, {bank.app(suc, {t0})}), t0);
  rule(bank.app(ev, {bank.app(suc, {bank.app(suc, {tx})})}), bank.app(ev, {tx}));
  gs.finalize();
}

long Theory5ClassGrammar::eval(TermId t) const {
  SymbolId h = bank_->head(t);
  auto as = bank_->args(t);
  if (h == zero) return 0;
  if (h == suc) return eval(as[0]) + 1;
  if (h == plus) return eval(as[0]) + eval(as[1]);
  if (h == times) return eval(as[0]) * eval(as[1]);
  if (h == iff) return eval(as[0]) > 0 ? eval(as[1]) : eval(as[2]);
  if (h == ev) return eval(as[0]) % 2 == 0 ? 1 : 0;
  throw std::runtime_error("term not over the theory (5) signature");
}

SortId Theory5ClassGrammar::sort_for_value(long value) {
  if (value < 0 || value > 5) throw std::out_of_range("value outside the theory (5) classes");
  return s_val[value];
}

SortId Theory5ClassGrammar::class_of(TermId ground) { return sort_for_value(eval(ground)); }

std::vector<SymbolId> Theory5ClassGrammar::function_symbols() const {
  return {zero, suc, plus, times, iff, ev};
}

std::unique_ptr<ClassGrammar> make_preset(const std::string& name, GrammarSystem& gs,
                                          TermBank& bank) {
  if (name == "nat.plus") return std::make_unique<NatClassGrammar>(gs, bank, NatPreset::Plus);
  if (name == "nat.plus_times")
    return std::make_unique<NatClassGrammar>(gs, bank, NatPreset::PlusTimes);
  if (name.rfind("nat.plus_minus_cutoff", 0) == 0) {
    int n = std::stoi(name.substr(std::string("nat.plus_minus_cutoff").size()));
    return std::make_unique<NatClassGrammar>(gs, bank, NatPreset::PlusMinusCutoff, n);
  }
  if (name == "list.append_reverse") return std::make_unique<ListClassGrammar>(gs, bank);
  if (name == "nat.theory5") return std::make_unique<Theory5ClassGrammar>(gs, bank);
  throw std::runtime_error("unknown preset '" + name + "'");
}

// --- filter sorts -----------------------------------------------------------------

SortId top_sort(GrammarSystem& gs, std::span<const SymbolId> funcs,
                std::span<const SymbolId> vars) {
  SortId top = gs.add_sort("s_TOP");
  for (SymbolId v : vars) gs.add_alt(top, Alt{v, {}});
  for (SymbolId f : funcs) {
    Alt a;
    a.head = f;
    a.args.assign(gs.sig().arity(f), top);
    gs.add_alt(top, std::move(a));
  }
  return top;
}

namespace {

SortId pattern_sort(GrammarSystem& gs, TermBank& bank, TermId pattern, SortId top,
                    std::map<TermId, SortId>& memo) {
  if (bank.is_var(pattern)) return top;
  auto it = memo.find(pattern);
  if (it != memo.end()) return it->second;
  SortId s = gs.add_sort("pat" + std::to_string(gs.sort_count()));
  memo.emplace(pattern, s);
  Alt a;
  a.head = bank.head(pattern);
  for (TermId arg : bank.args(pattern)) a.args.push_back(pattern_sort(gs, bank, arg, top, memo));
  gs.add_alt(s, std::move(a));
  return s;
}

}  // namespace

SortId reducible_sort(GrammarSystem& gs, TermBank& bank, const std::vector<Equation>& rules,
                      SortId top, std::span<const SymbolId> funcs, NonlinearLhs mode) {
  SortId red = gs.add_sort("s_RED");
  std::map<TermId, SortId> memo;
  for (const Equation& r : rules) {
    if (!r.oriented) continue;
    if (!bank.is_linear(r.lhs)) {
      if (mode == NonlinearLhs::Error)
        throw std::runtime_error("nonlinear left-hand side; pass an approximation mode");
      if (mode == NonlinearLhs::Drop) continue;
      // Linearize: mapping every variable occurrence to s_TOP independently
      // is exactly the linear anti-instance.
    }
    Alt a;
    a.head = bank.head(r.lhs);
    for (TermId arg : bank.args(r.lhs)) a.args.push_back(pattern_sort(gs, bank, arg, top, memo));
    gs.add_alt(red, std::move(a));
  }
  for (SymbolId f : funcs) {
    int k = gs.sig().arity(f);
    for (int j = 0; j < k; ++j) {
      Alt a;
      a.head = f;
      a.args.assign(k, top);
      a.args[j] = red;
      gs.add_alt(red, std::move(a));
    }
  }
  return red;
}

SortId normal_form_sort(GrammarSystem& gs, TermBank& bank, const std::vector<Equation>& rules,
                        std::span<const SymbolId> funcs, std::span<const SymbolId> vars,
                        NonlinearLhs mode) {
  SortId top = top_sort(gs, funcs, vars);
  SortId red = reducible_sort(gs, bank, rules, top, funcs, mode);
  gs.finalize();
  return subtract(gs, top, red);
}

std::vector<std::vector<std::vector<SymbolId>>> parts(std::span<const SymbolId> vars, int arity) {
  std::vector<std::vector<std::vector<SymbolId>>> out;
  if (arity == 0) return out;  // parts(V,0) = {}
  size_t n = vars.size();
  std::vector<int> assign(n, 0);
  std::vector<std::vector<int>> assignments;
  for (;;) {
    assignments.push_back(assign);
    int pos = static_cast<int>(n) - 1;
    while (pos >= 0 && ++assign[pos] == arity) {
      assign[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    if (n == 0) break;
  }
  std::stable_sort(assignments.begin(), assignments.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     auto used = [](const std::vector<int>& v) {
                       std::vector<int> u(v.begin(), v.end());
                       std::sort(u.begin(), u.end());
                       u.erase(std::unique(u.begin(), u.end()), u.end());
                       return u.size();
                     };
                     return used(a) < used(b);
                   });
  for (const auto& a : assignments) {
    std::vector<std::vector<SymbolId>> blocks(arity);
    for (size_t i = 0; i < n; ++i) blocks[a[i]].push_back(vars[i]);
    out.push_back(std::move(blocks));
  }
  return out;
}

namespace {

SortId var_filter_rec(GrammarSystem& gs, std::span<const SymbolId> funcs,
                      const std::vector<SymbolId>& must, std::span<const SymbolId> may,
                      std::map<std::vector<SymbolId>, SortId>& memo) {
  auto it = memo.find(must);
  if (it != memo.end()) return it->second;
  std::string label;
  for (SymbolId v : must) label += "_" + gs.sig().name(v);
  SortId s = gs.add_sort("s_V" + label);
  memo.emplace(must, s);
  if (must.empty()) {
    for (SymbolId v : may) gs.add_alt(s, Alt{v, {}});
    for (SymbolId f : funcs) {
      Alt a;
      a.head = f;
      a.args.assign(gs.sig().arity(f), s);
      gs.add_alt(s, std::move(a));
    }
    return s;
  }
  if (must.size() == 1) {
    gs.add_alt(s, Alt{must[0], {}});
    SortId none = var_filter_rec(gs, funcs, {}, may, memo);
    for (SymbolId f : funcs) {
      int k = gs.sig().arity(f);
      for (int j = 0; j < k; ++j) {
        Alt a;
        a.head = f;
        a.args.assign(k, none);
        a.args[j] = s;
        gs.add_alt(s, std::move(a));
      }
    }
    return s;
  }
  for (SymbolId f : funcs) {
    int k = gs.sig().arity(f);
    for (const auto& partition : parts(must, k)) {
      Alt a;
      a.head = f;
      for (const auto& block : partition)
        a.args.push_back(var_filter_rec(gs, funcs, block, may, memo));
      gs.add_alt(s, std::move(a));
    }
  }
  return s;
}

}  // namespace

SortId var_filter_sort(GrammarSystem& gs, std::span<const SymbolId> funcs,
                       std::span<const SymbolId> must_occur,
                       std::span<const SymbolId> may_occur) {
  for (SymbolId v : must_occur)
    if (std::find(may_occur.begin(), may_occur.end(), v) == may_occur.end())
      throw std::invalid_argument("var filter requires V subset of W");
  std::map<std::vector<SymbolId>, SortId> memo;
  std::vector<SymbolId> must(must_occur.begin(), must_occur.end());
  return var_filter_rec(gs, funcs, must, may_occur, memo);
}

}  // namespace eau
