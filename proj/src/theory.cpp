#include "eau/theory.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eau/syntax.hpp"

namespace eau {

int FiniteAlgebra::carrier_of_element(SymbolId e) const {
  for (size_t c = 0; c < carriers.size(); ++c)
    for (SymbolId s : carriers[c].elements)
      if (s == e) return static_cast<int>(c);
  return -1;
}

int FiniteAlgebra::element_index(int carrier, SymbolId e) const {
  const auto& elems = carriers[carrier].elements;
  for (size_t i = 0; i < elems.size(); ++i)
    if (elems[i] == e) return static_cast<int>(i);
  return -1;
}

int FiniteAlgebra::eval(const Op& op, std::span<const int> args) const {
  size_t idx = 0;
  for (size_t i = 0; i < args.size(); ++i)
    idx = idx * carriers[op.arg_carriers[i]].elements.size() + args[i];
  return op.table[idx];
}

const FiniteAlgebra::Op* FiniteAlgebra::op_for(SymbolId sym) const {
  for (const Op& op : ops)
    if (op.sym == sym) return &op;
  return nullptr;
}

Theory::Theory() : sig(std::make_unique<Signature>()), bank(std::make_unique<TermBank>(*sig)) {}

std::vector<Equation> Theory::rules() const {
  std::vector<Equation> out;
  for (const Equation& e : equations)
    if (e.oriented) out.push_back(e);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(std::string(trim(cur)));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::string(trim(cur)));
  return out;
}

}  // namespace

Theory parse_theory(std::string_view text) {
  Theory th;
  Signature& sig = *th.sig;
  std::istringstream in{std::string(text)};
  std::string line;
  // pending table rows
  FiniteAlgebra::Op* pending_op = nullptr;
  size_t pending_needed = 0;

  auto parse_term = [&](std::string_view t) {
    TermParser p(*th.bank, /*allow_new_vars=*/false);
    return p.parse(t);
  };

  while (std::getline(in, line)) {
    std::string_view lv = trim(line);
    if (lv.empty() || lv.front() == '#') continue;

    if (pending_op && pending_needed > 0) {
      for (const std::string& tok : split_ws(lv)) {
        if (pending_needed == 0) throw ParseError("too many table entries");
        SymbolId e = sig.lookup(tok);
        if (e == kNoSymbol) throw ParseError("unknown element '" + tok + "' in table");
        int rc = pending_op->result_carrier;
        int idx = th.algebra.element_index(rc, e);
        if (idx < 0) throw ParseError("element '" + tok + "' not in result carrier");
        pending_op->table.push_back(idx);
        --pending_needed;
      }
      if (pending_needed == 0) pending_op = nullptr;
      continue;
    }

    auto words = split_ws(lv);
    const std::string& kw = words[0];
    if (kw == "theory") {
      th.name = words.size() > 1 ? words[1] : "";
    } else if (kw == "var") {
      for (size_t i = 1; i < words.size(); ++i)
        th.declared_vars.push_back(sig.intern(words[i], 0, /*is_var=*/true));
    } else if (kw == "fun") {
      if (words.size() < 2) throw ParseError("fun needs name/arity");
      auto slash = words[1].find('/');
      if (slash == std::string::npos) throw ParseError("fun needs name/arity");
      std::string name = words[1].substr(0, slash);
      int arity = std::stoi(words[1].substr(slash + 1));
      SymbolId s = sig.intern(name, arity);
      if (words.size() >= 3 && words[2] == "infix") {
        std::string token = words.size() >= 4 ? words[3] : name;
        if (!infix_info(token, nullptr, nullptr))
          throw ParseError("unsupported infix token '" + token + "'");
        sig.set_infix(s, token);
      }
    } else if (kw == "eq" || kw == "rule") {
      std::string rest(lv.substr(kw.size()));
      std::string sep = kw == "eq" ? "=" : "->";
      size_t pos = rest.find(sep);
      if (pos == std::string::npos) throw ParseError(kw + " line without '" + sep + "'");
      Equation e;
      e.lhs = parse_term(trim(std::string_view(rest).substr(0, pos)));
      e.rhs = parse_term(trim(std::string_view(rest).substr(pos + sep.size())));
      e.oriented = kw == "rule";
      th.equations.push_back(e);
    } else if (kw == "type") {
      // type T = {e1,e2,...}
      size_t eq = lv.find('=');
      if (eq == std::string_view::npos) throw ParseError("type line without '='");
      std::string tname(trim(lv.substr(4, eq - 4)));
      std::string_view elems = trim(lv.substr(eq + 1));
      if (elems.size() < 2 || elems.front() != '{' || elems.back() != '}')
        throw ParseError("type elements need {..}");
      FiniteAlgebra::Carrier carrier;
      carrier.type_name = tname;
      for (const std::string& e : split_on(elems.substr(1, elems.size() - 2), ','))
        carrier.elements.push_back(sig.intern(e, 0));
      th.algebra.carriers.push_back(std::move(carrier));
    } else if (kw == "table") {
      // table f : T1,T2 -> T
      std::string rest(lv.substr(5));
      size_t colon = rest.find(':');
      size_t arrow = rest.find("->");
      if (colon == std::string::npos || arrow == std::string::npos)
        throw ParseError("table line needs ':' and '->'");
      std::string fname(trim(std::string_view(rest).substr(0, colon)));
      std::string args(trim(std::string_view(rest).substr(colon + 1, arrow - colon - 1)));
      std::string resname(trim(std::string_view(rest).substr(arrow + 2)));
      auto carrier_index = [&](const std::string& n) {
        for (size_t c = 0; c < th.algebra.carriers.size(); ++c)
          if (th.algebra.carriers[c].type_name == n) return static_cast<int>(c);
        throw ParseError("unknown type '" + n + "'");
      };
      FiniteAlgebra::Op op;
      size_t rows = 1;
      if (!args.empty()) {
        for (const std::string& a : split_on(args, ',')) {
          int c = carrier_index(a);
          op.arg_carriers.push_back(c);
          rows *= th.algebra.carriers[c].elements.size();
        }
      }
      op.result_carrier = carrier_index(resname);
      SymbolId f = sig.lookup(fname);
      if (f == kNoSymbol) f = sig.intern(fname, static_cast<int>(op.arg_carriers.size()));
      else if (sig.arity(f) != static_cast<int>(op.arg_carriers.size()))
        throw ParseError("table arity mismatch for '" + fname + "'");
      op.sym = f;
      th.algebra.ops.push_back(std::move(op));
      pending_op = &th.algebra.ops.back();
      pending_needed = rows;
    } else {
      throw ParseError("unknown theory directive '" + kw + "'");
    }
  }
  if (pending_op) throw ParseError("incomplete operation table");
  return th;
}

Theory load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open theory file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

std::string print_theory(const Theory& th) {
  std::string out;
  const Signature& sig = *th.sig;
  if (!th.name.empty()) out += "theory " + th.name + "\n";
  if (!th.declared_vars.empty()) {
    out += "var";
    for (SymbolId v : th.declared_vars) out += " " + sig.name(v);
    out += "\n";
  }
  // type blocks first so element constants are declared before use
  std::vector<char> is_element(sig.size(), 0);
  for (const auto& carrier : th.algebra.carriers) {
    out += "type " + carrier.type_name + " = {";
    for (size_t i = 0; i < carrier.elements.size(); ++i) {
      if (i) out += ",";
      out += sig.name(carrier.elements[i]);
      is_element[carrier.elements[i]] = 1;
    }
    out += "}\n";
  }
  for (SymbolId s = 0; s < static_cast<SymbolId>(sig.size()); ++s) {
    if (sig.is_var(s) || is_element[s]) continue;
    bool tabled = th.algebra.op_for(s) != nullptr;
    if (tabled) continue;
    out += "fun " + sig.name(s) + "/" + std::to_string(sig.arity(s));
    if (!sig.infix(s).empty()) out += " infix " + sig.infix(s);
    out += "\n";
  }
  for (const Equation& e : th.equations) {
    out += e.oriented ? "rule " : "eq ";
    out += print_term(*th.bank, e.lhs);
    out += e.oriented ? " -> " : " = ";
    out += print_term(*th.bank, e.rhs);
    out += "\n";
  }
  for (const auto& op : th.algebra.ops) {
    out += "table " + sig.name(op.sym) + " : ";
    for (size_t i = 0; i < op.arg_carriers.size(); ++i) {
      if (i) out += ",";
      out += th.algebra.carriers[op.arg_carriers[i]].type_name;
    }
    out += " -> " + th.algebra.carriers[op.result_carrier].type_name + "\n";
    size_t per_row = op.arg_carriers.empty()
                         ? 1
                         : th.algebra.carriers[op.arg_carriers.back()].elements.size();
    for (size_t i = 0; i < op.table.size(); ++i) {
      out += i % per_row == 0 ? (i ? "\n  " : "  ") : " ";
      out += sig.name(th.algebra.carriers[op.result_carrier].elements[op.table[i]]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace eau
