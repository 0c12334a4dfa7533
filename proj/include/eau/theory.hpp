#ifndef EAU_THEORY_HPP
#define EAU_THEORY_HPP

#include <memory>
#include <string>
#include <vector>

#include "eau/term.hpp"

namespace eau {

struct Equation {
  TermId lhs = kNoTerm;
  TermId rhs = kNoTerm;
  bool oriented = false;  // usable as a rewrite rule lhs -> rhs
};

// Operation tables over finite carriers (possibly typed). Elements are
// nullary symbols; tables are total and row-major over the argument
// carriers in declaration order.
struct FiniteAlgebra {
  struct Carrier {
    std::string type_name;
    std::vector<SymbolId> elements;
  };
  struct Op {
    SymbolId sym = kNoSymbol;
    std::vector<int> arg_carriers;
    int result_carrier = 0;
    std::vector<int> table;  // element indices in the result carrier
  };
  std::vector<Carrier> carriers;
  std::vector<Op> ops;

  int carrier_of_element(SymbolId e) const;
  int element_index(int carrier, SymbolId e) const;
  // Table lookup; arguments are element indices within the arg carriers.
  int eval(const Op& op, std::span<const int> args) const;
  const Op* op_for(SymbolId sym) const;
  bool empty() const { return carriers.empty(); }
};

// An equational theory: signature, equations (optionally oriented), and an
// optional finite algebra given by tables.
struct Theory {
  std::string name;
  std::unique_ptr<Signature> sig;
  std::unique_ptr<TermBank> bank;
  std::vector<SymbolId> declared_vars;
  std::vector<Equation> equations;
  FiniteAlgebra algebra;

  Theory();
  Theory(Theory&&) = default;
  Theory& operator=(Theory&&) = default;

  // Left-hand sides of the oriented rules.
  std::vector<Equation> rules() const;
};

// Text format, one declaration per line:
//   theory NAME
//   var x y z
//   fun name/arity [infix TOKEN]
//   eq lhs = rhs
//   rule lhs -> rhs
//   type T = {e1,e2,...}
//   table f : T1,T2 -> T
//     <row-major element entries>
Theory parse_theory(std::string_view text);
Theory load_theory_file(const std::string& path);
std::string print_theory(const Theory& th);

}  // namespace eau

#endif
