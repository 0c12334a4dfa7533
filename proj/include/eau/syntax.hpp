#ifndef EAU_SYNTAX_HPP
#define EAU_SYNTAX_HPP

#include <functional>
#include <stdexcept>
#include <string>

#include "eau/term.hpp"

namespace eau {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Term text syntax: prefix applications f(t1,...,tn); infix sugar for
// symbols carrying an infix token (+ - * / . :); list sugar [] and
// [t1,...,tn|tail] for signatures providing "[]" and ".". Numerals are
// sugar for suc towers when the signature provides 0/suc.
//
// Identifier resolution while parsing is pluggable so the same parser
// serves plain terms (identifiers are symbols or variables) and grammar
// right sides (identifiers may also be sort names).

class TermParser {
 public:
  // resolve(name) -> symbol id; called for identifiers that are not yet
  // known symbols. Returning kNoSymbol is an error. The default resolver
  // interns unknown identifiers as fresh variables when allow_new_vars.
  TermParser(TermBank& bank, bool allow_new_vars = false)
      : bank_(&bank), allow_new_vars_(allow_new_vars) {}

  TermId parse(std::string_view text);

 private:
  friend class Lexer;
  TermId parse_expr(class Lexer& lx, int min_prec);
  TermId parse_primary(class Lexer& lx);
  SymbolId resolve(const std::string& ident, int arity);

  TermBank* bank_;
  bool allow_new_vars_;
};

// Infix table shared by parser and printer.
// token -> (precedence, right_assoc)
bool infix_info(std::string_view token, int* prec, bool* right_assoc);

std::string print_term(const TermBank& bank, TermId t);

}  // namespace eau

#endif
