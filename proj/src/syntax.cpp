#include "eau/syntax.hpp"

#include <cctype>

namespace eau {

bool infix_info(std::string_view token, int* prec, bool* right_assoc) {
  struct Row { const char* tok; int prec; bool right; };
  static const Row rows[] = {
      {":", 1, false}, {"->", 1, false}, {"=", 1, false},
      {".", 3, true},
      {"+", 4, false}, {"-", 4, false},
      {"*", 5, false}, {"/", 5, false},
      {"<", 2, false},
      {"&", 2, false}, {"|", 2, false},  // not used by the default parser (| separates alternatives)
  };
  for (const Row& r : rows)
    if (token == r.tok) {
      if (prec) *prec = r.prec;
      if (right_assoc) *right_assoc = r.right;
      return true;
    }
  return false;
}

namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind;
  std::string text;
};

}  // namespace

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  bool accept(std::string_view punct) {
    if (tok_.kind == Token::Punct && tok_.text == punct) {
      advance();
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) throw ParseError("expected '" + std::string(punct) + "' near '" + tok_.text + "'");
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) {
      tok_ = {Token::End, ""};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      size_t start = pos_;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'' || d == '$')
          ++pos_;
        else
          break;
      }
      tok_ = {Token::Ident, std::string(text_.substr(start, pos_ - start))};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      tok_ = {Token::Number, std::string(text_.substr(start, pos_ - start))};
      return;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      pos_ += 2;
      tok_ = {Token::Punct, "->"};
      return;
    }
    ++pos_;
    tok_ = {Token::Punct, std::string(1, c)};
  }

  std::string_view text_;
  size_t pos_ = 0;
  Token tok_;
};

SymbolId TermParser::resolve(const std::string& ident, int arity) {
  Signature& sig = bank_->sig();
  SymbolId s = sig.lookup(ident);
  if (s != kNoSymbol) {
    if (sig.arity(s) != arity)
      throw ParseError("symbol '" + ident + "' used with arity " + std::to_string(arity));
    return s;
  }
  if (arity == 0 && (allow_new_vars_ || ident[0] == '$'))
    return sig.intern(ident, 0, /*is_var=*/true);
  throw ParseError("unknown symbol '" + ident + "'");
}

TermId TermParser::parse_primary(Lexer& lx) {
  Token t = lx.take();
  if (t.kind == Token::Number) {
    Signature& sig = bank_->sig();
    // a literally-named constant wins over numeral sugar
    if (SymbolId lit = sig.lookup(t.text); lit != kNoSymbol && sig.arity(lit) == 0)
      return bank_->leaf(lit);
    SymbolId zero = sig.lookup("0");
    SymbolId suc = sig.lookup("suc");
    long n = std::stol(t.text);
    if (n == 0 && zero != kNoSymbol) return bank_->leaf(zero);
    if (zero == kNoSymbol || suc == kNoSymbol)
      throw ParseError("numeral '" + t.text + "' needs 0/suc in the signature");
    TermId acc = bank_->leaf(zero);
    for (long i = 0; i < n; ++i) acc = bank_->app(suc, {acc});
    return acc;
  }
  if (t.kind == Token::Ident) {
    if (lx.accept("(")) {
      std::vector<TermId> args;
      if (!lx.accept(")")) {
        args.push_back(parse_expr(lx, 0));
        while (lx.accept(",")) args.push_back(parse_expr(lx, 0));
        lx.expect(")");
      }
      SymbolId f = resolve(t.text, static_cast<int>(args.size()));
      return bank_->app(f, args);
    }
    return bank_->leaf(resolve(t.text, 0));
  }
  if (t.kind == Token::Punct && t.text == "(") {
    TermId inner = parse_expr(lx, 0);
    lx.expect(")");
    return inner;
  }
  if (t.kind == Token::Punct && t.text == "[") {
    Signature& sig = bank_->sig();
    SymbolId nil = sig.lookup("[]");
    SymbolId cons = sig.lookup(".");
    if (nil == kNoSymbol)
      throw ParseError("list syntax needs [] in the signature");
    if (lx.accept("]")) return bank_->leaf(nil);
    std::vector<TermId> items;
    items.push_back(parse_expr(lx, 0));
    while (lx.accept(",")) items.push_back(parse_expr(lx, 0));
    TermId tail;
    if (lx.accept("|")) {
      tail = parse_expr(lx, 0);
      lx.expect("]");
    } else {
      lx.expect("]");
      tail = bank_->leaf(nil);
    }
    if (cons == kNoSymbol) throw ParseError("list syntax needs . in the signature");
    for (auto it = items.rbegin(); it != items.rend(); ++it)
      tail = bank_->app(cons, {*it, tail});
    return tail;
  }
  throw ParseError("unexpected token '" + t.text + "'");
}

TermId TermParser::parse_expr(Lexer& lx, int min_prec) {
  TermId lhs = parse_primary(lx);
  for (;;) {
    const Token& t = lx.peek();
    if (t.kind != Token::Punct) break;
    int prec;
    bool right;
    if (!infix_info(t.text, &prec, &right)) break;
    if (prec < min_prec) break;
    SymbolId f = bank_->sig().by_infix(t.text);
    if (f == kNoSymbol) break;
    lx.take();
    TermId rhs = parse_expr(lx, right ? prec : prec + 1);
    lhs = bank_->app(f, {lhs, rhs});
  }
  return lhs;
}

TermId TermParser::parse(std::string_view text) {
  Lexer lx(text);
  TermId t = parse_expr(lx, 0);
  if (lx.peek().kind != Token::End)
    throw ParseError("trailing input near '" + lx.peek().text + "'");
  return t;
}

namespace {

bool is_list_term(const TermBank& bank, TermId t, SymbolId nil, SymbolId cons) {
  while (true) {
    SymbolId h = bank.head(t);
    if (h == nil) return true;
    if (h != cons) return false;
    t = bank.args(t)[1];
  }
}

void print_rec(const TermBank& bank, TermId t, int parent_prec, bool right_side, std::string& out) {
  const Signature& sig = bank.sig();
  SymbolId h = bank.head(t);
  auto args = bank.args(t);
  SymbolId nil = sig.lookup("[]");
  SymbolId cons = sig.lookup(".");
  if (h == nil && nil != kNoSymbol) {
    out += "[]";
    return;
  }
  if (cons != kNoSymbol && h == cons && is_list_term(bank, t, nil, cons)) {
    out += '[';
    TermId cur = t;
    bool first = true;
    while (bank.head(cur) == cons) {
      if (!first) out += ',';
      print_rec(bank, bank.args(cur)[0], 0, false, out);
      first = false;
      cur = bank.args(cur)[1];
    }
    out += ']';
    return;
  }
  const std::string& tok = sig.infix(h);
  if (!tok.empty() && args.size() == 2) {
    int prec;
    bool right;
    infix_info(tok, &prec, &right);
    bool need_parens = prec < parent_prec || (prec == parent_prec && (right_side != right));
    if (need_parens) out += '(';
    print_rec(bank, args[0], right ? prec + 1 : prec, false, out);
    out += tok;
    print_rec(bank, args[1], right ? prec : prec + 1, true, out);
    if (need_parens) out += ')';
    return;
  }
  out += sig.name(h);
  if (!args.empty()) {
    out += '(';
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out += ',';
      print_rec(bank, args[i], 0, false, out);
    }
    out += ')';
  }
}

}  // namespace

std::string print_term(const TermBank& bank, TermId t) {
  std::string out;
  print_rec(bank, t, 0, false, out);
  return out;
}

}  // namespace eau
