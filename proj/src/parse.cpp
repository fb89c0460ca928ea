#include "liesynth/parse.hpp"

#include "liesynth/sampling.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace liesynth {

void UFuncTable::declare(const std::string& name, std::size_t arity) {
  auto [it, inserted] = arity_.emplace(name, arity);
  if (!inserted && it->second != arity) {
    throw std::invalid_argument("ufunc '" + name + "' redeclared with arity " +
                                std::to_string(arity) + " (was " + std::to_string(it->second) +
                                ")");
  }
}

std::optional<std::size_t> UFuncTable::arity(const std::string& name) const {
  auto it = arity_.find(name);
  if (it == arity_.end()) return std::nullopt;
  return it->second;
}

void UFuncTable::bind_model(const std::string& name, const UFuncModel& model) {
  declare(name, model.arity);
  models_[name] = std::make_shared<const UFuncModel>(model);
}

const UFuncModel* UFuncTable::model(const std::string& name) const {
  auto it = models_.find(name);
  return it == models_.end() ? nullptr : it->second.get();
}

void UFuncTable::declare_from(const Expr& e) {
  for (const auto& [name, arity] : ufunc_symbols(e)) declare(name, arity);
}

ParseError::ParseError(Code code, std::size_t offset, const std::string& message)
    : std::runtime_error("at offset " + std::to_string(offset) + ": " + message),
      code_(code),
      offset_(offset),
      detail_(message) {}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : text_(text), opts_(opts) {}

  Expr run() {
    skip_ws();
    if (pos_ >= text_.size()) fail(pos_, "empty expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& msg,
                         ParseError::Code code = ParseError::Code::Syntax) {
    throw ParseError(code, at, msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(pos_, std::string("expected '") + c + "' before end of input");
      fail(pos_, std::string("expected '") + c + "', found '" + text_[pos_] + "'");
    }
  }

  Expr parse_expr() {
    std::vector<Expr> terms{parse_term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(parse_term());
      } else if (accept('-')) {
        terms.push_back(-parse_term());
      } else {
        break;
      }
    }
    return make_sum(std::move(terms));
  }

  Expr parse_term() {
    Expr acc = parse_factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * parse_factor();
      } else if (peek('/')) {
        ++pos_;
        acc = acc / parse_factor();
      } else {
        break;
      }
    }
    return acc;
  }

  Expr parse_factor() {
    Expr a = parse_atom();
    if (accept('^')) {
      Rational r = parse_exponent();
      return make_power(a, r);
    }
    return a;
  }

  mpz_class parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail(start, "expected integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  Rational parse_exponent() {
    if (accept('(')) {
      bool neg = accept('-');
      mpz_class num = parse_integer();
      mpz_class den = 1;
      if (accept('/')) {
        std::size_t at = pos_;
        den = parse_integer();
        if (den == 0) fail(at, "zero denominator in exponent");
      }
      expect(')');
      Rational r(neg ? mpz_class(-num) : num, den);
      r.canonicalize();
      return r;
    }
    bool neg = accept('-');
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail(pos_, "exponent must be a rational literal");
    mpz_class num = parse_integer();
    return Rational(neg ? mpz_class(-num) : num);
  }

  Rational parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    mpz_class whole(std::string(text_.substr(start, pos_ - start)));
    Rational r(whole);
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (fs == pos_) fail(fs, "expected digits after decimal point");
      mpz_class frac(std::string(text_.substr(fs, pos_ - fs)));
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, pos_ - fs);
      r += Rational(frac, scale);
      r.canonicalize();
    }
    return r;
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail(pos_, "unexpected end of input");
    char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return -parse_factor();
    }
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr(parse_number());
    if (ident_start(c)) return parse_identifier();
    fail(pos_, std::string("unexpected '") + c + "'");
  }

  Expr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));

    // derivative marks
    std::size_t primes = 0;
    std::optional<std::vector<int>> multi;
    std::size_t marks_at = pos_;
    while (pos_ < text_.size() && text_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }
    if (primes == 1 && pos_ < text_.size() && text_[pos_] == '{') {
      ++pos_;
      multi.emplace();
      do {
        mpz_class k = parse_integer();
        if (!k.fits_sint_p()) fail(pos_, "derivative order too large");
        multi->push_back(static_cast<int>(k.get_si()));
      } while (accept(','));
      expect('}');
      primes = 0;
    }
    bool marked = primes > 0 || multi.has_value();

    if (!peek('(')) {
      if (marked) fail(marks_at, "derivative marks require a function call");
      return Expr::variable(std::move(name));
    }
    ++pos_;
    std::vector<Expr> args{parse_expr()};
    while (accept(',')) args.push_back(parse_expr());
    expect(')');

    Primitive prim;
    if (primitive_from_name(name, prim)) {
      if (marked) fail(marks_at, "derivative marks are not allowed on '" + name + "'");
      if (args.size() != 1)
        fail(start, "'" + name + "' takes exactly one argument", ParseError::Code::ArityMismatch);
      return make_call(prim, args.front());
    }

    if (opts_.table) {
      auto known = opts_.table->arity(name);
      if (!known) {
        if (!opts_.declare_on_use)
          fail(start, "unknown function '" + name + "'", ParseError::Code::UnknownFunction);
        opts_.table->declare(name, args.size());
      } else if (*known != args.size()) {
        fail(start,
             "'" + name + "' declared with arity " + std::to_string(*known) + ", called with " +
                 std::to_string(args.size()),
             ParseError::Code::ArityMismatch);
      }
    }

    std::vector<int> orders(args.size(), 0);
    if (multi) {
      if (multi->size() != args.size())
        fail(marks_at, "derivative multi-order has " + std::to_string(multi->size()) +
                           " entries for " + std::to_string(args.size()) + " argument(s)");
      orders = *multi;
    } else if (primes > 0) {
      if (args.size() != 1)
        fail(marks_at, "apostrophe derivatives need a unary function; use name'{...}");
      orders[0] = static_cast<int>(primes);
    }
    return make_ufunc(std::move(name), std::move(orders), std::move(args));
  }

  std::string_view text_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).run();
}

}  // namespace liesynth
