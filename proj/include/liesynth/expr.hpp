#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace liesynth {

using Rational = mpq_class;

/// Node kinds. The declaration order is the canonical kind rank.
enum class Kind : std::uint8_t { Constant, Variable, Power, Primitive, UFunc, Sum, Product };

enum class Primitive : std::uint8_t { Exp, Log, Sin, Cos, Sinh, Cosh };

std::string_view primitive_name(Primitive p);
bool primitive_from_name(std::string_view name, Primitive& out);

struct Node;

/// Immutable symbolic expression handle.
///
/// Trees built through the arithmetic operators and the `make_*` functions are
/// always in canonical simplified form. The `raw_*` builders skip
/// normalization; `simplify` brings such trees back to canonical form.
class Expr {
 public:
  Expr();  // the constant 0
  Expr(long v);
  Expr(const Rational& v);

  static Expr variable(std::string name);

  Kind kind() const;
  std::size_t hash() const;

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_zero_constant() const;
  bool is_one_constant() const;

  // Accessors; valid only for the matching kind.
  const Rational& value() const;            // Constant
  const std::string& name() const;          // Variable, UFunc
  const Rational& exponent() const;         // Power
  Primitive primitive() const;              // Primitive
  const std::vector<int>& orders() const;   // UFunc derivative multi-order
  const std::vector<Expr>& operands() const;  // Sum, Product, UFunc args
  const Expr& base() const;                 // Power
  const Expr& argument() const;             // Primitive

  const Node* node() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend Expr make_node(Node&& n);
};

struct Node {
  Kind kind = Kind::Constant;
  std::size_t hash = 0;
  Rational number;  // constant value or power exponent
  std::string name;
  Primitive fn = Primitive::Exp;
  std::vector<int> orders;
  std::vector<Expr> children;
};

/// Total canonical order: kind rank, then payload, then children lexicographically.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Canonicalizing constructors.
Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_power(const Expr& base, const Rational& exponent);
Expr make_call(Primitive fn, const Expr& arg);
Expr make_ufunc(std::string name, std::vector<int> orders, std::vector<Expr> args);
Expr make_ufunc(std::string name, std::vector<Expr> args);

// Non-normalizing constructors for building arbitrary trees.
Expr raw_sum(std::vector<Expr> terms);
Expr raw_product(std::vector<Expr> factors);
Expr raw_power(const Expr& base, const Rational& exponent);
Expr raw_call(Primitive fn, const Expr& arg);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);

/// Rebuild `e` bottom-up through the canonicalizing constructors. Idempotent.
Expr simplify(const Expr& e);

/// Exact partial derivative with respect to the variable `var`.
Expr differentiate(const Expr& e, std::string_view var);

using Bindings = std::map<std::string, Expr>;

/// Simultaneous substitution of variables, then simplification.
Expr substitute(const Expr& e, const Bindings& bindings);

/// Replace every call of ufunc `name` (and its derivatives) by `body`, where
/// `params[i]` names the variable standing for argument i. Derivative calls
/// are replaced by the matching partial derivative of `body`.
Expr substitute_ufunc(const Expr& e, std::string_view name,
                      const std::vector<std::string>& params, const Expr& body);

std::set<std::string> free_variables(const Expr& e);
bool depends_on(const Expr& e, std::string_view var);

/// Map ufunc symbol -> arity for every ufunc appearing in `e`.
std::map<std::string, std::size_t> ufunc_symbols(const Expr& e);

/// Number of nodes in the tree.
std::size_t tree_size(const Expr& e);

std::string to_string(const Rational& r);
std::string print(const Expr& e);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace liesynth
