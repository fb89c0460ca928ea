#pragma once

#include "liesynth/expr.hpp"
#include "liesynth/fields.hpp"

#include <random>
#include <string>
#include <vector>

namespace ts {

using namespace liesynth;

/// Random expression trees built without normalization.
class TreeGen {
 public:
  explicit TreeGen(std::uint64_t seed, std::vector<std::string> vars = {"x", "y", "z"})
      : rng_(seed), vars_(std::move(vars)) {}

  Expr leaf() {
    switch (pick(4)) {
      case 0: {
        long num = static_cast<long>(pick(9)) - 4;
        long den = static_cast<long>(pick(3)) + 1;
        return Expr(Rational(num, den));
      }
      default:
        return Expr::variable(vars_[pick(vars_.size())]);
    }
  }

  Expr tree(int depth) {
    if (depth <= 0 || pick(5) == 0) return leaf();
    switch (pick(8)) {
      case 0:
      case 1: return raw_sum({tree(depth - 1), tree(depth - 1)});
      case 2:
      case 3: return raw_product({tree(depth - 1), tree(depth - 1)});
      case 4: {
        static const Rational exps[] = {Rational(2), Rational(-1), Rational(3), Rational(1, 3),
                                        Rational(-2)};
        return raw_power(tree(depth - 1), exps[pick(5)]);
      }
      case 5: {
        static const Primitive prims[] = {Primitive::Exp, Primitive::Sin, Primitive::Cos,
                                          Primitive::Sinh, Primitive::Cosh, Primitive::Log};
        return raw_call(prims[pick(6)], tree(depth - 1));
      }
      case 6: {
        std::vector<int> orders{static_cast<int>(pick(3))};
        return make_ufunc("f", orders, {tree(depth - 1)});
      }
      default: {
        std::vector<int> orders{static_cast<int>(pick(2)), static_cast<int>(pick(2))};
        return make_ufunc("g", orders, {tree(depth - 1), tree(depth - 1)});
      }
    }
  }

  /// Random polynomial of total degree <= deg in the generator's variables.
  Expr polynomial(int deg, int terms = 4) {
    std::vector<Expr> out;
    for (int t = 0; t < terms; ++t) {
      std::vector<Expr> f{Expr(Rational(static_cast<long>(pick(7)) - 3, static_cast<long>(pick(2)) + 1))};
      int d = static_cast<int>(pick(static_cast<std::size_t>(deg) + 1));
      for (int i = 0; i < d; ++i) f.push_back(Expr::variable(vars_[pick(vars_.size())]));
      out.push_back(make_product(f));
    }
    return make_sum(out);
  }

  VectorField polynomial_field(int deg) {
    std::vector<Expr> c;
    for (std::size_t i = 0; i < vars_.size(); ++i) c.push_back(polynomial(deg));
    return VectorField(vars_, c);
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

}  // namespace ts
