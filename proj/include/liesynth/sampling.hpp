#pragma once

#include "liesynth/expr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace liesynth {

class UFuncTable;

/// Sampling policy shared by every numerical check.
struct SamplerConfig {
  int samples = 32;
  double box_lo = -2.0;
  double box_hi = 2.0;
  /// Points with |x| < exclusion in any coordinate are rejected.
  double exclusion = 0.125;
  double eps_abs = 1e-9;
  double eps_rel = 1e-9;
  std::uint64_t seed = 0;
  int max_resample = 16;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

using Point = std::map<std::string, double>;

/// Numeric stand-in for an uninterpreted function: a polynomial in the
/// arguments, differentiated exactly for derivative calls.
struct UFuncModel {
  struct Term {
    std::vector<int> powers;
    double coeff = 0.0;
  };
  std::size_t arity = 1;
  std::vector<Term> terms;

  /// Random polynomial of total degree <= 3, coefficients uniform in [-1, 1],
  /// fully determined by (seed, name, arity).
  static UFuncModel seeded(std::uint64_t seed, const std::string& name, std::size_t arity);
  /// Model from explicit monomials, e.g. {{{3}, 1.0}} for s^3.
  static UFuncModel polynomial(std::size_t arity, std::vector<Term> terms);

  double evaluate(const std::vector<double>& args, const std::vector<int>& orders) const;
};

/// Raised when an expression cannot be evaluated at a point (log of a
/// non-positive number, division by ~0, fractional power of a negative).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates expressions with one consistent set of ufunc models.
class Evaluator {
 public:
  explicit Evaluator(const SamplerConfig& cfg, const UFuncTable* table = nullptr);

  double operator()(const Expr& e, const Point& p) const;
  /// Also reports the largest magnitude among all sum operands seen, which is
  /// the cancellation scale used by zero tests.
  double evaluate(const Expr& e, const Point& p, double& scale) const;

 private:
  double eval(const Expr& e, const Point& p, double& scale) const;
  const UFuncModel& model_for(const std::string& name, std::size_t arity) const;

  SamplerConfig cfg_;
  const UFuncTable* table_;
  mutable std::map<std::string, UFuncModel> cache_;
};

double eval(const Expr& e, const Point& point, const SamplerConfig& cfg,
            const UFuncTable* table = nullptr);

/// Deterministic stream of admissible sample points for a variable set.
class PointSampler {
 public:
  PointSampler(const SamplerConfig& cfg, std::vector<std::string> vars, std::uint64_t salt = 0);
  Point next();
  const std::vector<std::string>& variables() const { return vars_; }

 private:
  double draw();
  SamplerConfig cfg_;
  std::vector<std::string> vars_;
  std::mt19937_64 rng_;
};

/// Evaluates each sample point `cfg.samples` times, resampling on domain
/// errors. Returns the admissible points with the values of every expression.
struct SampleTable {
  std::vector<Point> points;
  std::vector<std::vector<double>> values;  // values[point][expr]
  int attempts = 0;
};
SampleTable sample_values(const std::vector<Expr>& exprs, const std::vector<std::string>& vars,
                          const SamplerConfig& cfg, const UFuncTable* table = nullptr,
                          std::uint64_t salt = 0);

struct ZeroVerdict {
  enum class Kind { ZeroStructural, ZeroProbable, NonZero, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Point witness;
  double value = 0.0;
  double scale = 0.0;
  int admissible = 0;

  bool zero() const { return kind == Kind::ZeroStructural || kind == Kind::ZeroProbable; }
};

std::string to_string(ZeroVerdict::Kind k);

/// Structural simplification followed by randomized evaluation.
ZeroVerdict is_zero(const Expr& e, const SamplerConfig& cfg, const UFuncTable* table = nullptr);

/// Numerical rank of a matrix with singular values above `rel_cutoff * largest`.
int numerical_rank(const std::vector<std::vector<double>>& rows, double rel_cutoff = 1e-8);

/// FNV-1a hash, stable across platforms; used to derive per-symbol seeds.
std::uint64_t stable_hash(const std::string& s, std::uint64_t seed = 0);

}  // namespace liesynth
