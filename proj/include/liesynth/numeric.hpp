#pragma once

#include "liesynth/admission.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace liesynth {

using State = std::vector<double>;

struct Trajectory {
  std::vector<std::string> variables;
  std::vector<double> t;
  std::vector<State> states;
  double h = 0.0;
  std::string method = "rk4";

  std::size_t size() const { return t.size(); }
  const State& back() const { return states.back(); }
};

/// Integration stopped because the right-hand side could not be evaluated or
/// the state stopped being finite.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// x -> a(x) for one value of the group parameter.
struct FiniteAction {
  std::string name;
  double alpha = 0.0;
  std::function<State(const State&)> map;

  State operator()(const State& x) const { return map(x); }
};

/// Closed-form action of a catalog group (multi-parameter groups move all
/// parameters together). `k` is only used by the stretch group.
FiniteAction catalog_action(std::string_view id, double alpha, std::optional<Rational> k = {});

/// Time-alpha flow of a vector field, by RK4 with `steps` substeps.
FiniteAction flow_action(const VectorField& g, double alpha, const SamplerConfig& cfg = {},
                         const UFuncTable* table = nullptr, int steps = 200);

/// Fixed-step classical Runge-Kutta for a one-column system. The step is
/// adjusted to h' = t_end / round(t_end / h) so the grid ends at t_end.
Trajectory integrate(const SystemSpec& s, const State& x0, double t_end, double h,
                     const SamplerConfig& cfg = {}, const UFuncTable* table = nullptr);

struct OrbitResidual {
  double alpha = 0.0;
  double residual = 0.0;
  /// residual / h^2
  double constant = 0.0;
  /// Grid index of the largest defect.
  std::size_t worst = 0;
};

/// Max over interior grid points of |D(a(x))(t_k) - f(a(x_k))|, with D the
/// centered difference.
OrbitResidual orbit_invariance(const SystemSpec& s, const FiniteAction& a, const Trajectory& traj,
                               const SamplerConfig& cfg = {}, const UFuncTable* table = nullptr);

/// Runs orbit_invariance for each alpha and compares against
/// tol(h) = factor * max(1, C0) * h^2, C0 being the alpha = 0 constant.
Report numcheck(const SystemSpec& s, const std::function<FiniteAction(double)>& action,
                const Trajectory& traj, const std::vector<double>& alphas,
                const SamplerConfig& cfg = {}, const UFuncTable* table = nullptr,
                double factor = 10.0);

/// Comma-separated text: header "t,<vars>", one row per grid point.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace liesynth
