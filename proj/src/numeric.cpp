#include "liesynth/numeric.hpp"

#include "liesynth/synth.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace liesynth {

namespace {

class Rhs {
 public:
  Rhs(std::vector<std::string> vars, std::vector<Expr> f, const SamplerConfig& cfg,
      const UFuncTable* table)
      : vars_(std::move(vars)), f_(std::move(f)), ev_(cfg, table) {}

  State operator()(const State& x) const {
    Point p;
    for (std::size_t i = 0; i < vars_.size(); ++i) p[vars_[i]] = x[i];
    State out(f_.size());
    for (std::size_t i = 0; i < f_.size(); ++i) out[i] = ev_(f_[i], p);
    return out;
  }

 private:
  std::vector<std::string> vars_;
  std::vector<Expr> f_;
  Evaluator ev_;
};

Rhs system_rhs(const SystemSpec& s, const SamplerConfig& cfg, const UFuncTable* table) {
  if (s.m() != 1)
    throw SpecError("numerical integration needs a single-column system (m = 1), got m = " +
                    std::to_string(s.m()));
  std::vector<Expr> f;
  for (const auto& row : s.f) f.push_back(row.front());
  return Rhs(s.variables, std::move(f), cfg, table);
}

State axpy(const State& x, double a, const State& k) {
  State out(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * k[i];
  return out;
}

template <class F>
State rk4_step(const F& f, const State& x, double h) {
  State k1 = f(x);
  State k2 = f(axpy(x, h / 2, k1));
  State k3 = f(axpy(x, h / 2, k2));
  State k4 = f(axpy(x, h, k3));
  State out(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

bool finite(const State& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void need_dim(const State& x, std::size_t n, std::string_view id) {
  if (x.size() != n)
    throw SpecError("action '" + std::string(id) + "' acts on " + std::to_string(n) +
                    "-vectors, got " + std::to_string(x.size()));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

FiniteAction catalog_action(std::string_view id, double a, std::optional<Rational> k) {
  CatalogEntry e = catalog_get(id, k);  // validates id and k
  FiniteAction out;
  out.name = e.id;
  out.alpha = a;
  const std::string base = e.id.substr(0, e.id.find('('));
  if (base == "scalings") {
    out.map = [a](const State& x) {
      need_dim(x, 3, "scalings");
      return State{x[0] * std::exp(a), x[1] * std::exp(a), x[2]};
    };
  } else if (base == "dilatation") {
    out.map = [a](const State& x) {
      need_dim(x, 2, "dilatation");
      return State{x[0] * std::exp(a), x[1] * std::exp(a)};
    };
  } else if (base == "rotation") {
    out.map = [a](const State& x) {
      need_dim(x, 2, "rotation");
      return State{x[0] * std::cos(a) - x[1] * std::sin(a), x[0] * std::sin(a) + x[1] * std::cos(a)};
    };
  } else if (base == "lorentz") {
    out.map = [a](const State& x) {
      need_dim(x, 2, "lorentz");
      return State{x[0] * std::cosh(a) + x[1] * std::sinh(a),
                   x[0] * std::sinh(a) + x[1] * std::cosh(a)};
    };
  } else if (base == "projective") {
    out.map = [a](const State& x) {
      need_dim(x, 2, "projective");
      const double d = 1 - a * x[0];
      return State{x[0] / d, x[1] / d};
    };
  } else if (base == "stretch") {
    const double kk = differentiate(e.group.operators.front()[1], "y").value().get_d();
    out.map = [a, kk](const State& x) {
      need_dim(x, 2, "stretch");
      return State{x[0] * std::exp(a), x[1] * std::exp(kk * a)};
    };
  } else {
    out.map = [a](const State& x) {
      need_dim(x, 2, "galilean");
      return State{x[0] + a * x[1], x[1]};
    };
  }
  return out;
}

FiniteAction flow_action(const VectorField& g, double alpha, const SamplerConfig& cfg,
                         const UFuncTable* table, int steps) {
  if (steps < 1) throw std::invalid_argument("flow_action needs at least one step");
  auto rhs = std::make_shared<Rhs>(g.variables(), g.coordinates(), cfg, table);
  FiniteAction out;
  out.name = "flow of " + g.to_string();
  out.alpha = alpha;
  out.map = [rhs, alpha, steps](const State& x0) {
    State x = x0;
    const double h = alpha / steps;
    if (alpha == 0.0) return x;
    for (int i = 0; i < steps; ++i) x = rk4_step(*rhs, x, h);
    return x;
  };
  return out;
}

Trajectory integrate(const SystemSpec& s, const State& x0, double t_end, double h,
                     const SamplerConfig& cfg, const UFuncTable* table) {
  if (!(h > 0)) throw std::invalid_argument("step size must be positive");
  if (!(t_end > 0)) throw std::invalid_argument("end time must be positive");
  if (x0.size() != s.n())
    throw SpecError("initial state has " + std::to_string(x0.size()) + " entries, expected " +
                    std::to_string(s.n()));
  Rhs f = system_rhs(s, cfg, table);
  const long steps = std::max(1L, std::lround(t_end / h));
  Trajectory tr;
  tr.variables = s.variables;
  tr.h = t_end / static_cast<double>(steps);
  tr.t.reserve(static_cast<std::size_t>(steps) + 1);
  tr.states.reserve(static_cast<std::size_t>(steps) + 1);
  tr.t.push_back(0.0);
  tr.states.push_back(x0);
  for (long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * tr.h;
    State next;
    try {
      next = rk4_step(f, tr.states.back(), tr.h);
    } catch (const DomainError& e) {
      throw IntegrationError(std::string("right-hand side undefined near t = ") + std::to_string(t) +
                                 ": " + e.what(),
                             t);
    }
    if (!finite(next))
      throw IntegrationError("solution blew up near t = " + std::to_string(t), t);
    tr.t.push_back(static_cast<double>(i + 1) * tr.h);
    tr.states.push_back(std::move(next));
  }
  return tr;
}

OrbitResidual orbit_invariance(const SystemSpec& s, const FiniteAction& a, const Trajectory& traj,
                               const SamplerConfig& cfg, const UFuncTable* table) {
  Rhs f = system_rhs(s, cfg, table);
  OrbitResidual out;
  out.alpha = a.alpha;
  if (traj.size() < 3) return out;
  std::vector<State> y;
  y.reserve(traj.size());
  for (const auto& x : traj.states) y.push_back(a(x));
  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    const double dt = traj.t[k + 1] - traj.t[k - 1];
    double defect = 0.0;
    try {
      State fy = f(y[k]);
      for (std::size_t i = 0; i < fy.size(); ++i) {
        double d = (y[k + 1][i] - y[k - 1][i]) / dt - fy[i];
        defect = std::max(defect, std::isfinite(d) ? std::abs(d) : HUGE_VAL);
      }
    } catch (const DomainError&) {
      defect = HUGE_VAL;
    }
    if (k == 1 || defect > out.residual) {
      out.residual = defect;
      out.worst = k;
    }
  }
  out.constant = out.residual / (traj.h * traj.h);
  return out;
}

Report numcheck(const SystemSpec& s, const std::function<FiniteAction(double)>& action,
                const Trajectory& traj, const std::vector<double>& alphas, const SamplerConfig& cfg,
                const UFuncTable* table, double factor) {
  Report rep = Report::node("orbit invariance");
  ReportTimer timer(rep);
  OrbitResidual self = orbit_invariance(s, action(0.0), traj, cfg, table);
  const double tol = factor * std::max(1.0, self.constant) * traj.h * traj.h;
  rep.detail = "h = " + fmt(traj.h) + ", self-residual " + fmt(self.residual) + " (C0 = " +
               fmt(self.constant) + "), tol(h) = " + fmt(tol);
  for (double a : alphas) {
    OrbitResidual r = orbit_invariance(s, action(a), traj, cfg, table);
    std::ostringstream name;
    name << "alpha = " << a;
    std::string detail = "residual " + fmt(r.residual) + ", C = " + fmt(r.constant);
    Verdict v = !std::isfinite(r.residual) ? Verdict::Inconclusive
                : r.residual <= tol        ? Verdict::Pass
                                           : Verdict::Fail;
    if (v == Verdict::Inconclusive) detail += " (transformed trajectory left the domain)";
    Report leaf = Report::leaf(name.str(), v, detail);
    if (v == Verdict::Fail) {
      Point p;
      for (std::size_t i = 0; i < traj.variables.size(); ++i)
        p[traj.variables[i]] = traj.states[r.worst][i];
      p["t"] = traj.t[r.worst];
      leaf.witness = Witness{p, r.residual};
    }
    rep.add(std::move(leaf));
  }
  return rep;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t";
  for (const auto& v : traj.variables) os << ',' << v;
  os << '\n';
  os.precision(17);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << traj.t[k];
    for (double v : traj.states[k]) os << ',' << v;
    os << '\n';
  }
}

}  // namespace liesynth
