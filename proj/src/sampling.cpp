#include "liesynth/sampling.hpp"

#include "liesynth/parse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace liesynth {

void SamplerConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!(eps_abs > 0) || !(eps_rel > 0)) throw std::invalid_argument("tolerances must be > 0");
  if (!(box_hi > box_lo)) throw std::invalid_argument("empty sampling box");
  if (!(exclusion > 0)) throw std::invalid_argument("hyperplane exclusion must be > 0");
  if (std::max(std::abs(box_lo), std::abs(box_hi)) <= exclusion)
    throw std::invalid_argument("sampling box lies inside the excluded band");
  if (max_resample < 1) throw std::invalid_argument("max_resample must be >= 1");
}

std::uint64_t stable_hash(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

// ---------------------------------------------------------------------------
// UFuncModel

UFuncModel UFuncModel::seeded(std::uint64_t seed, const std::string& name, std::size_t arity) {
  std::mt19937_64 rng(stable_hash(name, seed * 31 + arity));
  UFuncModel m;
  m.arity = arity;
  std::vector<int> powers(arity, 0);
  // enumerate monomials of total degree <= 3
  std::function<void(std::size_t, int)> walk = [&](std::size_t i, int left) {
    if (i == arity) {
      m.terms.push_back({powers, 2.0 * unit_uniform(rng) - 1.0});
      return;
    }
    for (int p = 0; p <= left; ++p) {
      powers[i] = p;
      walk(i + 1, left - p);
    }
    powers[i] = 0;
  };
  walk(0, 3);
  return m;
}

UFuncModel UFuncModel::polynomial(std::size_t arity, std::vector<Term> terms) {
  for (const auto& t : terms) {
    if (t.powers.size() != arity)
      throw std::invalid_argument("model monomial has wrong number of exponents");
  }
  UFuncModel m;
  m.arity = arity;
  m.terms = std::move(terms);
  return m;
}

double UFuncModel::evaluate(const std::vector<double>& args, const std::vector<int>& orders) const {
  double total = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (std::size_t i = 0; i < arity && v != 0.0; ++i) {
      int p = t.powers[i];
      int o = orders[i];
      if (o > p) {
        v = 0.0;
        break;
      }
      for (int k = 0; k < o; ++k) v *= static_cast<double>(p - k);
      v *= std::pow(args[i], p - o);
    }
    total += v;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Evaluator

Evaluator::Evaluator(const SamplerConfig& cfg, const UFuncTable* table) : cfg_(cfg), table_(table) {}

const UFuncModel& Evaluator::model_for(const std::string& name, std::size_t arity) const {
  if (table_) {
    if (const UFuncModel* m = table_->model(name)) {
      if (m->arity != arity)
        throw std::invalid_argument("model for '" + name + "' has arity " +
                                    std::to_string(m->arity));
      return *m;
    }
  }
  auto it = cache_.find(name);
  if (it == cache_.end() || it->second.arity != arity) {
    it = cache_.insert_or_assign(name, UFuncModel::seeded(cfg_.seed, name, arity)).first;
  }
  return it->second;
}

double Evaluator::operator()(const Expr& e, const Point& p) const {
  double scale = 0.0;
  return evaluate(e, p, scale);
}

double Evaluator::evaluate(const Expr& e, const Point& p, double& scale) const {
  double v = eval(e, p, scale);
  scale = std::max(scale, std::abs(v));
  return v;
}

double Evaluator::eval(const Expr& e, const Point& p, double& scale) const {
  double v = 0.0;
  switch (e.kind()) {
    case Kind::Constant:
      v = e.value().get_d();
      break;
    case Kind::Variable: {
      auto it = p.find(e.name());
      if (it == p.end()) throw std::invalid_argument("unbound variable '" + e.name() + "'");
      v = it->second;
      break;
    }
    case Kind::Sum:
      for (const auto& t : e.operands()) {
        double tv = eval(t, p, scale);
        scale = std::max(scale, std::abs(tv));
        v += tv;
      }
      break;
    case Kind::Product:
      v = 1.0;
      for (const auto& f : e.operands()) v *= eval(f, p, scale);
      break;
    case Kind::Power: {
      double b = eval(e.base(), p, scale);
      const Rational& r = e.exponent();
      if (r.get_den() == 1) {
        if (sgn(r) < 0 && std::abs(b) < 1e-12) throw DomainError("division by ~0");
        v = std::pow(b, r.get_d());
      } else {
        if (b < 0.0) {
          if (r.get_den() % 2 == 0) throw DomainError("even root of a negative number");
          double mag = std::pow(-b, r.get_d());
          v = (r.get_num() % 2 == 0) ? mag : -mag;
        } else {
          if (sgn(r) < 0 && b < 1e-12) throw DomainError("division by ~0");
          v = std::pow(b, r.get_d());
        }
      }
      break;
    }
    case Kind::Primitive: {
      double a = eval(e.argument(), p, scale);
      switch (e.primitive()) {
        case Primitive::Exp: v = std::exp(a); break;
        case Primitive::Log:
          if (a <= 0.0) throw DomainError("log of a non-positive number");
          v = std::log(a);
          break;
        case Primitive::Sin: v = std::sin(a); break;
        case Primitive::Cos: v = std::cos(a); break;
        case Primitive::Sinh: v = std::sinh(a); break;
        case Primitive::Cosh: v = std::cosh(a); break;
      }
      break;
    }
    case Kind::UFunc: {
      std::vector<double> args;
      args.reserve(e.operands().size());
      for (const auto& a : e.operands()) args.push_back(eval(a, p, scale));
      v = model_for(e.name(), args.size()).evaluate(args, e.orders());
      break;
    }
  }
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  return v;
}

double eval(const Expr& e, const Point& point, const SamplerConfig& cfg, const UFuncTable* table) {
  return Evaluator(cfg, table)(e, point);
}

// ---------------------------------------------------------------------------
// Sampling

PointSampler::PointSampler(const SamplerConfig& cfg, std::vector<std::string> vars,
                           std::uint64_t salt)
    : cfg_(cfg), vars_(std::move(vars)) {
  std::uint64_t s = stable_hash("points", cfg.seed ^ (salt * 0x2545F4914F6CDD1DULL));
  for (const auto& v : vars_) s = stable_hash(v, s);
  rng_.seed(s);
}

double PointSampler::draw() {
  for (;;) {
    double x = cfg_.box_lo + (cfg_.box_hi - cfg_.box_lo) * unit_uniform(rng_);
    if (std::abs(x) >= cfg_.exclusion) return x;
  }
}

Point PointSampler::next() {
  Point p;
  for (const auto& v : vars_) p[v] = draw();
  return p;
}

SampleTable sample_values(const std::vector<Expr>& exprs, const std::vector<std::string>& vars,
                          const SamplerConfig& cfg, const UFuncTable* table, std::uint64_t salt) {
  Evaluator ev(cfg, table);
  PointSampler sampler(cfg, vars, salt);
  SampleTable out;
  for (int i = 0; i < cfg.samples; ++i) {
    for (int attempt = 0; attempt < cfg.max_resample; ++attempt) {
      ++out.attempts;
      Point p = sampler.next();
      try {
        std::vector<double> row;
        row.reserve(exprs.size());
        for (const auto& e : exprs) row.push_back(ev(e, p));
        out.points.push_back(std::move(p));
        out.values.push_back(std::move(row));
        break;
      } catch (const DomainError&) {
      }
    }
  }
  return out;
}

std::string to_string(ZeroVerdict::Kind k) {
  switch (k) {
    case ZeroVerdict::Kind::ZeroStructural: return "zero-structural";
    case ZeroVerdict::Kind::ZeroProbable: return "zero-probable";
    case ZeroVerdict::Kind::NonZero: return "nonzero";
    case ZeroVerdict::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

ZeroVerdict is_zero(const Expr& e, const SamplerConfig& cfg, const UFuncTable* table) {
  ZeroVerdict out;
  Expr s = simplify(e);
  if (s.is_zero_constant()) {
    out.kind = ZeroVerdict::Kind::ZeroStructural;
    return out;
  }
  auto vs = free_variables(s);
  std::vector<std::string> vars(vs.begin(), vs.end());
  Evaluator ev(cfg, table);
  PointSampler sampler(cfg, vars);
  for (int i = 0; i < cfg.samples; ++i) {
    for (int attempt = 0; attempt < cfg.max_resample; ++attempt) {
      Point p = sampler.next();
      double scale = 0.0;
      double v;
      try {
        v = ev.evaluate(s, p, scale);
      } catch (const DomainError&) {
        continue;
      }
      ++out.admissible;
      if (std::abs(v) > cfg.eps_abs + cfg.eps_rel * scale) {
        out.kind = ZeroVerdict::Kind::NonZero;
        out.witness = std::move(p);
        out.value = v;
        out.scale = scale;
        return out;
      }
      out.scale = std::max(out.scale, scale);
      break;
    }
  }
  out.kind = 2 * out.admissible < cfg.samples ? ZeroVerdict::Kind::Inconclusive
                                              : ZeroVerdict::Kind::ZeroProbable;
  return out;
}

int numerical_rank(const std::vector<std::vector<double>>& rows, double rel_cutoff) {
  if (rows.empty() || rows.front().empty()) return 0;
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_cutoff * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace liesynth
