#include "liesynth/fields.hpp"

#include "liesynth/parse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>

namespace liesynth {

VectorField::VectorField(std::vector<std::string> variables, std::vector<Expr> coordinates)
    : vars_(std::move(variables)), coords_(std::move(coordinates)) {
  if (vars_.size() != coords_.size())
    throw FieldError("vector field has " + std::to_string(coords_.size()) +
                     " coordinates for " + std::to_string(vars_.size()) + " variables");
  for (const auto& c : coords_) {
    for (const auto& v : free_variables(c)) {
      if (std::find(vars_.begin(), vars_.end(), v) == vars_.end())
        throw FieldError("coordinate '" + print(c) + "' uses unknown variable '" + v + "'");
    }
  }
}

VectorField VectorField::zero(std::vector<std::string> variables) {
  std::vector<Expr> coords(variables.size(), Expr(0L));
  return VectorField(std::move(variables), std::move(coords));
}

namespace {

void require_same_vars(const VectorField& a, const VectorField& b) {
  if (a.variables() != b.variables()) throw FieldError("vector fields over different variable lists");
}

}  // namespace

VectorField VectorField::operator+(const VectorField& o) const {
  require_same_vars(*this, o);
  std::vector<Expr> c;
  for (std::size_t i = 0; i < coords_.size(); ++i) c.push_back(coords_[i] + o.coords_[i]);
  return VectorField(vars_, std::move(c));
}

VectorField VectorField::operator-(const VectorField& o) const {
  require_same_vars(*this, o);
  std::vector<Expr> c;
  for (std::size_t i = 0; i < coords_.size(); ++i) c.push_back(coords_[i] - o.coords_[i]);
  return VectorField(vars_, std::move(c));
}

VectorField operator*(const Expr& s, const VectorField& v) {
  std::vector<Expr> c;
  for (const auto& x : v.coords_) c.push_back(s * x);
  return VectorField(v.vars_, std::move(c));
}

bool VectorField::structurally_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Expr& e) { return e.is_zero_constant(); });
}

std::string VectorField::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << " + ";
    const Expr& c = coords_[i];
    if (c.kind() == Kind::Sum) {
      os << "(" << print(c) << ")";
    } else {
      os << print(c);
    }
    os << " ∂" << vars_[i];
  }
  return os.str();
}

bool operator==(const VectorField& a, const VectorField& b) {
  return a.vars_ == b.vars_ && a.coords_ == b.coords_;
}

Expr apply(const VectorField& g, const Expr& u) {
  const auto& vars = g.variables();
  for (const auto& v : free_variables(u)) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw FieldError("expression uses variable '" + v + "' outside the field's variable list");
  }
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (g[i].is_zero_constant()) continue;
    Expr d = differentiate(u, vars[i]);
    if (d.is_zero_constant()) continue;
    terms.push_back(g[i] * d);
  }
  return make_sum(std::move(terms));
}

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
  require_same_vars(a, b);
  std::vector<Expr> c;
  c.reserve(a.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i) c.push_back(apply(a, b[i]) - apply(b, a[i]));
  return VectorField(a.variables(), std::move(c));
}

bool is_cylindrical(const VectorField& g, std::size_t k) {
  const auto& vars = g.variables();
  for (const auto& c : g.coordinates()) {
    for (std::size_t i = k; i < vars.size(); ++i) {
      if (depends_on(c, vars[i])) return false;
    }
  }
  return true;
}

RankResult rank_test(const std::vector<VectorField>& fields, const SamplerConfig& cfg,
                     const UFuncTable* table) {
  if (fields.empty()) throw FieldError("rank_test needs at least one field");
  for (const auto& f : fields) require_same_vars(fields.front(), f);
  const std::size_t n = fields.front().dimension();
  std::vector<Expr> flat;
  for (const auto& f : fields) flat.insert(flat.end(), f.coordinates().begin(), f.coordinates().end());

  SampleTable tab = sample_values(flat, fields.front().variables(), cfg, table, /*salt=*/17);
  RankResult out;
  out.admissible = static_cast<int>(tab.points.size());
  for (const auto& row : tab.values) {
    std::vector<std::vector<double>> m(fields.size(), std::vector<double>(n));
    for (std::size_t f = 0; f < fields.size(); ++f) {
      for (std::size_t i = 0; i < n; ++i) m[f][i] = row[f * n + i];
    }
    out.generic_rank = std::max(out.generic_rank, numerical_rank(m));
  }
  out.inconclusive = 2 * out.admissible < cfg.samples;
  out.not_bound = !out.inconclusive && out.generic_rank == static_cast<int>(fields.size());
  return out;
}

FieldZeroVerdict field_is_zero(const VectorField& v, const SamplerConfig& cfg,
                               const UFuncTable* table) {
  FieldZeroVerdict out;
  for (std::size_t i = 0; i < v.dimension(); ++i) {
    ZeroVerdict z = is_zero(v[i], cfg, table);
    if (z.kind == ZeroVerdict::Kind::NonZero) {
      out.zero = false;
      out.structural = false;
      out.coordinate = i;
      out.detail = std::move(z);
      return out;
    }
    if (z.kind == ZeroVerdict::Kind::Inconclusive && !out.inconclusive) {
      out.inconclusive = true;
      out.coordinate = i;
      out.detail = z;
    }
    if (z.kind != ZeroVerdict::Kind::ZeroStructural) out.structural = false;
    if (!out.inconclusive && z.kind == ZeroVerdict::Kind::ZeroProbable) out.detail = z;
  }
  if (out.inconclusive) out.zero = false;
  return out;
}

namespace {

// Laplace expansion along successive columns, memoized on the set of rows
// still available. cols[j][r] is the entry in row r, column j.
Expr determinant(const std::vector<std::vector<Expr>>& cols) {
  const std::size_t n = cols.size();
  std::map<std::uint64_t, Expr> memo;
  std::function<Expr(std::size_t, std::uint64_t)> minor = [&](std::size_t j, std::uint64_t rows) -> Expr {
    if (j == n) return Expr(1L);
    auto it = memo.find(rows);
    if (it != memo.end()) return it->second;
    std::vector<Expr> terms;
    int sign = 1;
    for (std::size_t r = 0; r < n; ++r) {
      if (!(rows & (std::uint64_t{1} << r))) continue;
      if (!cols[j][r].is_zero_constant()) {
        Expr t = cols[j][r] * minor(j + 1, rows & ~(std::uint64_t{1} << r));
        terms.push_back(sign > 0 ? t : -t);
      }
      sign = -sign;
    }
    Expr d = make_sum(std::move(terms));
    memo.emplace(rows, d);
    return d;
  };
  return minor(0, (std::uint64_t{1} << n) - 1);
}

}  // namespace

std::vector<Expr> frame_expand(const VectorField& f, const std::vector<VectorField>& basis,
                               const SamplerConfig& cfg, const UFuncTable* table) {
  const std::size_t n = f.dimension();
  if (basis.size() != n)
    throw SingularFrame("frame has " + std::to_string(basis.size()) + " fields in dimension " +
                        std::to_string(n));
  for (const auto& b : basis) require_same_vars(f, b);
  if (n > 24) throw FieldError("frame expansion supports at most 24 coordinates");
  RankResult rank = rank_test(basis, cfg, table);
  if (rank.inconclusive) throw SingularFrame("frame rank inconclusive: too few admissible points");
  if (!rank.not_bound)
    throw SingularFrame("frame has generic rank " + std::to_string(rank.generic_rank) + " < " +
                        std::to_string(n));

  // Cramer's rule: psi_i = det(A with column i replaced by F) / det(A), where
  // column i of A is basis i. Each coefficient stays a single quotient.
  std::vector<std::vector<Expr>> cols(n);
  for (std::size_t i = 0; i < n; ++i) cols[i] = basis[i].coordinates();

  const Expr den = determinant(cols);
  if (den.is_zero_constant() || is_zero(den, cfg, table).zero())
    throw SingularFrame("frame determinant vanishes identically");

  std::vector<Expr> psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<Expr>> ci = cols;
    ci[i] = f.coordinates();
    psi[i] = determinant(ci) / den;
  }

  VectorField recon = VectorField::zero(f.variables());
  for (std::size_t i = 0; i < n; ++i) recon = recon + psi[i] * basis[i];
  FieldZeroVerdict check = field_is_zero(recon - f, cfg, table);
  if (!check.zero)
    throw FieldError("frame expansion failed to verify on coordinate " +
                     std::to_string(check.coordinate));
  return psi;
}

FrameExpansion frame_expand_all(const std::vector<VectorField>& fs,
                                const std::vector<VectorField>& basis, const SamplerConfig& cfg,
                                const UFuncTable* table) {
  FrameExpansion out;
  out.basis = basis;
  for (const auto& f : fs) out.coefficients.push_back(frame_expand(f, basis, cfg, table));
  return out;
}

}  // namespace liesynth
