#include "liesynth/expr.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>

namespace liesynth {

namespace {

// Upper bound on the number of terms produced when distributing a product
// over sums; larger products are left unexpanded.
constexpr std::size_t kExpansionLimit = 512;

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_rational(const Rational& r) {
  std::size_t h = std::hash<std::string>{}(r.get_str());
  return h;
}

std::size_t compute_hash(const Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911u;
  switch (n.kind) {
    case Kind::Constant:
      h = mix(h, hash_rational(n.number));
      break;
    case Kind::Variable:
      h = mix(h, std::hash<std::string>{}(n.name));
      break;
    case Kind::Power:
      h = mix(h, hash_rational(n.number));
      break;
    case Kind::Primitive:
      h = mix(h, static_cast<std::size_t>(n.fn));
      break;
    case Kind::UFunc:
      h = mix(h, std::hash<std::string>{}(n.name));
      for (int o : n.orders) h = mix(h, static_cast<std::size_t>(o));
      break;
    case Kind::Sum:
    case Kind::Product:
      break;
  }
  for (const auto& c : n.children) h = mix(h, c.hash());
  return h;
}

const Expr& zero() {
  static const Expr z{0L};
  return z;
}

const Expr& one() {
  static const Expr o{1L};
  return o;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Rational rational_pow(const Rational& base, long k) {
  mpz_class num = base.get_num();
  mpz_class den = base.get_den();
  if (k < 0) {
    std::swap(num, den);
    k = -k;
  }
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(d.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(k));
  Rational out(n, d);
  out.canonicalize();
  return out;
}

int cmp_rational(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

Expr make_node(Node&& n) {
  n.hash = compute_hash(n);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

// ---------------------------------------------------------------------------
// Expr basics

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(long v) : Expr(Rational(v)) {}

Expr::Expr(const Rational& v) {
  Node n;
  n.kind = Kind::Constant;
  n.number = v;
  n.number.canonicalize();
  n.hash = compute_hash(n);
  node_ = std::make_shared<const Node>(std::move(n));
}

Expr Expr::variable(std::string name) {
  Node n;
  n.kind = Kind::Variable;
  n.name = std::move(name);
  return make_node(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::is_zero_constant() const { return kind() == Kind::Constant && sgn(node_->number) == 0; }
bool Expr::is_one_constant() const { return kind() == Kind::Constant && node_->number == 1; }

const Rational& Expr::value() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }
const Rational& Expr::exponent() const { return node_->number; }
Primitive Expr::primitive() const { return node_->fn; }
const std::vector<int>& Expr::orders() const { return node_->orders; }
const std::vector<Expr>& Expr::operands() const { return node_->children; }
const Expr& Expr::base() const { return node_->children.front(); }
const Expr& Expr::argument() const { return node_->children.front(); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

std::string_view primitive_name(Primitive p) {
  switch (p) {
    case Primitive::Exp: return "exp";
    case Primitive::Log: return "log";
    case Primitive::Sin: return "sin";
    case Primitive::Cos: return "cos";
    case Primitive::Sinh: return "sinh";
    case Primitive::Cosh: return "cosh";
  }
  return "?";
}

bool primitive_from_name(std::string_view name, Primitive& out) {
  static constexpr std::pair<std::string_view, Primitive> table[] = {
      {"exp", Primitive::Exp},   {"log", Primitive::Log},   {"sin", Primitive::Sin},
      {"cos", Primitive::Cos},   {"sinh", Primitive::Sinh}, {"cosh", Primitive::Cosh}};
  for (const auto& [n, p] : table) {
    if (n == name) {
      out = p;
      return true;
    }
  }
  return false;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant:
      return cmp_rational(a.value(), b.value());
    case Kind::Variable: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Power: {
      int c = compare(a.base(), b.base());
      if (c != 0) return c;
      return cmp_rational(a.exponent(), b.exponent());
    }
    case Kind::Primitive:
      if (a.primitive() != b.primitive()) return a.primitive() < b.primitive() ? -1 : 1;
      return compare(a.argument(), b.argument());
    case Kind::UFunc: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      if (a.orders() != b.orders()) return a.orders() < b.orders() ? -1 : 1;
      break;
    }
    case Kind::Sum:
    case Kind::Product:
      break;
  }
  const auto& x = a.operands();
  const auto& y = b.operands();
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(x[i], y[i]);
    if (c != 0) return c;
  }
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Raw builders

Expr raw_sum(std::vector<Expr> terms) {
  Node n;
  n.kind = Kind::Sum;
  n.children = std::move(terms);
  return make_node(std::move(n));
}

Expr raw_product(std::vector<Expr> factors) {
  Node n;
  n.kind = Kind::Product;
  n.children = std::move(factors);
  return make_node(std::move(n));
}

Expr raw_power(const Expr& base, const Rational& exponent) {
  Node n;
  n.kind = Kind::Power;
  n.number = exponent;
  n.number.canonicalize();
  n.children = {base};
  return make_node(std::move(n));
}

Expr raw_call(Primitive fn, const Expr& arg) {
  Node n;
  n.kind = Kind::Primitive;
  n.fn = fn;
  n.children = {arg};
  return make_node(std::move(n));
}

// ---------------------------------------------------------------------------
// Canonicalizing constructors

namespace {

// Split a canonical term into rational coefficient and monomial part.
std::pair<Rational, Expr> split_term(const Expr& t) {
  if (t.kind() == Kind::Product) {
    const auto& ops = t.operands();
    if (!ops.empty() && ops.front().is_constant()) {
      std::vector<Expr> rest(ops.begin() + 1, ops.end());
      if (rest.size() == 1) return {ops.front().value(), rest.front()};
      return {ops.front().value(), raw_product(std::move(rest))};
    }
  }
  return {Rational(1), t};
}

Expr join_term(const Rational& c, const Expr& m) {
  if (c == 1) return m;
  std::vector<Expr> ops;
  ops.emplace_back(c);
  if (m.kind() == Kind::Product) {
    ops.insert(ops.end(), m.operands().begin(), m.operands().end());
  } else {
    ops.push_back(m);
  }
  return raw_product(std::move(ops));
}

bool is_negative_term(const Expr& t) {
  if (t.is_constant()) return sgn(t.value()) < 0;
  if (t.kind() == Kind::Product && t.operands().front().is_constant())
    return sgn(t.operands().front().value()) < 0;
  return false;
}

std::size_t term_count(const Expr& e) { return e.kind() == Kind::Sum ? e.operands().size() : 1; }

// Number of terms of a multinomial expansion of a t-term sum to power k.
std::size_t multinomial_terms(std::size_t t, unsigned long k) {
  // C(t + k - 1, k), saturating.
  double acc = 1.0;
  for (unsigned long i = 1; i <= k; ++i) {
    acc = acc * static_cast<double>(t - 1 + i) / static_cast<double>(i);
    if (acc > 1e9) return static_cast<std::size_t>(1e9);
  }
  return static_cast<std::size_t>(acc + 0.5);
}

Expr expand_product(const Rational& coeff, const std::vector<Expr>& factors) {
  std::vector<Expr> acc{Expr(coeff)};
  for (const auto& f : factors) {
    std::vector<Expr> next;
    const std::vector<Expr> parts =
        f.kind() == Kind::Sum ? f.operands() : std::vector<Expr>{f};
    next.reserve(acc.size() * parts.size());
    for (const auto& a : acc) {
      for (const auto& p : parts) next.push_back(make_product({a, p}));
    }
    acc = std::move(next);
  }
  return make_sum(std::move(acc));
}

}  // namespace

Expr make_sum(std::vector<Expr> terms) {
  Rational constant = 0;
  std::vector<std::pair<Expr, Rational>> monos;
  std::function<void(const Expr&)> add = [&](const Expr& t) {
    if (t.kind() == Kind::Sum) {
      for (const auto& s : t.operands()) add(s);
      return;
    }
    if (t.is_constant()) {
      constant += t.value();
      return;
    }
    auto [c, m] = split_term(t);
    monos.emplace_back(m, c);
  };
  for (const auto& t : terms) add(t);

  std::sort(monos.begin(), monos.end(),
            [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<Expr> out;
  for (std::size_t i = 0; i < monos.size();) {
    Rational c = monos[i].second;
    std::size_t j = i + 1;
    while (j < monos.size() && monos[j].first == monos[i].first) {
      c += monos[j].second;
      ++j;
    }
    if (sgn(c) != 0) out.push_back(join_term(c, monos[i].first));
    i = j;
  }
  if (sgn(constant) != 0) out.emplace_back(constant);
  if (out.empty()) return zero();
  if (out.size() == 1) return out.front();
  return raw_sum(std::move(out));
}

Expr make_product(std::vector<Expr> factors) {
  Rational coeff = 1;
  std::vector<std::pair<Expr, Rational>> powers;
  std::function<void(const Expr&)> add = [&](const Expr& f) {
    switch (f.kind()) {
      case Kind::Product:
        for (const auto& g : f.operands()) add(g);
        return;
      case Kind::Constant:
        coeff *= f.value();
        return;
      case Kind::Power:
        powers.emplace_back(f.base(), f.exponent());
        return;
      default:
        powers.emplace_back(f, Rational(1));
        return;
    }
  };
  for (const auto& f : factors) add(f);
  if (sgn(coeff) == 0) return zero();

  std::sort(powers.begin(), powers.end(),
            [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<Expr> merged;
  bool renormalize = false;
  for (std::size_t i = 0; i < powers.size();) {
    Rational e = powers[i].second;
    std::size_t j = i + 1;
    while (j < powers.size() && powers[j].first == powers[i].first) {
      e += powers[j].second;
      ++j;
    }
    if (sgn(e) != 0) {
      Expr p = (j - i == 1 && e == powers[i].second && powers[i].second == 1)
                   ? powers[i].first
                   : make_power(powers[i].first, e);
      if (j - i > 1 || p.kind() == Kind::Product || p.kind() == Kind::Constant ||
          (p.kind() == Kind::Power && p.base() != powers[i].first)) {
        // merged powers may collapse to constants or products
        if (p.kind() == Kind::Product || p.kind() == Kind::Constant ||
            (p.kind() == Kind::Power && p.base() != powers[i].first))
          renormalize = true;
      }
      merged.push_back(p);
    }
    i = j;
  }
  if (renormalize) {
    merged.emplace_back(coeff);
    return make_product(std::move(merged));
  }

  // Distribute over sum factors with positive integer exponent.
  std::size_t expanded_terms = 1;
  bool has_sum = false;
  for (const auto& m : merged) {
    if (m.kind() == Kind::Sum) {
      has_sum = true;
      expanded_terms *= m.operands().size();
      if (expanded_terms > kExpansionLimit) break;
    }
  }
  if (has_sum && expanded_terms <= kExpansionLimit && (merged.size() > 1 || coeff != 1)) {
    return expand_product(coeff, merged);
  }

  if (merged.empty()) return Expr(coeff);
  std::sort(merged.begin(), merged.end(), [](const Expr& a, const Expr& b) {
    const Expr& ba = a.kind() == Kind::Power ? a.base() : a;
    const Expr& bb = b.kind() == Kind::Power ? b.base() : b;
    return compare(ba, bb) < 0;
  });
  if (coeff == 1 && merged.size() == 1) return merged.front();
  std::vector<Expr> ops;
  if (coeff != 1) ops.emplace_back(coeff);
  ops.insert(ops.end(), merged.begin(), merged.end());
  return raw_product(std::move(ops));
}

Expr make_power(const Expr& base, const Rational& exponent_in) {
  Rational exponent = exponent_in;
  exponent.canonicalize();
  if (sgn(exponent) == 0) return one();
  if (exponent == 1) return base;

  switch (base.kind()) {
    case Kind::Constant: {
      const Rational& b = base.value();
      if (sgn(b) == 0) {
        if (sgn(exponent) > 0) return zero();
        return raw_power(base, exponent);
      }
      if (b == 1) return one();
      if (is_integer(exponent) && exponent.get_num().fits_slong_p()) {
        long k = exponent.get_num().get_si();
        if (k > -4096 && k < 4096) return Expr(rational_pow(b, k));
      }
      return raw_power(base, exponent);
    }
    case Kind::Power:
      if (is_integer(exponent)) return make_power(base.base(), base.exponent() * exponent);
      return raw_power(base, exponent);
    case Kind::Product:
      if (is_integer(exponent)) {
        std::vector<Expr> fs;
        fs.reserve(base.operands().size());
        for (const auto& f : base.operands()) fs.push_back(make_power(f, exponent));
        return make_product(std::move(fs));
      }
      return raw_power(base, exponent);
    case Kind::Sum:
      if (is_integer(exponent) && sgn(exponent) > 0 && exponent.get_num().fits_ulong_p()) {
        unsigned long k = exponent.get_num().get_ui();
        if (multinomial_terms(term_count(base), k) <= kExpansionLimit) {
          Expr acc = base;
          for (unsigned long i = 1; i < k; ++i) acc = expand_product(Rational(1), {acc, base});
          return acc;
        }
      }
      return raw_power(base, exponent);
    default:
      return raw_power(base, exponent);
  }
}

Expr make_call(Primitive fn, const Expr& arg) {
  if (arg.is_constant()) {
    const Rational& v = arg.value();
    switch (fn) {
      case Primitive::Exp:
      case Primitive::Cos:
      case Primitive::Cosh:
        if (sgn(v) == 0) return one();
        break;
      case Primitive::Sin:
      case Primitive::Sinh:
        if (sgn(v) == 0) return zero();
        break;
      case Primitive::Log:
        if (v == 1) return zero();
        break;
    }
  }
  return raw_call(fn, arg);
}

Expr make_ufunc(std::string name, std::vector<int> orders, std::vector<Expr> args) {
  if (orders.size() != args.size())
    throw std::invalid_argument("ufunc '" + name + "': derivative order count != arity");
  for (int o : orders) {
    if (o < 0) throw std::invalid_argument("ufunc '" + name + "': negative derivative order");
  }
  Node n;
  n.kind = Kind::UFunc;
  n.name = std::move(name);
  n.orders = std::move(orders);
  n.children = std::move(args);
  return make_node(std::move(n));
}

Expr make_ufunc(std::string name, std::vector<Expr> args) {
  std::vector<int> orders(args.size(), 0);
  return make_ufunc(std::move(name), std::move(orders), std::move(args));
}

// ---------------------------------------------------------------------------
// Operators

Expr operator+(const Expr& a, const Expr& b) { return make_sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return make_sum({a, make_product({Expr(-1L), b})}); }
Expr operator-(const Expr& a) { return make_product({Expr(-1L), a}); }
Expr operator*(const Expr& a, const Expr& b) { return make_product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return make_product({a, make_power(b, Rational(-1))}); }
Expr pow(const Expr& base, const Rational& exponent) { return make_power(base, exponent); }

Expr exp(const Expr& e) { return make_call(Primitive::Exp, e); }
Expr log(const Expr& e) { return make_call(Primitive::Log, e); }
Expr sin(const Expr& e) { return make_call(Primitive::Sin, e); }
Expr cos(const Expr& e) { return make_call(Primitive::Cos, e); }
Expr sinh(const Expr& e) { return make_call(Primitive::Sinh, e); }
Expr cosh(const Expr& e) { return make_call(Primitive::Cosh, e); }

// ---------------------------------------------------------------------------
// Structural transforms

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Variable:
      return e;
    case Kind::Power:
      return make_power(simplify(e.base()), e.exponent());
    case Kind::Primitive:
      return make_call(e.primitive(), simplify(e.argument()));
    case Kind::UFunc: {
      std::vector<Expr> args;
      for (const auto& a : e.operands()) args.push_back(simplify(a));
      return make_ufunc(e.name(), e.orders(), std::move(args));
    }
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const auto& t : e.operands()) ts.push_back(simplify(t));
      return make_sum(std::move(ts));
    }
    case Kind::Product: {
      std::vector<Expr> fs;
      for (const auto& f : e.operands()) fs.push_back(simplify(f));
      return make_product(std::move(fs));
    }
  }
  return e;
}

Expr differentiate(const Expr& e, std::string_view var) {
  switch (e.kind()) {
    case Kind::Constant:
      return zero();
    case Kind::Variable:
      return e.name() == var ? one() : zero();
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const auto& t : e.operands()) ts.push_back(differentiate(t, var));
      return make_sum(std::move(ts));
    }
    case Kind::Product: {
      const auto& fs = e.operands();
      std::vector<Expr> ts;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Expr d = differentiate(fs[i], var);
        if (d.is_zero_constant()) continue;
        std::vector<Expr> prod;
        prod.reserve(fs.size());
        for (std::size_t j = 0; j < fs.size(); ++j) prod.push_back(j == i ? d : fs[j]);
        ts.push_back(make_product(std::move(prod)));
      }
      return make_sum(std::move(ts));
    }
    case Kind::Power: {
      Expr d = differentiate(e.base(), var);
      if (d.is_zero_constant()) return zero();
      return make_product({Expr(e.exponent()), make_power(e.base(), e.exponent() - 1), d});
    }
    case Kind::Primitive: {
      const Expr& u = e.argument();
      Expr d = differentiate(u, var);
      if (d.is_zero_constant()) return zero();
      Expr outer;
      switch (e.primitive()) {
        case Primitive::Exp: outer = e; break;
        case Primitive::Log: outer = make_power(u, Rational(-1)); break;
        case Primitive::Sin: outer = make_call(Primitive::Cos, u); break;
        case Primitive::Cos: outer = -make_call(Primitive::Sin, u); break;
        case Primitive::Sinh: outer = make_call(Primitive::Cosh, u); break;
        case Primitive::Cosh: outer = make_call(Primitive::Sinh, u); break;
      }
      return outer * d;
    }
    case Kind::UFunc: {
      const auto& args = e.operands();
      std::vector<Expr> ts;
      for (std::size_t i = 0; i < args.size(); ++i) {
        Expr d = differentiate(args[i], var);
        if (d.is_zero_constant()) continue;
        std::vector<int> orders = e.orders();
        ++orders[i];
        ts.push_back(make_ufunc(e.name(), std::move(orders), args) * d);
      }
      return make_sum(std::move(ts));
    }
  }
  return zero();
}

namespace {

Expr substitute_impl(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case Kind::Constant:
      return e;
    case Kind::Variable: {
      auto it = b.find(e.name());
      return it == b.end() ? e : it->second;
    }
    case Kind::Power:
      return make_power(substitute_impl(e.base(), b), e.exponent());
    case Kind::Primitive:
      return make_call(e.primitive(), substitute_impl(e.argument(), b));
    case Kind::UFunc: {
      std::vector<Expr> args;
      for (const auto& a : e.operands()) args.push_back(substitute_impl(a, b));
      return make_ufunc(e.name(), e.orders(), std::move(args));
    }
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const auto& t : e.operands()) ts.push_back(substitute_impl(t, b));
      return make_sum(std::move(ts));
    }
    case Kind::Product: {
      std::vector<Expr> fs;
      for (const auto& f : e.operands()) fs.push_back(substitute_impl(f, b));
      return make_product(std::move(fs));
    }
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings) {
  if (bindings.empty()) return simplify(e);
  return substitute_impl(e, bindings);
}

Expr substitute_ufunc(const Expr& e, std::string_view name,
                      const std::vector<std::string>& params, const Expr& body) {
  auto recurse = [&](const Expr& x) { return substitute_ufunc(x, name, params, body); };
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Variable:
      return e;
    case Kind::Power:
      return make_power(recurse(e.base()), e.exponent());
    case Kind::Primitive:
      return make_call(e.primitive(), recurse(e.argument()));
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const auto& t : e.operands()) ts.push_back(recurse(t));
      return make_sum(std::move(ts));
    }
    case Kind::Product: {
      std::vector<Expr> fs;
      for (const auto& f : e.operands()) fs.push_back(recurse(f));
      return make_product(std::move(fs));
    }
    case Kind::UFunc: {
      std::vector<Expr> args;
      for (const auto& a : e.operands()) args.push_back(recurse(a));
      if (e.name() != name) return make_ufunc(e.name(), e.orders(), std::move(args));
      if (args.size() != params.size())
        throw std::invalid_argument("binding for '" + std::string(name) + "' expects " +
                                    std::to_string(params.size()) + " argument(s), call has " +
                                    std::to_string(args.size()));
      Expr d = body;
      for (std::size_t i = 0; i < params.size(); ++i) {
        for (int k = 0; k < e.orders()[i]; ++k) d = differentiate(d, params[i]);
      }
      // Rename parameters first so argument expressions cannot capture them.
      Bindings fresh, finals;
      for (std::size_t i = 0; i < params.size(); ++i) {
        std::string tmp = "\x01arg" + std::to_string(i);
        fresh[params[i]] = Expr::variable(tmp);
        finals[tmp] = args[i];
      }
      return substitute(substitute(d, fresh), finals);
    }
  }
  return e;
}

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Kind::Variable) {
    out.insert(e.name());
    return;
  }
  if (e.kind() == Kind::Constant) return;
  for (const auto& c : e.operands()) collect_vars(c, out);
}

void collect_ufuncs(const Expr& e, std::map<std::string, std::size_t>& out) {
  if (e.kind() == Kind::UFunc) {
    auto [it, inserted] = out.emplace(e.name(), e.operands().size());
    if (!inserted && it->second != e.operands().size())
      throw std::invalid_argument("ufunc '" + e.name() + "' used with inconsistent arity");
  }
  if (e.kind() == Kind::Constant || e.kind() == Kind::Variable) return;
  for (const auto& c : e.operands()) collect_ufuncs(c, out);
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view var) {
  if (e.kind() == Kind::Variable) return e.name() == var;
  if (e.kind() == Kind::Constant) return false;
  for (const auto& c : e.operands()) {
    if (depends_on(c, var)) return true;
  }
  return false;
}

std::map<std::string, std::size_t> ufunc_symbols(const Expr& e) {
  std::map<std::string, std::size_t> out;
  collect_ufuncs(e, out);
  return out;
}

std::size_t tree_size(const Expr& e) {
  std::size_t n = 1;
  if (e.kind() == Kind::Constant || e.kind() == Kind::Variable) return n;
  for (const auto& c : e.operands()) n += tree_size(c);
  return n;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Rational& r) { return r.get_str(); }

namespace {

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string print_prec(const Expr& e, int ctx);

std::string exponent_suffix(const Rational& e) {
  if (is_integer(e)) return "^" + e.get_str();
  return "^(" + e.get_str() + ")";
}

std::string print_product_body(const Rational& coeff, const std::vector<Expr>& factors) {
  // coeff is taken by absolute value; the caller emits the sign.
  Rational c = abs(coeff);
  std::vector<const Expr*> num;
  std::vector<Expr> den;
  for (const auto& f : factors) {
    // x^-k prints as /x^k unless re-parsing would expand or fold the base
    if (f.kind() == Kind::Power && sgn(f.exponent()) < 0 &&
        (f.exponent() == -1 || (f.base().kind() != Kind::Sum && !f.base().is_constant()))) {
      den.push_back(f.exponent() == -1 ? f.base() : raw_power(f.base(), -f.exponent()));
    } else {
      num.push_back(&f);
    }
  }
  std::string out;
  mpz_class p = c.get_num(), q = c.get_den();
  if (p != 1 || num.empty()) out += p.get_str();
  for (const auto* f : num) {
    if (!out.empty()) out += "*";
    out += print_prec(*f, kPower);
  }
  if (q != 1) out += "/" + q.get_str();
  for (const auto& d : den) out += "/" + print_prec(d, kPower);
  return out;
}

std::string print_term_abs(const Expr& t) {
  // Prints |t| for a sum term (sign handled by caller).
  if (t.is_constant()) return Rational(abs(t.value())).get_str();
  if (t.kind() == Kind::Product) {
    const auto& ops = t.operands();
    Rational c = 1;
    std::size_t start = 0;
    if (ops.front().is_constant()) {
      c = ops.front().value();
      start = 1;
    }
    return print_product_body(c, std::vector<Expr>(ops.begin() + start, ops.end()));
  }
  return print_prec(t, kProduct);
}

std::string print_prec(const Expr& e, int ctx) {
  std::string s;
  int prec = kAtom;
  switch (e.kind()) {
    case Kind::Constant: {
      const Rational& v = e.value();
      s = v.get_str();
      if (sgn(v) < 0) prec = kUnary;
      if (v.get_den() != 1) prec = sgn(v) < 0 ? kUnary : kProduct;
      break;
    }
    case Kind::Variable:
      s = e.name();
      break;
    case Kind::Power:
      s = print_prec(e.base(), kAtom) + exponent_suffix(e.exponent());
      prec = kPower;
      break;
    case Kind::Primitive:
      s = std::string(primitive_name(e.primitive())) + "(" + print_prec(e.argument(), 0) + ")";
      break;
    case Kind::UFunc: {
      s = e.name();
      const auto& o = e.orders();
      bool any = std::any_of(o.begin(), o.end(), [](int k) { return k != 0; });
      if (o.size() == 1) {
        s.append(static_cast<std::size_t>(o[0]), '\'');
      } else if (any) {
        s += "'{";
        for (std::size_t i = 0; i < o.size(); ++i) {
          if (i) s += ",";
          s += std::to_string(o[i]);
        }
        s += "}";
      }
      s += "(";
      for (std::size_t i = 0; i < e.operands().size(); ++i) {
        if (i) s += ", ";
        s += print_prec(e.operands()[i], 0);
      }
      s += ")";
      break;
    }
    case Kind::Sum: {
      const auto& ts = e.operands();
      for (std::size_t i = 0; i < ts.size(); ++i) {
        bool neg = is_negative_term(ts[i]);
        if (i == 0) {
          if (neg) s += "-";
        } else {
          s += neg ? " - " : " + ";
        }
        s += print_term_abs(ts[i]);
      }
      prec = kSum;
      break;
    }
    case Kind::Product: {
      const auto& ops = e.operands();
      bool neg = ops.front().is_constant() && sgn(ops.front().value()) < 0;
      s = (neg ? "-" : "") + print_term_abs(e);
      prec = neg ? kUnary : kProduct;
      break;
    }
  }
  if (prec < ctx) return "(" + s + ")";
  return s;
}

}  // namespace

std::string print(const Expr& e) { return print_prec(e, 0); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << print(e); }

}  // namespace liesynth
