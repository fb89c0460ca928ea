#include "liesynth/jobfile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace liesynth {

JobError::JobError(std::string source, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         message),
      source_(std::move(source)),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

struct Piece {
  std::string text;
  std::size_t column;  // 1-based
};

struct Entry {
  std::string key;
  Piece value;
  std::size_t line;
  std::size_t key_column;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

Piece trim(std::string_view s, std::size_t column) {
  std::size_t a = 0, b = s.size();
  while (a < b && is_space(s[a])) ++a;
  while (b > a && is_space(s[b - 1])) --b;
  return {std::string(s.substr(a, b - a)), column + a};
}

std::vector<Piece> split(const Piece& p, char sep) {
  std::vector<Piece> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= p.text.size(); ++i) {
    if (i == p.text.size() || p.text[i] == sep) {
      out.push_back(trim(std::string_view(p.text).substr(start, i - start), p.column + start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= key.size(); ++i) {
    if (i == key.size() || key[i] == '.') {
      out.push_back(key.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

bool valid_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Position of `name` as a whole identifier in `text`, or npos.
std::size_t find_identifier(const std::string& text, const std::string& name) {
  for (std::size_t at = text.find(name); at != std::string::npos; at = text.find(name, at + 1)) {
    bool left = at == 0 || !ident_char(text[at - 1]);
    bool right = at + name.size() == text.size() || !ident_char(text[at + name.size()]);
    if (left && right) return at;
  }
  return std::string::npos;
}

class Builder {
 public:
  Builder(JobFile& job) : job_(job) {}

  [[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& msg) const {
    throw JobError(job_.source, line, column, msg);
  }
  [[noreturn]] void fail(const Entry& e, const std::string& msg) const { fail(e.line, e.key_column, msg); }
  [[noreturn]] void fail(const Entry& e, const Piece& p, const std::string& msg) const {
    fail(e.line, p.column, msg);
  }

  Expr expr(const Entry& e, const Piece& p, const std::vector<std::string>& allowed) {
    if (p.text.empty()) fail(e, p, "empty expression");
    Expr out;
    try {
      ParseOptions opts;
      opts.table = &job_.ufuncs;
      opts.declare_on_use = false;
      out = parse(p.text, opts);
    } catch (const ParseError& err) {
      fail(e.line, p.column + err.offset(), err.what());
    }
    for (const auto& v : free_variables(out)) {
      if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
        std::size_t at = find_identifier(p.text, v);
        std::string expected;
        for (const auto& a : allowed) expected += (expected.empty() ? "" : ", ") + a;
        fail(e.line, p.column + (at == std::string::npos ? 0 : at),
             "unknown variable '" + v + "' (expected one of: " + expected + ")");
      }
    }
    return out;
  }

  double number(const Entry& e, const Piece& p) {
    double v = 0;
    std::istringstream is(p.text);
    is >> v;
    if (p.text.empty() || !is || !is.eof()) fail(e, p, "expected a number, got '" + p.text + "'");
    return v;
  }

  long integer(const Entry& e, const Piece& p) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(p.text.data(), p.text.data() + p.text.size(), v);
    if (p.text.empty() || ec != std::errc() || ptr != p.text.data() + p.text.size())
      fail(e, p, "expected an integer, got '" + p.text + "'");
    return v;
  }

  Rational rational(const Entry& e, const Piece& p) {
    Expr x = expr(e, p, {});
    if (x.kind() != Kind::Constant) fail(e, p, "expected a rational constant");
    return x.value();
  }

  std::size_t index(const Entry& e, const std::string& s, std::size_t hi, const char* what) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 1 ||
        static_cast<std::size_t>(v) > hi)
      fail(e, std::string(what) + " index '" + s + "' out of range 1.." + std::to_string(hi));
    return static_cast<std::size_t>(v - 1);
  }

  VectorField field(const Entry& e) {
    auto parts = split(e.value, ';');
    if (parts.size() != job_.variables.size())
      fail(e, e.value,
           "operator needs " + std::to_string(job_.variables.size()) +
               " coordinates separated by ';', got " + std::to_string(parts.size()));
    std::vector<Expr> coords;
    for (const auto& p : parts) coords.push_back(expr(e, p, job_.variables));
    return VectorField(job_.variables, std::move(coords));
  }

  void run(const std::vector<Entry>& entries);

 private:
  JobFile& job_;
};

void Builder::run(const std::vector<Entry>& entries) {
  // Pass 1: declarations.
  const Entry* catalog_entry = nullptr;
  std::optional<Rational> catalog_k;
  for (const auto& e : entries) {
    if (e.key == "variables") {
      if (!job_.variables.empty()) fail(e, "variables declared twice");
      for (const auto& p : split(e.value, ',')) {
        if (!valid_identifier(p.text)) fail(e, p, "invalid variable name '" + p.text + "'");
        if (is_reserved_slot_name(p.text) || p.text == "s" || p.text == "t")
          fail(e, p, "'" + p.text + "' is reserved and cannot be a phase variable");
        if (std::find(job_.variables.begin(), job_.variables.end(), p.text) != job_.variables.end())
          fail(e, p, "duplicate variable '" + p.text + "'");
        job_.variables.push_back(p.text);
      }
    } else if (e.key == "ufunc") {
      for (const auto& p : split(e.value, ',')) {
        auto slash = p.text.find('/');
        std::string name = p.text.substr(0, slash);
        while (!name.empty() && is_space(name.back())) name.pop_back();
        if (slash == std::string::npos || !valid_identifier(name))
          fail(e, p, "ufunc declarations look like name/arity, got '" + p.text + "'");
        if (Primitive pr; primitive_from_name(name, pr)) fail(e, p, "'" + name + "' is a built-in function");
        Piece ap = trim(std::string_view(p.text).substr(slash + 1), p.column + slash + 1);
        long arity = integer(e, ap);
        if (arity < 1) fail(e, ap, "arity must be at least 1");
        try {
          job_.ufuncs.declare(name, static_cast<std::size_t>(arity));
        } catch (const std::exception& ex) {
          fail(e, p, ex.what());
        }
      }
    } else if (e.key == "catalog") {
      catalog_entry = &e;
    } else if (e.key == "catalog.k") {
      catalog_k = rational(e, e.value);
    }
  }

  if (catalog_entry) {
    CatalogEntry c;
    try {
      c = catalog_get(catalog_entry->value.text, catalog_k);
    } catch (const SpecError& ex) {
      fail(*catalog_entry, catalog_entry->value, ex.what());
    }
    if (!job_.variables.empty() && job_.variables != c.group.variables)
      fail(*catalog_entry, "catalog '" + c.id + "' uses different phase variables");
    job_.variables = c.group.variables;
    job_.catalog = c.id;
    for (const auto& [name, arity] : c.ufuncs) {
      if (!job_.ufuncs.contains(name)) job_.ufuncs.declare(name, arity);
    }
    job_.group = c.group;
    job_.complement = c.complement;
  }
  if (job_.variables.empty()) {
    if (entries.empty()) fail(1, 1, "empty job file");
    fail(entries.front(), "job declares no variables (add 'variables = x, y' or 'catalog = ID')");
  }

  // Pass 2: blocks.
  std::vector<VectorField> ops, comp;
  std::vector<StructureConstants::Entry> cs;
  std::vector<Expr> invs;
  std::size_t k = 0;
  const Entry* group_at = nullptr;
  const Entry* comp_at = nullptr;
  std::vector<std::pair<const Entry*, std::vector<Expr>>> columns;
  std::vector<const Entry*> c_at;
  std::vector<std::string> slots{"s"};
  for (const auto& n : slot_names(job_.variables.size())) slots.push_back(n);

  for (const auto& e : entries) {
    auto parts = split_key(e.key);
    const std::string& head = parts.front();
    if (e.key == "variables" || e.key == "ufunc" || e.key == "catalog" || e.key == "catalog.k") continue;
    if (head == "group") {
      if (!job_.catalog.empty()) fail(e, "group keys cannot be combined with 'catalog'");
      if (!group_at) group_at = &e;
      if (e.key == "group.operator") {
        ops.push_back(field(e));
      } else if (e.key == "group.invariant") {
        invs.push_back(expr(e, e.value, job_.variables));
      } else if (e.key == "group.k") {
        long v = integer(e, e.value);
        if (v < 1) fail(e, e.value, "k must be at least 1");
        k = static_cast<std::size_t>(v);
      } else if (e.key == "group.c") {
        auto eq = e.value.text.find('=');
        if (eq == std::string::npos) fail(e, e.value, "structure constants look like 'l s p = value'");
        Piece idx = trim(std::string_view(e.value.text).substr(0, eq), e.value.column);
        Piece val = trim(std::string_view(e.value.text).substr(eq + 1), e.value.column + eq + 1);
        std::istringstream is(idx.text);
        long l = 0, s = 0, p = 0;
        std::string extra;
        if (!(is >> l >> s >> p) || (is >> extra) || l < 1 || s < 1 || p < 1)
          fail(e, idx, "expected three positive indices 'l s p'");
        cs.push_back({static_cast<std::size_t>(l - 1), static_cast<std::size_t>(s - 1),
                      static_cast<std::size_t>(p - 1), rational(e, val)});
        c_at.push_back(&e);
      } else {
        fail(e, "unknown key '" + e.key + "'");
      }
    } else if (head == "complement") {
      if (!job_.catalog.empty()) fail(e, "complement keys cannot be combined with 'catalog'");
      if (e.key != "complement.operator") fail(e, "unknown key '" + e.key + "'");
      if (!comp_at) comp_at = &e;
      comp.push_back(field(e));
    } else if (head == "system") {
      if (e.key != "system.column") fail(e, "unknown key '" + e.key + "'");
      auto p = split(e.value, ';');
      if (p.size() != job_.variables.size())
        fail(e, e.value,
             "system column needs " + std::to_string(job_.variables.size()) +
                 " entries separated by ';', got " + std::to_string(p.size()));
      std::vector<Expr> col;
      for (const auto& piece : p) col.push_back(expr(e, piece, job_.variables));
      columns.emplace_back(&e, std::move(col));
    } else if (head == "psi" || head == "phi") {
      if (parts.size() != 3) fail(e, "binding keys look like " + head + ".J.L");
      const std::size_t n = job_.variables.size();
      std::size_t j = index(e, parts[1], 64, "column");
      std::size_t l = index(e, parts[2], n, head == "psi" ? "group operator" : "operator");
      auto key = std::make_pair(j, l);
      auto& target = head == "psi" ? job_.psi : job_.phi;
      if (target.count(key)) fail(e, "binding " + e.key + " given twice");
      target[key] = head == "psi" ? expr(e, e.value, job_.variables) : expr(e, e.value, slots);
    } else if (head == "sampler") {
      if (e.key == "sampler.samples") {
        long v = integer(e, e.value);
        if (v < 1) fail(e, e.value, "samples must be positive");
        job_.sampler.samples = static_cast<int>(v);
      } else if (e.key == "sampler.seed") {
        long v = integer(e, e.value);
        if (v < 0) fail(e, e.value, "seed must be non-negative");
        job_.sampler.seed = static_cast<std::uint64_t>(v);
      } else if (e.key == "sampler.tol") {
        double v = number(e, e.value);
        if (!(v > 0)) fail(e, e.value, "tolerance must be positive");
        job_.sampler.tol = v;
      } else if (e.key == "sampler.box") {
        auto p = split(e.value, ',');
        if (p.size() != 2) fail(e, e.value, "box looks like 'lo, hi'");
        job_.sampler.box_lo = number(e, p[0]);
        job_.sampler.box_hi = number(e, p[1]);
      } else if (e.key == "sampler.exclusion") {
        job_.sampler.exclusion = number(e, e.value);
      } else {
        fail(e, "unknown key '" + e.key + "'");
      }
    } else if (head == "numcheck") {
      if (e.key == "numcheck.x0") {
        State x0;
        for (const auto& p : split(e.value, ',')) x0.push_back(number(e, p));
        if (x0.size() != job_.variables.size())
          fail(e, e.value, "x0 needs " + std::to_string(job_.variables.size()) + " entries");
        job_.numcheck.x0 = x0;
      } else if (e.key == "numcheck.t_end") {
        job_.numcheck.t_end = number(e, e.value);
      } else if (e.key == "numcheck.h") {
        job_.numcheck.h = number(e, e.value);
      } else if (e.key == "numcheck.alphas") {
        for (const auto& p : split(e.value, ',')) job_.numcheck.alphas.push_back(number(e, p));
      } else if (e.key == "numcheck.action") {
        job_.numcheck.action = e.value.text;
      } else {
        fail(e, "unknown key '" + e.key + "'");
      }
    } else {
      fail(e, "unknown key '" + e.key + "'");
    }
  }

  if (group_at) {
    if (ops.empty()) fail(*group_at, "group block has no 'group.operator' lines");
    StructureConstants c;
    try {
      c = StructureConstants::from_upper(ops.size(), cs);
    } catch (const SpecError& ex) {
      fail(c_at.empty() ? *group_at : *c_at.front(), ex.what());
    }
    try {
      job_.group = make_group(job_.variables, ops, c, invs, k);
    } catch (const std::exception& ex) {
      fail(*group_at, ex.what());
    }
  }
  if (comp_at) {
    ComplementSpec cs2;
    cs2.operators = comp;
    job_.complement = cs2;
  }
  if (!columns.empty()) {
    std::vector<VectorField> cols;
    for (auto& [e, col] : columns) cols.emplace_back(job_.variables, col);
    job_.system = SystemSpec::from_columns(cols);
  }
  if (job_.group) {
    const std::size_t q = job_.group->q();
    for (const auto& [key, v] : job_.psi) {
      if (key.second >= q)
        fail(entries.front(), "psi.J.L needs L <= q = " + std::to_string(q));
    }
  }
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string coords(const VectorField& f) {
  std::vector<std::string> parts;
  for (const auto& c : f.coordinates()) parts.push_back(print(c));
  return join(parts, " ; ");
}

}  // namespace

SamplerConfig JobFile::sampler_config(SamplerConfig base) const {
  if (sampler.samples) base.samples = *sampler.samples;
  if (sampler.seed) base.seed = *sampler.seed;
  if (sampler.tol) base.eps_abs = base.eps_rel = *sampler.tol;
  if (sampler.box_lo) base.box_lo = *sampler.box_lo;
  if (sampler.box_hi) base.box_hi = *sampler.box_hi;
  if (sampler.exclusion) base.exclusion = *sampler.exclusion;
  return base;
}

SynthesisInput JobFile::synthesis_input(Construction c) const {
  if (!group) throw SpecError("synthesis needs a group block");
  if (!complement) throw SpecError("synthesis needs a complement block");
  SynthesisInput in;
  in.group = *group;
  in.complement = *complement;
  const std::size_t n = group->n(), q = group->q();
  std::size_t m = 0;
  for (const auto& [key, v] : psi) m = std::max(m, key.first + 1);
  for (const auto& [key, v] : phi) m = std::max(m, key.first + 1);
  if (m == 0) throw SpecError("synthesis needs psi.J.L or phi.J.L bindings");
  if (c == Construction::Abelian && !psi.empty()) throw SpecError("the abelian construction takes phi.J.L bindings only");
  if (c == Construction::General) {
    for (const auto& [key, v] : phi) {
      if (key.second < q)
        throw SpecError("phi." + std::to_string(key.first + 1) + "." + std::to_string(key.second + 1) +
                        " lies in the group block; use psi bindings there");
    }
    in.psi.assign(m, std::vector<Expr>(q, Expr(0L)));
    for (const auto& [key, v] : psi) in.psi[key.first][key.second] = v;
  } else {
    in.group_phi.assign(m, std::vector<Expr>(q, Expr(0L)));
  }
  in.complement_phi.assign(m, std::vector<Expr>(n - q, Expr(0L)));
  for (const auto& [key, v] : phi) {
    if (key.second < q) {
      in.group_phi[key.first][key.second] = v;
    } else {
      in.complement_phi[key.first][key.second - q] = v;
    }
  }
  if (n == q) in.complement_phi.clear();
  return in;
}

JobFile parse_job(std::string_view text, std::string source) {
  JobFile job;
  job.source = std::move(source);
  std::vector<Entry> entries;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    Piece whole = trim(line, 1);
    if (!whole.text.empty()) {
      std::size_t eq = line.find('=');
      if (eq == std::string_view::npos)
        throw JobError(job.source, line_no, whole.column, "expected 'key = value'");
      Piece key = trim(line.substr(0, eq), 1);
      if (key.text.empty()) throw JobError(job.source, line_no, whole.column, "missing key");
      Piece value = trim(line.substr(eq + 1), eq + 2);
      entries.push_back({key.text, value, line_no, key.column});
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  Builder(job).run(entries);
  return job;
}

JobFile load_job(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw JobError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_job(ss.str(), path);
}

std::string write_job(const JobFile& job) {
  std::ostringstream os;
  if (!job.catalog.empty()) os << "# catalog entry " << job.catalog << "\n";
  os << "variables = " << join(job.variables, ", ") << "\n";
  if (!job.ufuncs.symbols().empty()) {
    std::vector<std::string> decl;
    for (const auto& [name, a] : job.ufuncs.symbols()) decl.push_back(name + "/" + std::to_string(a));
    os << "ufunc = " << join(decl, ", ") << "\n";
  }
  if (job.group) {
    const auto& g = *job.group;
    os << "\n";
    for (const auto& op : g.operators) os << "group.operator = " << coords(op) << "\n";
    for (std::size_t l = 0; l < g.q(); ++l) {
      for (std::size_t s = l + 1; s < g.q(); ++s) {
        for (std::size_t p = 0; p < g.q(); ++p) {
          const Rational& c = g.constants(l, s, p);
          if (sgn(c) != 0)
            os << "group.c = " << l + 1 << " " << s + 1 << " " << p + 1 << " = " << to_string(c) << "\n";
        }
      }
    }
    for (const auto& inv : g.invariants) os << "group.invariant = " << print(inv) << "\n";
    if (g.k != g.n()) os << "group.k = " << g.k << "\n";
  }
  if (job.complement && !job.complement->operators.empty()) {
    os << "\n";
    for (const auto& op : job.complement->operators) os << "complement.operator = " << coords(op) << "\n";
  }
  if (job.system) {
    os << "\n";
    for (const auto& col : system_operators(*job.system)) os << "system.column = " << coords(col) << "\n";
  }
  if (!job.psi.empty() || !job.phi.empty()) os << "\n";
  for (const auto& [key, v] : job.psi)
    os << "psi." << key.first + 1 << "." << key.second + 1 << " = " << print(v) << "\n";
  for (const auto& [key, v] : job.phi)
    os << "phi." << key.first + 1 << "." << key.second + 1 << " = " << print(v) << "\n";
  return os.str();
}

JobFile job_from_catalog(const CatalogEntry& entry) {
  JobFile job;
  job.source = "catalog:" + entry.id;
  job.variables = entry.group.variables;
  for (const auto& [name, a] : entry.ufuncs) job.ufuncs.declare(name, a);
  job.group = entry.group;
  job.complement = entry.complement;
  job.system = entry.templ;
  return job;
}

}  // namespace liesynth
