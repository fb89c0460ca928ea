#include "liesynth/report.hpp"

#include <nlohmann/json.hpp>

#include <sstream>
#include <stdexcept>

namespace liesynth {

using json = nlohmann::json;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "inconclusive") return Verdict::Inconclusive;
  throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Pass;
}

Report Report::leaf(std::string name, Verdict v, std::string detail) {
  Report r;
  r.name = std::move(name);
  r.verdict = v;
  r.detail = std::move(detail);
  return r;
}

Report Report::node(std::string name) {
  Report r;
  r.name = std::move(name);
  return r;
}

Report& Report::add(Report child) {
  verdict = combine(verdict, child.verdict);
  children.push_back(std::move(child));
  return children.back();
}

const Report* Report::first_failure() const {
  if (verdict != Verdict::Fail) return nullptr;
  for (const auto& c : children) {
    if (const Report* f = c.first_failure()) return f;
  }
  return this;
}

Report report_zero(std::string name, const ZeroVerdict& z) {
  Report r = Report::leaf(std::move(name), Verdict::Pass, to_string(z.kind));
  switch (z.kind) {
    case ZeroVerdict::Kind::ZeroStructural:
    case ZeroVerdict::Kind::ZeroProbable:
      break;
    case ZeroVerdict::Kind::NonZero:
      r.verdict = Verdict::Fail;
      r.witness = Witness{z.witness, z.value};
      break;
    case ZeroVerdict::Kind::Inconclusive:
      r.verdict = Verdict::Inconclusive;
      r.detail += " (" + std::to_string(z.admissible) + " admissible points)";
      break;
  }
  return r;
}

Report report_field_zero(std::string name, const FieldZeroVerdict& z, const VectorField& residual) {
  Report r = Report::leaf(std::move(name), Verdict::Pass);
  if (z.zero) {
    r.detail = z.structural ? "zero-structural" : "zero-probable";
    return r;
  }
  const std::string coord = residual.variables().empty()
                                ? std::to_string(z.coordinate)
                                : "∂" + residual.variables()[z.coordinate];
  if (z.inconclusive) {
    r.verdict = Verdict::Inconclusive;
    r.detail = "coordinate " + coord + " inconclusive";
    return r;
  }
  r.verdict = Verdict::Fail;
  r.detail = "coordinate " + coord + " = " + print(residual[z.coordinate]);
  r.witness = Witness{z.detail.witness, z.detail.value};
  return r;
}

namespace {

void text_into(const Report& r, int depth, std::ostringstream& os) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "[" << to_string(r.verdict) << "] "
     << r.name;
  if (!r.detail.empty()) os << ": " << r.detail;
  if (r.witness) {
    os << " | witness";
    if (r.witness->point.empty()) os << " (any point)";
    for (const auto& [k, v] : r.witness->point) os << " " << k << "=" << v;
    os << " residual=" << r.witness->residual;
  }
  if (r.seconds > 0) os << " (" << r.seconds << " s)";
  os << "\n";
  for (const auto& w : r.warnings)
    os << std::string(static_cast<std::size_t>(depth) * 2 + 2, ' ') << "warning: " << w << "\n";
  for (const auto& c : r.children) text_into(c, depth + 1, os);
}

json to_json(const Report& r) {
  json j;
  j["name"] = r.name;
  j["verdict"] = std::string(to_string(r.verdict));
  j["detail"] = r.detail;
  if (r.witness) {
    json p = json::object();
    for (const auto& [k, v] : r.witness->point) p[k] = v;
    j["witness"] = {{"point", p}, {"residual", r.witness->residual}};
  }
  j["warnings"] = r.warnings;
  j["seconds"] = r.seconds;
  json kids = json::array();
  for (const auto& c : r.children) kids.push_back(to_json(c));
  j["children"] = std::move(kids);
  return j;
}

Report from_json(const json& j) {
  Report r;
  r.name = j.at("name").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.detail = j.value("detail", std::string{});
  if (j.contains("witness")) {
    Witness w;
    for (const auto& [k, v] : j.at("witness").at("point").items()) w.point[k] = v.get<double>();
    w.residual = j.at("witness").at("residual").get<double>();
    r.witness = std::move(w);
  }
  if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.seconds = j.value("seconds", 0.0);
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) r.children.push_back(from_json(c));
  }
  return r;
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream os;
  os.precision(6);
  text_into(r, 0, os);
  return os.str();
}

std::string render_structured(const Report& r) { return to_json(r).dump(2); }

Report parse_structured(std::string_view text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

}  // namespace liesynth
