#pragma once

#include "liesynth/fields.hpp"
#include "liesynth/sampling.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace liesynth {

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

/// Fail dominates inconclusive, which dominates pass.
Verdict combine(Verdict a, Verdict b);

struct Witness {
  Point point;
  double residual = 0.0;
  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Verdict tree for a batch of checked identities.
struct Report {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;
  std::optional<Witness> witness;
  std::vector<std::string> warnings;
  double seconds = 0.0;
  std::vector<Report> children;

  static Report leaf(std::string name, Verdict v, std::string detail = {});
  static Report node(std::string name);

  /// Appends a child and folds its verdict into this node.
  Report& add(Report child);

  bool passed() const { return verdict == Verdict::Pass; }
  bool failed() const { return verdict == Verdict::Fail; }

  /// First failing leaf in depth-first order, if any.
  const Report* first_failure() const;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Leaf report from a scalar zero test.
Report report_zero(std::string name, const ZeroVerdict& z);
/// Leaf report from a coordinate-wise field zero test.
Report report_field_zero(std::string name, const FieldZeroVerdict& z, const VectorField& residual);

std::string render_text(const Report& r);
/// JSON rendering; parse_structured(render_structured(r)) == r.
std::string render_structured(const Report& r);
Report parse_structured(std::string_view text);

/// Process exit code for a verdict: 0 pass, 1 fail, 2 inconclusive.
int exit_code(Verdict v);

/// Records wall time into a report on destruction.
class ReportTimer {
 public:
  explicit ReportTimer(Report& r) : report_(r), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer() {
    report_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  Report& report_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace liesynth
