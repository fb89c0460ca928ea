#pragma once

#include "liesynth/numeric.hpp"
#include "liesynth/synth.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace liesynth {

/// Diagnostic anchored at a line and column (both 1-based) of a job file.
class JobError : public std::runtime_error {
 public:
  JobError(std::string source, std::size_t line, std::size_t column, const std::string& message);
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string source_;
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Which synthesis reads the job's bindings: the general construction takes
/// psi.J.L for the group block, the abelian one takes phi.J.L.
enum class Construction { General, Abelian };

/// A parsed job file. See the README for the format.
struct JobFile {
  std::string source = "<job>";
  std::vector<std::string> variables;
  UFuncTable ufuncs;
  /// Catalog id the group and complement were taken from, if any.
  std::string catalog;

  std::optional<GroupSpec> group;
  std::optional<ComplementSpec> complement;
  std::optional<SystemSpec> system;

  /// Keyed by zero-based (j, l) and (j, i).
  std::map<std::pair<std::size_t, std::size_t>, Expr> psi;
  std::map<std::pair<std::size_t, std::size_t>, Expr> phi;

  struct Sampler {
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<double> box_lo, box_hi;
    std::optional<double> exclusion;
  } sampler;

  struct Numcheck {
    std::optional<State> x0;
    std::optional<double> t_end;
    std::optional<double> h;
    std::vector<double> alphas;
    std::string action;
  } numcheck;

  /// `base` with the job's sampler overrides applied.
  SamplerConfig sampler_config(SamplerConfig base = {}) const;

  /// Binding rows for synthesis.
  SynthesisInput synthesis_input(Construction c) const;
};

JobFile parse_job(std::string_view text, std::string source = "<job>");
JobFile load_job(const std::string& path);

/// Serializes variables, ufuncs, group, complement, system and bindings.
std::string write_job(const JobFile& job);

/// Job holding a catalog entry's group, complement and template system.
JobFile job_from_catalog(const CatalogEntry& entry);

}  // namespace liesynth
