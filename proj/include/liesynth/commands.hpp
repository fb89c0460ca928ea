#pragma once

#include "liesynth/jobfile.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace liesynth {

enum class ReportFormat { Text, Structured };

/// Exit codes shared by every subcommand.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInputError = 3;

struct CommandOptions {
  std::string job;  // path; empty when --catalog supplies the data
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  ReportFormat report = ReportFormat::Text;
  std::string catalog;
  std::optional<std::string> k;

  // synth
  std::optional<Construction> construction;
  std::string output;

  // bracket: operator names such as G1, G2, F1
  std::vector<std::string> indices;

  // catalog: list | get | instantiate, with name=body bindings
  std::string action = "list";
  std::vector<std::string> bindings;

  // numcheck
  std::optional<State> x0;
  std::optional<double> t_end;
  std::optional<double> h;
  std::vector<double> alphas;
  std::string csv;
};

int cmd_verify(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_synth(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_bracket(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_catalog(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_numcheck(const CommandOptions& o, std::ostream& out, std::ostream& err);

}  // namespace liesynth
