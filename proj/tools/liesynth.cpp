// liesynth command-line driver.
#include "liesynth/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace liesynth;

namespace {

void common_flags(CLI::App* app, CommandOptions& o, std::string& report) {
  app->add_option("--seed", o.seed, "Sampler seed (default 0)");
  app->add_option("--samples", o.samples, "Sample points per zero test")->check(CLI::PositiveNumber);
  app->add_option("--tol", o.tol, "Absolute and relative zero-test tolerance")
      ->check(CLI::PositiveNumber);
  app->add_option("--report", report, "Report format")
      ->check(CLI::IsMember({"text", "structured"}));
  app->add_option("--catalog", o.catalog, "Catalog entry instead of (or alongside) a job file");
  app->add_option("--k", o.k, "Rational parameter of the stretch group");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie group symmetry checks and synthesis of admitting differential systems"};
  app.require_subcommand(1);
  CommandOptions o;
  std::string report = "text";

  auto* verify = app.add_subcommand("verify", "Check the group, complement and system blocks of a job");
  verify->add_option("job", o.job, "Job file");
  common_flags(verify, o, report);

  auto* synth = app.add_subcommand("synth", "Build an admitting system from group data and bindings");
  synth->add_option("job", o.job, "Job file");
  std::string construction;
  synth->add_option("--construction", construction, "general (psi bindings) or abelian (phi bindings)")
      ->check(CLI::IsMember({"general", "abelian"}));
  synth->add_option("-o,--output", o.output, "Write the system here instead of stdout");
  common_flags(synth, o, report);

  auto* bracket = app.add_subcommand("bracket", "Print the Lie bracket of two operators");
  bracket->add_option("job", o.job, "Job file");
  bracket->add_option("operators", o.indices, "Two operator names, e.g. G1 G2 or G1 F1")->expected(2)->required();
  common_flags(bracket, o, report);

  auto* catalog = app.add_subcommand("catalog", "List, show or instantiate catalog entries");
  catalog->add_option("action", o.action, "list, get or instantiate")
      ->check(CLI::IsMember({"list", "get", "instantiate"}));
  catalog->add_option("--bind", o.bindings, "Function binding name=expr in s (or s1, s2, ...)");
  catalog->add_option("-o,--output", o.output, "Write the job here instead of stdout");
  common_flags(catalog, o, report);

  auto* num = app.add_subcommand("numcheck", "Integrate a system and test group-orbit invariance");
  num->add_option("job", o.job, "Job file");
  num->add_option("--bind", o.bindings, "Function binding name=expr (with --catalog and no job)");
  num->add_option("--x0", o.x0, "Initial state")->expected(1, -1);
  num->add_option("--t-end", o.t_end, "Integration end time")->check(CLI::PositiveNumber);
  num->add_option("--step", o.h, "Step size h")->check(CLI::PositiveNumber);
  num->add_option("--alpha", o.alphas, "Group parameters to test")->expected(1, -1);
  num->add_option("--csv", o.csv, "Export the trajectory as CSV");
  common_flags(num, o, report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }
  o.report = report == "structured" ? ReportFormat::Structured : ReportFormat::Text;

  if (verify->parsed()) return cmd_verify(o, std::cout, std::cerr);
  if (!construction.empty())
    o.construction = construction == "general" ? Construction::General : Construction::Abelian;
  if (synth->parsed()) return cmd_synth(o, std::cout, std::cerr);
  if (bracket->parsed()) return cmd_bracket(o, std::cout, std::cerr);
  if (catalog->parsed()) return cmd_catalog(o, std::cout, std::cerr);
  return cmd_numcheck(o, std::cout, std::cerr);
}
