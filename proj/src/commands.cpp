#include "liesynth/commands.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace liesynth {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<Rational> k_of(const CommandOptions& o) {
  if (!o.k) return std::nullopt;
  Expr e;
  try {
    e = parse(*o.k);
  } catch (const ParseError& err) {
    throw InputError("--k: " + std::string(err.what()));
  }
  if (e.kind() != Kind::Constant) throw InputError("--k expects a rational, got '" + *o.k + "'");
  return e.value();
}

JobFile obtain_job(const CommandOptions& o) {
  if (!o.job.empty()) return load_job(o.job);
  if (!o.catalog.empty()) return job_from_catalog(catalog_get(o.catalog, k_of(o)));
  throw InputError("a job file or --catalog ID is required");
}

SamplerConfig config(const CommandOptions& o, const JobFile& job) {
  SamplerConfig cfg = job.sampler_config();
  if (o.seed) cfg.seed = *o.seed;
  if (o.samples) cfg.samples = *o.samples;
  if (o.tol) cfg.eps_abs = cfg.eps_rel = *o.tol;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return cfg;
}

void emit(const Report& r, const CommandOptions& o, std::ostream& os) {
  if (o.report == ReportFormat::Structured) {
    os << render_structured(r) << "\n";
  } else {
    os << render_text(r);
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const SynthesisError& e) {
    err << "error: " << e.what() << "\n" << render_text(e.report());
    return kExitFail;
  } catch (const IntegrationError& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const JobError& e) {
    err << e.what() << "\n";
    return kExitInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    // spec, field and argument errors are all input errors here
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

std::string catalog_header(const CatalogEntry& c) {
  std::ostringstream os;
  os << "# " << c.id << ": " << c.title << "\n";
  os << "# transformation: " << c.transformation << "\n";
  return os.str();
}

void write_output(const CommandOptions& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw InputError("cannot write '" + o.output + "'");
  f << text;
}

std::map<std::string, Expr> parse_bindings(const std::vector<std::string>& raw) {
  std::map<std::string, Expr> out;
  for (const auto& b : raw) {
    auto eq = b.find('=');
    if (eq == std::string::npos) throw InputError("bindings look like name=expression, got '" + b + "'");
    std::string name = b.substr(0, eq);
    try {
      out[name] = parse(b.substr(eq + 1));
    } catch (const ParseError& e) {
      throw InputError("binding '" + name + "' at offset " + std::to_string(e.offset() + eq + 1) +
                       ": " + e.detail());
    }
  }
  return out;
}

const VectorField& named_operator(const JobFile& job, const std::vector<VectorField>& frame,
                                  const std::vector<VectorField>& cols, const std::string& name) {
  if (name.size() < 2 || (name[0] != 'G' && name[0] != 'F'))
    throw InputError("operators are named G1..Gn or F1..Fm, got '" + name + "'");
  std::size_t idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoul(name.substr(1), &used);
    if (used != name.size() - 1) throw std::invalid_argument(name);
  } catch (const std::exception&) {
    throw InputError("bad operator name '" + name + "'");
  }
  const auto& pool = name[0] == 'G' ? frame : cols;
  if (idx < 1 || idx > pool.size())
    throw InputError("'" + name + "' out of range (job " + job.source + " has " +
                     std::to_string(pool.size()) + (name[0] == 'G' ? " frame" : " system") +
                     " operators)");
  return pool[idx - 1];
}

}  // namespace

int cmd_verify(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    JobFile job = obtain_job(o);
    SamplerConfig cfg = config(o, job);
    const UFuncTable* tab = &job.ufuncs;
    Report rep = Report::node("verify " + job.source);
    {
      ReportTimer timer(rep);
      if (job.group) {
        rep.add(verify_structure_constants(*job.group, cfg, tab));
        rep.add(verify_invariants(*job.group, cfg, tab));
        rep.add(verify_completeness(*job.group, cfg, tab));
        if (job.complement) rep.add(verify_complement(*job.group, *job.complement, cfg, tab));
      } else if (job.complement) {
        throw InputError("a complement block needs a group block");
      }
      if (job.system) {
        job.system->validate();
        rep.add(verify_solvability(*job.system, cfg, tab));
        if (job.group) rep.add(verify_admission(*job.system, *job.group, cfg, tab));
      }
      if (rep.children.empty()) throw InputError("nothing to verify: the job has no group or system");
    }
    emit(rep, o, out);
    return exit_code(rep.verdict);
  });
}

int cmd_synth(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.job.empty()) {
      if (o.catalog.empty()) throw InputError("synth needs a job file or --catalog ID");
      CatalogEntry c = catalog_get(o.catalog, k_of(o));
      write_output(o, catalog_header(c) + write_job(job_from_catalog(c)), out);
      return kExitPass;
    }
    JobFile job = load_job(o.job);
    SamplerConfig cfg = config(o, job);
    const UFuncTable* tab = &job.ufuncs;
    const Construction how =
        o.construction.value_or(job.psi.empty() ? Construction::Abelian : Construction::General);
    SynthesisInput in = job.synthesis_input(how);
    Report rep = Report::node("synthesis");
    SystemSpec sys;
    {
      ReportTimer timer(rep);
      if (how == Construction::Abelian) {
        sys = synthesize_abelian(in, cfg, tab);
        rep.detail = "abelian construction";
      } else {
        SynthesisResult r = synthesize_nonabelian(in, cfg, tab);
        sys = r.system;
        rep.detail = "general construction";
        for (auto& c : r.report.children) rep.add(std::move(c));
      }
      rep.add(check_synthesis(sys, in, cfg, tab));
    }
    JobFile result;
    result.source = job.source;
    result.variables = job.variables;
    for (const auto& row : sys.f) {
      for (const auto& e : row) result.ufuncs.declare_from(e);
    }
    result.group = job.group;
    result.complement = job.complement;
    result.system = sys;
    write_output(o, write_job(result), out);
    emit(rep, o, o.output.empty() ? err : out);
    return exit_code(rep.verdict);
  });
}

int cmd_bracket(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.indices.size() != 2) throw InputError("bracket takes exactly two operator names");
    JobFile job = obtain_job(o);
    std::vector<VectorField> frame, cols;
    if (job.group) {
      frame = job.group->operators;
      if (job.complement) frame = combined_frame(*job.group, *job.complement);
    }
    if (job.system) cols = system_operators(*job.system);
    const VectorField& a = named_operator(job, frame, cols, o.indices[0]);
    const VectorField& b = named_operator(job, frame, cols, o.indices[1]);
    VectorField br = lie_bracket(a, b);
    if (o.report == ReportFormat::Structured) {
      nlohmann::json j;
      j["left"] = o.indices[0];
      j["right"] = o.indices[1];
      j["variables"] = br.variables();
      std::vector<std::string> c;
      for (const auto& e : br.coordinates()) c.push_back(print(e));
      j["coordinates"] = c;
      j["zero"] = br.structurally_zero();
      out << j.dump(2) << "\n";
    } else {
      out << br.to_string() << "\n";
    }
    return kExitPass;
  });
}

int cmd_catalog(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.action == "list") {
      if (o.report == ReportFormat::Structured) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : catalog_list()) {
          arr.push_back({{"id", c.id.substr(0, c.id.find('('))},
                         {"title", c.title},
                         {"transformation", c.transformation}});
        }
        out << arr.dump(2) << "\n";
      } else {
        for (const auto& c : catalog_list()) {
          std::string id = c.id.substr(0, c.id.find('('));
          out << id << std::string(id.size() < 12 ? 12 - id.size() : 1, ' ') << c.title << "\n";
        }
      }
      return kExitPass;
    }
    if (o.catalog.empty()) throw InputError("catalog " + o.action + " needs --catalog ID");
    CatalogEntry c = catalog_get(o.catalog, k_of(o));
    if (o.action == "get") {
      write_output(o, catalog_header(c) + write_job(job_from_catalog(c)), out);
      return kExitPass;
    }
    if (o.action == "instantiate") {
      JobFile job = job_from_catalog(c);
      job.system = catalog_instantiate(c, parse_bindings(o.bindings));
      job.ufuncs = UFuncTable{};
      for (const auto& row : job.system->f) {
        for (const auto& e : row) job.ufuncs.declare_from(e);
      }
      write_output(o, catalog_header(c) + write_job(job), out);
      return kExitPass;
    }
    throw InputError("unknown catalog action '" + o.action + "' (list, get, instantiate)");
  });
}

int cmd_numcheck(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    JobFile job = obtain_job(o);
    SamplerConfig cfg = config(o, job);
    const UFuncTable* tab = &job.ufuncs;
    if (o.job.empty() && !o.bindings.empty()) {
      CatalogEntry c = catalog_get(o.catalog, k_of(o));
      job.system = catalog_instantiate(c, parse_bindings(o.bindings));
    }
    if (!job.system) throw InputError("numcheck needs a system block");
    const SystemSpec& sys = *job.system;
    sys.validate();

    std::string action = !o.catalog.empty() ? o.catalog : job.numcheck.action;
    if (action.empty()) action = job.catalog;
    if (action.empty() && job.group && job.group->q() == 1) action = "flow";
    if (action.empty()) throw InputError("no group action: pass --catalog ID or set numcheck.action");
    std::function<FiniteAction(double)> act;
    if (action == "flow") {
      if (!job.group) throw InputError("the flow action needs a group block");
      if (job.group->q() != 1) throw InputError("the flow action needs a one-parameter group");
      VectorField g = job.group->operators.front();
      act = [g, cfg, tab](double a) { return flow_action(g, a, cfg, tab); };
    } else {
      std::optional<Rational> k = k_of(o);
      catalog_action(action, 0.0, k);  // validates the id
      act = [action, k](double a) { return catalog_action(action, a, k); };
    }

    State x0;
    if (o.x0) {
      x0 = *o.x0;
    } else if (job.numcheck.x0) {
      x0 = *job.numcheck.x0;
    } else {
      throw InputError("numcheck needs an initial state (--x0 or numcheck.x0)");
    }
    const double t_end = o.t_end.value_or(job.numcheck.t_end.value_or(1.0));
    const double h = o.h.value_or(job.numcheck.h.value_or(1e-3));
    std::vector<double> alphas = !o.alphas.empty()             ? o.alphas
                                 : !job.numcheck.alphas.empty() ? job.numcheck.alphas
                                                                : std::vector<double>{0.1, 0.3, 0.7};

    Trajectory tr = integrate(sys, x0, t_end, h, cfg, tab);
    if (!o.csv.empty()) {
      std::ofstream f(o.csv, std::ios::binary);
      if (!f) throw InputError("cannot write '" + o.csv + "'");
      write_csv(f, tr);
    }
    Report rep = numcheck(sys, act, tr, alphas, cfg, tab);
    emit(rep, o, out);
    return exit_code(rep.verdict);
  });
}

}  // namespace liesynth
