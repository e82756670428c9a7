// scatcoef_cli: config-driven simulate / extract / reconstruct / verify.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scatcoef/errors.hpp"
#include "scatcoef/parallel.hpp"
#include "scatcoef/pipeline.hpp"

namespace {

enum Exit { kOk = 0, kValidation = 1, kSolver = 2, kVerification = 3 };

using namespace scatcoef;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string input;
  std::vector<std::string> files;
};

pipeline::ExperimentConfig resolve(const Common& o) {
  if (o.config.empty()) throw ValidationError("--config is required");
  auto c = pipeline::load_config(o.config);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  return c;
}

std::vector<std::string> inputs(const Common& o, const char* prefix) {
  if (!o.files.empty()) return o.files;
  if (o.input.empty()) throw ValidationError("give input files or --input DIR");
  return pipeline::discover(o.input, prefix);
}

void report(const pipeline::RunSummary& s) {
  for (const auto& f : s.outputs) std::cout << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering-coefficient experiments for 2D penetrable media"};
  app.require_subcommand(1);
  Common o;
  auto common = [&](CLI::App* sc) {
    sc->add_option("--config", o.config, "JSON experiment config");
    sc->add_option("--out", o.out, "output directory (overrides output_dir)");
    sc->add_option("--seed", o.seed, "noise seed (overrides noise.seed)");
    sc->add_option("--threads", o.threads, "worker threads; results do not depend on it")->check(CLI::NonNegativeNumber);
  };
  auto* sim = app.add_subcommand("simulate", "forward solve, far-field synthesis and noise");
  auto* ext = app.add_subcommand("extract", "recover W and a truncation report from far-field files");
  auto* rec = app.add_subcommand("reconstruct", "linearized reconstruction from W files");
  auto* ver = app.add_subcommand("verify", "run the invariant suite and write a JSON report");
  for (auto* sc : {sim, ext, rec, ver}) common(sc);
  for (auto* sc : {ext, rec}) {
    sc->add_option("--input", o.input, "directory searched for input files");
    sc->add_option("files", o.files, "input files in frequency order");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }
  if (o.threads > 0) set_thread_count(o.threads);

  try {
    if (sim->parsed()) {
      report(pipeline::cmd_simulate(resolve(o)));
    } else if (ext->parsed()) {
      const auto c = resolve(o);
      report(pipeline::cmd_extract(c, inputs(o, "farfield_")));
    } else if (rec->parsed()) {
      const auto c = resolve(o);
      const auto s = pipeline::cmd_reconstruct(c, inputs(o, "W_"));
      report(s);
    } else {
      pipeline::VerifySettings s = pipeline::default_verify_settings();
      nlohmann::json cfg;
      std::string out = o.out.empty() ? "verify" : o.out;
      if (!o.config.empty()) {
        const auto c = resolve(o);
        s = pipeline::verify_settings(c);
        cfg = pipeline::config_to_json(c);
        out = c.output_dir;
      }
      pipeline::VerifyReport rep;
      report(pipeline::cmd_verify(s, out, cfg, rep));
      for (const auto& c : rep.checks)
        std::printf("%-4s %-32s %.3e\n", c.verdict.c_str(), c.name.c_str(), c.value);
      if (!rep.passed()) return kVerification;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kOk;
}
