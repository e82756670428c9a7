#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "scatcoef/csv_io.hpp"
#include "scatcoef/errors.hpp"
#include "scatcoef/pipeline.hpp"

using namespace scatcoef;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / ("scatcoef_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string cli() {
  const char* p = std::getenv("SCATCOEF_CLI");
  return p ? p : "scatcoef_cli";
}

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " > " + (scratch() / "last.log").string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string write_config(const std::string& name, const json& j) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << j.dump(2);
  return p.string();
}

json disk_medium(double eps) {
  return {{"R", 1.0}, {"profile", {{"kind", "radial"}, {"eps", {eps, eps}}, {"mu", {1.0, 1.0}}}}};
}

std::string slurp(const fs::path& p) { return csv::read_file(p.string()); }

}  // namespace

TEST_CASE("zero contrast gives all-zero W files") {
  const auto cfg = write_config("zero.json", {{"medium", disk_medium(1.0)}, {"frequencies", {0.5, 1.0}}, {"N", 3}});
  const fs::path out = scratch() / "zero";
  REQUIRE(run("simulate --config " + cfg + " --out " + out.string()) == 0);
  for (const char* f : {"W_0000.csv", "W_0001.csv"}) {
    const ScatteringMatrix W = csv::w_from_string(slurp(out / f), 1.0);
    CHECK(W.N == 3);
    CHECK(W.norm() == 0.0);
  }
  CHECK(fs::exists(out / "manifest_simulate.json"));
  CHECK(fs::exists(out / "frequencies.csv"));
}

TEST_CASE("fixed seed and any thread count give byte-identical outputs") {
  const auto cfg = write_config(
      "seeded.json", {{"medium", disk_medium(2.0)}, {"frequencies", {1.0, 2.0}}, {"N", 4}, {"noise", {{"sigma", 1e-3}, {"seed", 9}}}});
  const fs::path a = scratch() / "seed_a", b = scratch() / "seed_b", c = scratch() / "seed_c";
  REQUIRE(run("simulate --config " + cfg + " --out " + a.string() + " --threads 1") == 0);
  REQUIRE(run("simulate --config " + cfg + " --out " + b.string() + " --threads 3") == 0);
  REQUIRE(run("simulate --config " + cfg + " --out " + c.string() + " --seed 10") == 0);
  for (const char* f : {"W_0000.csv", "farfield_0000.csv", "farfield_0001.csv"}) CHECK(slurp(a / f) == slurp(b / f));
  CHECK(slurp(a / "farfield_0000.csv") != slurp(c / "farfield_0000.csv"));
}

TEST_CASE("outputs are write-once") {
  const auto cfg = write_config("once.json", {{"medium", disk_medium(2.0)}, {"N", 2}});
  const fs::path out = scratch() / "once";
  REQUIRE(run("simulate --config " + cfg + " --out " + out.string()) == 0);
  CHECK(run("simulate --config " + cfg + " --out " + out.string()) == 1);
}

TEST_CASE("radial and ls solvers agree on the same medium") {
  const json base = {{"medium", disk_medium(2.0)}, {"frequencies", {1.0}}, {"N", 4}, {"ls_nx", 32}};
  json ls = base;
  ls["solver"] = "ls";
  const fs::path a = scratch() / "solver_radial", b = scratch() / "solver_ls";
  REQUIRE(run("simulate --config " + write_config("sr.json", base) + " --out " + a.string()) == 0);
  REQUIRE(run("simulate --config " + write_config("sl.json", ls) + " --out " + b.string()) == 0);
  const ScatteringMatrix Wr = csv::w_from_string(slurp(a / "W_0000.csv"), 1.0);
  const ScatteringMatrix Wl = csv::w_from_string(slurp(b / "W_0000.csv"), 1.0);
  CHECK(relative_difference(Wl, Wr) < 1e-2);
}

TEST_CASE("simulate, extract and the manifest") {
  const auto cfg = write_config("chain.json", {{"medium", disk_medium(2.0)}, {"frequencies", {1.0}}, {"N", 6}, {"P", 16}, {"Q", 16}});
  const fs::path sim = scratch() / "chain_sim", ext = scratch() / "chain_ext";
  REQUIRE(run("simulate --config " + cfg + " --out " + sim.string()) == 0);
  REQUIRE(run("extract --config " + cfg + " --out " + ext.string() + " --input " + sim.string()) == 0);
  const ScatteringMatrix a = csv::w_from_string(slurp(sim / "W_0000.csv"), 1.0);
  const ScatteringMatrix b = csv::w_from_string(slurp(ext / "W_0000.csv"), 1.0);
  CHECK(relative_difference(b, a) < 1e-12);
  const json t = json::parse(slurp(ext / "truncation.json"));
  CHECK(t.at(0).at("N_selected").get<int>() == 6);

  const json man = json::parse(slurp(sim / "manifest_simulate.json"));
  for (auto it = man.at("outputs").begin(); it != man.at("outputs").end(); ++it)
    CHECK(it.value().get<std::string>() == pipeline::sha256_hex(slurp(sim / it.key())));
  CHECK(man.at("config").at("P").get<int>() == 16);
  CHECK(man.at("config").at("noise").at("seed").get<int>() == 0);

  // Re-running from the manifest's resolved config reproduces every data file.
  json again = man.at("config");
  again["output_dir"] = (scratch() / "chain_again").string();
  REQUIRE(run("simulate --config " + write_config("again.json", again)) == 0);
  const json man2 = json::parse(slurp(scratch() / "chain_again" / "manifest_simulate.json"));
  for (const char* f : {"W_0000.csv", "farfield_0000.csv"}) CHECK(man2.at("outputs").at(f) == man.at("outputs").at(f));
}

TEST_CASE("reconstruct from simulated multifrequency data") {
  std::vector<double> eps(41);
  for (int i = 0; i <= 40; ++i) eps[i] = 1.0 + 1e-3 * std::pow(std::sin(std::numbers::pi * i / 40.0), 2);
  const json medium = {{"R", 1.0}, {"profile", {{"kind", "radial"}, {"eps", eps}, {"mu", std::vector<double>(41, 1.0)}}}};
  const auto cfg = write_config("rec.json", {{"medium", medium},
                                             {"frequencies", {{"k_max", 20.0}, {"count", 200}}},
                                             {"solver", "born"},
                                             {"N", 0},
                                             {"reconstruction", {{"kind", "radial"}}}});
  const fs::path sim = scratch() / "rec_sim", rec = scratch() / "rec_out";
  REQUIRE(run("simulate --config " + cfg + " --out " + sim.string()) == 0);
  REQUIRE(run("reconstruct --config " + cfg + " --out " + rec.string() + " --input " + sim.string()) == 0);
  const json s = json::parse(slurp(rec / "summary.json"));
  CHECK(s.at("rel_error").get<double>() < 0.15);
  CHECK(slurp(rec / "reconstruction.csv").rfind("r,value,truth\n", 0) == 0);
  CHECK(slurp(rec / "moments.csv").rfind("n,m,l,re,im\n", 0) == 0);
}

TEST_CASE("verify: default suite passes, mutation is caught") {
  const fs::path out = scratch() / "verify";
  CHECK(run("verify --out " + out.string()) == 0);
  const json rep = json::parse(slurp(out / "verify_report.json"));
  CHECK(rep.at("passed").get<bool>());
  for (const auto& c : rep.at("checks")) CHECK(c.at("verdict") != "FAIL");

  pipeline::VerifyHooks bad;
  bad.synthesize = [](const ScatteringMatrix& W, int P, int Q) {
    FarFieldData d = far_field_synthesize(W, P, Q);
    d.A = -d.A;
    return d;
  };
  const pipeline::VerifyReport r = pipeline::run_verify(pipeline::default_verify_settings(), bad);
  CHECK_FALSE(r.passed());
  int failed = 0;
  for (const auto& c : r.checks) failed += c.verdict == "FAIL";
  CHECK(failed >= 2);
}

TEST_CASE("usage and validation errors exit with 1") {
  const fs::path empty = scratch() / "empty.json";
  std::ofstream(empty) << "";
  CHECK(run("verify --config " + empty.string()) == 1);
  CHECK(run("verify --config " + write_config("emptyobj.json", json::object())) == 1);
  CHECK(run("simulate --config " + write_config("unknown.json", {{"medium", disk_medium(2.0)}, {"bogus", 1}})) == 1);
  CHECK(run("simulate --config " + write_config("badsolver.json", {{"medium", disk_medium(2.0)}, {"solver", "fem"}})) == 1);
  CHECK(run("simulate") == 1);
  CHECK(run("") == 1);
  CHECK(run("extract --config " + write_config("noin.json", {{"medium", disk_medium(2.0)}})) == 1);
}

TEST_CASE("solver failures exit with 2") {
  // eps = 4 doubles the interior wavenumber; k1 R at the first zero of J_1' is a resonance.
  const auto cfg = write_config("res.json", {{"medium", disk_medium(4.0)}, {"frequencies", {1.841183781340659 / 2.0}}, {"N", 2}});
  CHECK(run("simulate --config " + cfg + " --out " + (scratch() / "res").string()) == 2);
}

TEST_CASE("config parsing resolves defaults") {
  const pipeline::ExperimentConfig c = pipeline::parse_config({{"medium", disk_medium(2.0)}, {"N", 5}});
  CHECK(c.P_resolved() == 11);
  CHECK(c.k == std::vector<double>{1.0});
  const json j = pipeline::config_to_json(c);
  CHECK(j.at("reconstruction").at("l_max").get<int>() == 5);
  CHECK_THROWS_AS(pipeline::parse_config({{"N", 5}, {"P", 4}}), ValidationError);
  CHECK_THROWS_AS(pipeline::parse_config({{"frequencies", {{"k_max", 1.0}}}}), ValidationError);
  const pipeline::ExperimentConfig u = pipeline::parse_config({{"frequencies", {{"k_max", 2.0}, {"count", 4}}}});
  CHECK(u.k_uniform);
  CHECK(u.k.back() == 2.0);
}
