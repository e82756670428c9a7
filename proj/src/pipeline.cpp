#include "scatcoef/pipeline.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include <openssl/evp.h>
#include <openssl/opensslv.h>
#include <Eigen/Core>

#include "scatcoef/csv_io.hpp"
#include "scatcoef/errors.hpp"
#include "scatcoef/forward.hpp"
#include "scatcoef/parallel.hpp"
#include "scatcoef/sensitivity.hpp"

#ifndef SCATCOEF_VERSION
#define SCATCOEF_VERSION "unknown"
#endif

namespace scatcoef::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ValidationError(where + ": unknown key '" + it.key() + "'");
}

template <class T>
T get(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + "." + key + ": wrong type");
  }
}

std::string index_name(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.csv", stem, i);
  return buf;
}

bool grid_is_uniform(const std::vector<double>& k) {
  if (k.size() < 2) return false;
  const double dk = k.back() / static_cast<double>(k.size());
  for (std::size_t j = 0; j < k.size(); ++j)
    if (std::abs(k[j] - dk * static_cast<double>(j + 1)) > 1e-12 * k.back()) return false;
  return true;
}

struct RunDir {
  std::string dir;
  json outputs = json::object();
  std::vector<std::string> files;

  explicit RunDir(const std::string& d) : dir(d) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
  }
  void write(const std::string& name, const std::string& content) {
    const std::string path = (fs::path(dir) / name).string();
    csv::write_new_file(path, content);
    outputs[name] = sha256_hex(content);
    files.push_back(path);
  }
};

json environment() {
  return {{"version", SCATCOEF_VERSION},
          {"compiler", std::string("g++ ") + __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"openssl", OPENSSL_VERSION_TEXT},
          {"threads", thread_count()}};
}

RunSummary finish(RunDir& run, const std::string& command, const json& config, const json& inputs) {
  json manifest = {{"command", command}, {"environment", environment()}, {"config", config},
                   {"inputs", inputs},   {"outputs", run.outputs}};
  run.write("manifest_" + command + ".json", manifest.dump(2) + "\n");
  return {run.dir, run.files, manifest};
}

json hash_inputs(const std::vector<std::string>& files, std::vector<std::string>* contents) {
  json in = json::object();
  for (const auto& f : files) {
    std::string text = csv::read_file(f);
    in[f] = sha256_hex(text);
    if (contents) contents->push_back(std::move(text));
  }
  return in;
}

MediumSpec config_medium(const ExperimentConfig& c) {
  if (!c.medium) throw ValidationError("config: 'medium' is required for this command");
  return medium_from_json(*c.medium);
}

ScatteringMatrix forward(const MediumSpec& spec, double k, const ExperimentConfig& c) {
  if (c.solver == "radial") {
    if (!spec.is_radial()) throw ValidationError("solver 'radial' needs a radial medium");
    return radial_w(spec, k, c.N);
  }
  if (c.solver == "born") return born_w(spec, k, c.N);
  return ls_w(spec.is_grid() ? spec : sample_to_grid(spec, c.ls_nx), k, c.N);
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw SolverError("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::vector<std::string> discover(const std::string& dir, const std::string& prefix) {
  if (!fs::is_directory(dir)) throw ValidationError("input directory '" + dir + "' does not exist");
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind(prefix, 0) == 0 && e.path().extension() == ".csv")
      out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentConfig parse_config(const json& j, const std::string& base_dir) {
  if (!j.is_object() || j.empty()) throw ValidationError("config: empty or not a JSON object");
  require_keys(j, {"medium", "medium_file", "frequencies", "solver", "N", "noise", "P", "Q", "ls_nx",
                   "reconstruction", "output_dir"},
               "config");
  ExperimentConfig c;
  if (j.contains("medium") && j.contains("medium_file"))
    throw ValidationError("config: give either 'medium' or 'medium_file', not both");
  if (j.contains("medium")) {
    c.medium = j.at("medium");
  } else if (j.contains("medium_file")) {
    const fs::path p = fs::path(base_dir) / get<std::string>(j, "medium_file", "", "config");
    try {
      c.medium = json::parse(csv::read_file(p.string()));
    } catch (const json::parse_error& e) {
      throw ValidationError("medium file '" + p.string() + "': " + e.what());
    }
  }
  if (c.medium) {
    // Round trip through the medium parser to validate and normalize.
    c.medium = medium_to_json(medium_from_json(*c.medium));
  }

  if (j.contains("frequencies")) {
    const json& f = j.at("frequencies");
    if (f.is_array()) {
      try {
        c.k = f.get<std::vector<double>>();
      } catch (const json::exception&) {
        throw ValidationError("config.frequencies: expected numbers");
      }
      c.k_uniform = grid_is_uniform(c.k);
    } else if (f.is_object()) {
      require_keys(f, {"k_max", "count"}, "config.frequencies");
      const double km = get<double>(f, "k_max", 0.0, "config.frequencies");
      const int count = get<int>(f, "count", 0, "config.frequencies");
      if (!(km > 0.0) || count < 1) throw ValidationError("config.frequencies: need k_max > 0 and count >= 1");
      for (int i = 1; i <= count; ++i) c.k.push_back(km * i / count);
      c.k_uniform = count >= 2;
    } else {
      throw ValidationError("config.frequencies: expected a list or {k_max, count}");
    }
  } else {
    c.k = {1.0};
  }
  if (c.k.empty()) throw ValidationError("config.frequencies: empty");
  for (double k : c.k)
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("config.frequencies: wavenumbers must be positive");

  c.solver = get<std::string>(j, "solver", c.solver, "config");
  if (c.solver != "radial" && c.solver != "ls" && c.solver != "born")
    throw ValidationError("config.solver: expected radial, ls or born");
  c.N = get<int>(j, "N", c.N, "config");
  if (c.N < 0 || c.N > 200) throw ValidationError("config.N: out of range [0, 200]");
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    require_keys(n, {"sigma", "seed"}, "config.noise");
    c.sigma = get<double>(n, "sigma", 0.0, "config.noise");
    c.seed = get<std::uint64_t>(n, "seed", 0, "config.noise");
    if (!(c.sigma >= 0.0)) throw ValidationError("config.noise.sigma: must be >= 0");
  }
  c.P = get<int>(j, "P", 0, "config");
  c.Q = get<int>(j, "Q", 0, "config");
  if (c.P < 0 || c.Q < 0) throw ValidationError("config.P/Q: must be >= 0");
  if (c.P_resolved() < 2 * c.N + 1 || c.Q_resolved() < 2 * c.N + 1)
    throw ValidationError("config.P/Q: need at least 2N+1 samples per angle");
  c.ls_nx = get<int>(j, "ls_nx", c.ls_nx, "config");
  if (c.ls_nx < 8) throw ValidationError("config.ls_nx: must be >= 8");
  c.output_dir = get<std::string>(j, "output_dir", c.output_dir, "config");

  if (j.contains("reconstruction")) {
    const json& r = j.at("reconstruction");
    const std::string w = "config.reconstruction";
    require_keys(r, {"kind", "L", "alpha_max", "p_max", "lambda", "k_max", "n", "l_max", "k_index", "calibrate",
                     "exchange", "samples"},
                 w);
    auto& p = c.recon;
    p.kind = get<std::string>(r, "kind", p.kind, w);
    p.L = get<int>(r, "L", p.L, w);
    p.alpha_max = get<int>(r, "alpha_max", p.alpha_max, w);
    p.p_max = get<int>(r, "p_max", p.p_max, w);
    p.lambda = get<double>(r, "lambda", p.lambda, w);
    p.k_max = get<double>(r, "k_max", p.k_max, w);
    p.n = get<int>(r, "n", p.n, w);
    p.l_max = get<int>(r, "l_max", p.l_max, w);
    p.k_index = get<int>(r, "k_index", p.k_index, w);
    p.calibrate = get<bool>(r, "calibrate", p.calibrate, w);
    p.exchange = get<std::string>(r, "exchange", p.exchange, w);
    p.samples = get<int>(r, "samples", p.samples, w);
  }
  const auto& p = c.recon;
  if (p.kind != "radial" && p.kind != "angular" && p.kind != "general")
    throw ValidationError("config.reconstruction.kind: expected radial, angular or general");
  if (p.exchange != "least_squares" && p.exchange != "taylor")
    throw ValidationError("config.reconstruction.exchange: expected least_squares or taylor");
  if (p.L < 0 || p.alpha_max < 0 || p.p_max < 0 || p.samples < 2 || !(p.lambda >= 0.0) || p.k_max < 0.0)
    throw ValidationError("config.reconstruction: negative or invalid parameter");
  if (p.k_index < 0 || p.k_index >= static_cast<int>(c.k.size()))
    throw ValidationError("config.reconstruction.k_index: out of range");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  const std::string text = csv::read_file(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ValidationError("config '" + path + "' is empty");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "': " + e.what());
  }
  return parse_config(j, fs::path(path).parent_path().string().empty() ? "." : fs::path(path).parent_path().string());
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  if (c.medium) j["medium"] = *c.medium;
  j["frequencies"] = c.k;
  j["solver"] = c.solver;
  j["N"] = c.N;
  j["noise"] = {{"sigma", c.sigma}, {"seed", c.seed}};
  j["P"] = c.P_resolved();
  j["Q"] = c.Q_resolved();
  j["ls_nx"] = c.ls_nx;
  const auto& p = c.recon;
  j["reconstruction"] = {{"kind", p.kind},       {"L", p.L},           {"alpha_max", p.alpha_max},
                         {"p_max", p.p_max},     {"lambda", p.lambda}, {"k_max", p.k_max},
                         {"n", p.n},             {"l_max", p.l_max < 0 ? c.N : p.l_max},
                         {"k_index", p.k_index}, {"calibrate", p.calibrate},
                         {"exchange", p.exchange}, {"samples", p.samples}};
  j["output_dir"] = c.output_dir;
  return j;
}

RunSummary cmd_simulate(const ExperimentConfig& c) {
  const MediumSpec spec = config_medium(c);
  std::vector<ScatteringMatrix> W(c.k.size());
  for (std::size_t i = 0; i < c.k.size(); ++i) {
    try {
      W[i] = forward(spec, c.k[i], c);
    } catch (const ResonanceError& e) {
      throw ResonanceError("simulate (k=" + csv::format_number(c.k[i]) + "): " + e.what(), e.mode());
    } catch (const SolverError& e) {
      throw SolverError("simulate (k=" + csv::format_number(c.k[i]) + "): " + e.what());
    }
  }
  RunDir run(c.output_dir);
  std::string index = "index,k,w_file,farfield_file\n";
  for (std::size_t i = 0; i < c.k.size(); ++i) {
    FarFieldData d = far_field_synthesize(W[i], c.P_resolved(), c.Q_resolved());
    // One stream per frequency so results do not depend on evaluation order.
    const std::uint64_t seed = c.seed + i;
    if (c.sigma > 0.0) {
      d = add_noise(d, c.sigma, seed);
    } else {
      d.rng_seed = seed;
    }
    run.write(index_name("W", i), csv::w_to_string(W[i]));
    run.write(index_name("farfield", i), csv::farfield_to_string(d));
    index += std::to_string(i) + "," + csv::format_number(c.k[i]) + "," + index_name("W", i) + "," +
             index_name("farfield", i) + "\n";
  }
  run.write("frequencies.csv", index);
  return finish(run, "simulate", config_to_json(c), json::object());
}

RunSummary cmd_extract(const ExperimentConfig& c, const std::vector<std::string>& files) {
  if (files.empty()) throw ValidationError("extract: no far-field files given");
  std::vector<std::string> text;
  const json inputs = hash_inputs(files, &text);
  std::vector<FarFieldData> data;
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      data.push_back(csv::farfield_from_string(text[i]));
    } catch (const ValidationError& e) {
      throw ValidationError(files[i] + ": " + e.what());
    }
  }
  RunDir run(c.output_dir);
  json reports = json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const ScatteringMatrix W = extract_w(data[i], c.N);
    DecayFit fit;
    fit.N = c.N;
    const TruncationReport t = select_truncation(data[i], fit);
    reports.push_back({{"file", files[i]},
                       {"k", data[i].k},
                       {"N_data", t.N_data},
                       {"N_selected", t.N_selected},
                       {"sigma", t.sigma},
                       {"noise_floor", t.noise_floor},
                       {"C", num(t.C)},
                       {"amplitude", num(t.amplitude)},
                       {"usable", t.usable},
                       {"measured", t.measured},
                       {"envelope", t.envelope},
                       {"extraction_residual", extraction_residual(data[i], c.N)}});
    run.write(index_name("W", i), csv::w_to_string(W));
  }
  run.write("truncation.json", reports.dump(2) + "\n");
  return finish(run, "extract", config_to_json(c), inputs);
}

RunSummary cmd_reconstruct(const ExperimentConfig& c, const std::vector<std::string>& files) {
  if (files.size() != c.k.size())
    throw ValidationError("reconstruct: " + std::to_string(files.size()) + " W files for " +
                          std::to_string(c.k.size()) + " configured frequencies");
  std::vector<std::string> text;
  const json inputs = hash_inputs(files, &text);
  std::vector<ScatteringMatrix> W;
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      W.push_back(csv::w_from_string(text[i], c.k[i]));
    } catch (const ValidationError& e) {
      throw ValidationError(files[i] + ": " + e.what());
    }
  }
  std::optional<MediumSpec> truth;
  if (c.medium) truth = medium_from_json(*c.medium);
  const Background bg = truth ? truth->background : Background{};
  const double R = truth ? truth->R : 1.0;
  if (!truth) throw ValidationError("reconstruct: 'medium' is required for the background and radius");

  const auto& p = c.recon;
  ReconstructionResult res;
  if (p.kind == "angular") {
    res = angular_reconstruct(W[static_cast<std::size_t>(p.k_index)], {}, bg, R, p.l_max < 0 ? c.N : p.l_max,
                              AngularOptions{1e-12, p.samples});
  } else {
    if (!c.k_uniform) throw ValidationError("reconstruct: multifrequency pipelines need a uniform grid k_j = j dk");
    std::size_t K = c.k.size();
    if (p.k_max > 0.0) {
      K = 0;
      while (K < c.k.size() && c.k[K] <= p.k_max * (1.0 + 1e-12)) ++K;
      if (K < 2) throw ValidationError("reconstruct: k_max keeps fewer than two frequencies");
    }
    const KGrid grid = make_k_grid(c.k[K - 1], static_cast<int>(K));
    W.resize(K);
    MultiFrequencyOptions mo;
    mo.L = p.L;
    mo.alpha_max = p.alpha_max;
    mo.n = p.n;
    mo.calibrate = p.calibrate;
    mo.moment.lambda_rel = p.lambda;
    mo.radial.exchange = p.exchange == "taylor" ? Exchange::Taylor : Exchange::LeastSquares;
    mo.radial.samples = p.samples;
    if (p.kind == "radial") {
      res = radial_pipeline(W, grid, bg, R, mo);
    } else {
      GeneralOptions go;
      go.base = mo;
      go.p_max = p.p_max;
      res = general_reconstruct(W, grid, bg, R, go);
    }
  }
  if (!truth->nonmagnetic()) res.notes.push_back("medium has mu contrast; reconstruction assumes mu = mu0");
  const MediumSpec& m = *truth;
  const bool angular = p.kind == "angular";
  set_truth(res, [&](double r, double th) {
    const double rr = angular ? 0.5 * R : r;
    return m.eps_at(rr * std::cos(th), rr * std::sin(th)) - m.background.eps0;
  });

  RunDir run(c.output_dir);
  run.write("reconstruction.csv", csv::reconstruction_to_string(res));
  if (!res.moments.empty()) run.write("moments.csv", csv::h_to_string(res.moments));
  json summary = {{"kind", p.kind},
                  {"rel_error", num(res.rel_error)},
                  {"k_max", res.k_max},
                  {"L", res.L},
                  {"alpha_max", res.alpha_max},
                  {"p_max", res.p_max},
                  {"l_max", res.l_max},
                  {"calibration", res.calibration},
                  {"harmonics", res.harmonics},
                  {"amplification", res.amplification},
                  {"missing", res.missing},
                  {"notes", res.notes}};
  run.write("summary.json", summary.dump(2) + "\n");
  return finish(run, "reconstruct", config_to_json(c), inputs);
}

bool VerifyReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.verdict == "FAIL"; });
}

json VerifyReport::to_json() const {
  json a = json::array();
  for (const auto& c : checks)
    a.push_back({{"name", c.name},
                 {"value", num(c.value)},
                 {"lower", num(c.lower)},
                 {"upper", num(c.upper)},
                 {"verdict", c.verdict},
                 {"detail", c.detail}});
  return {{"passed", passed()}, {"checks", a}};
}

VerifySettings default_verify_settings() {
  VerifySettings s;
  s.medium = make_radial(Background{}, 1.0, {2.0, 2.0}, {1.0, 1.0});
  return s;
}

VerifySettings verify_settings(const ExperimentConfig& c) {
  VerifySettings s;
  s.medium = config_medium(c);
  if (!s.medium.is_radial()) throw ValidationError("verify: the property suite needs a radial medium");
  s.k = c.k.front();
  s.N = c.N;
  s.ls_nx = c.ls_nx;
  return s;
}

VerifyReport run_verify(const VerifySettings& s, const VerifyHooks& hooks) {
  const auto synth = hooks.synthesize ? hooks.synthesize
                                      : [](const ScatteringMatrix& W, int P, int Q) { return far_field_synthesize(W, P, Q); };
  const MediumSpec& spec = s.medium;
  if (!spec.is_radial()) throw ValidationError("verify: the property suite needs a radial medium");
  const double k = s.k, R = spec.R;
  const int N = s.N;
  VerifyReport rep;
  auto add = [&](std::string name, double v, double lo, double hi, std::string detail = {}) {
    const bool ok = std::isfinite(v) && v >= lo && v <= hi;
    rep.checks.push_back({std::move(name), v, lo, hi, ok ? "PASS" : "FAIL", std::move(detail)});
  };
  const double inf = std::numeric_limits<double>::infinity();

  const ScatteringMatrix W = radial_w(spec, k, N);
  const int P = 2 * N + 3;
  const FarFieldData A = synth(W, P, P);
  add("extract_synthesize_roundtrip", relative_difference(extract_w(A, N), W), -inf, 1e-12);

  const MediumSpec grid = sample_to_grid(spec, s.ls_nx);
  {
    LsSolver solver(grid, k);
    const FieldSolution sol = solver.solve(solver.plane_wave(0.0), INT_MIN);
    const double rho = 1000.0 * R;
    const cplx pre = cplx(0.0, -0.25) * std::sqrt(2.0 / (kPi * k * rho)) * std::polar(1.0, k * rho - kPi / 4.0);
    double num2 = 0.0, den2 = 0.0;
    for (int q = 0; q < A.Q; ++q) {
      const double th = A.theta_x(q);
      const cplx direct = solver.scattered(sol, {rho * std::cos(th), rho * std::sin(th)});
      const cplx pred = pre * A.A(0, q);
      num2 += std::norm(direct - pred);
      den2 += std::norm(pred);
    }
    add("far_field_vs_direct_field", std::sqrt(num2 / den2), -inf, 2e-2,
        "ls grid nx=" + std::to_string(s.ls_nx) + ", radius 1000R");
    add("radial_vs_ls", relative_difference(ls_w(grid, k, N), W), -inf, 2e-2,
        "ls grid nx=" + std::to_string(s.ls_nx));
  }

  add("reciprocity", reciprocity_defect(W), -inf, 1e-10);
  rep.checks.push_back({"hermitian_defect", hermitian_defect(W), -inf, inf, "INFO",
                        "second order in the contrast; reported only"});
  add("rotation_rule", relative_difference(rule_rotate(W, 0.7), W), -inf, 1e-12, "rotation-invariant medium");
  {
    const double sc = 1.5;
    const ScalePrediction pr = rule_scale(radial_w(scale_radial(spec, sc), k, N), sc);
    add("scaling_rule", pr.defect(radial_w(spec, pr.k_scaled, N)), -inf, 1e-9);
  }

  const Background& bg = spec.background;
  const MediumSpec base = make_radial(bg, R, {bg.eps0, bg.eps0}, {bg.mu0, bg.mu0});
  for (int n = 0; n <= std::min(2, N); ++n)
    add("quadratic_identity_n" + std::to_string(n), quadratic_identity_check(spec, base, k, n), -inf, 1e-6);

  const ContrastNorm cn = contrast_norm(spec);
  if (cn.eps_hat > 0.0) {
    const auto& rp = spec.radial();
    Perturbation pert{RadialPerturbation{rp.eps.plus(RadialField::constant(R, bg.eps0), -1.0),
                                         rp.inv_mu.plus(RadialField::constant(R, 1.0 / bg.mu0), -1.0)}};
    double rem[3];
    for (int i = 0; i < 3; ++i) {
      const MediumSpec m = apply_perturbation(base, pert, 4e-2 / std::pow(2.0, i) / cn.eps_hat);
      rem[i] = (radial_w(m, k, N).w - born_w(m, k, N).w).norm();
    }
    add("born_remainder_ratio", std::max(rem[1] / rem[0], rem[2] / rem[1]), 0.0, 0.35,
        "max of successive ratios for contrast 4e-2, 2e-2, 1e-2");
    add("born_remainder_ratio_min", std::min(rem[1] / rem[0], rem[2] / rem[1]), 0.20, inf);
  }

  {
    std::vector<double> rs(33), bump(33), zero(33, 0.0);
    for (int i = 0; i <= 32; ++i) {
      rs[i] = R * i / 32.0;
      bump[i] = std::pow(std::sin(kPi * rs[i] / R), 2);
    }
    const RadialField b = RadialField::pchip(rs, bump), z = RadialField::pchip(rs, zero);
    const Perturbation perts[2] = {Perturbation{RadialPerturbation{b, z}}, Perturbation{RadialPerturbation{z, b}}};
    const char* names[2] = {"sensitivity_fd_eps", "sensitivity_fd_inv_mu"};
    for (int j = 0; j < 2; ++j) {
      const ScatteringMatrix S = born_sensitivity(spec, k, N, perts[j], SensitivityForm::Adjoint);
      double rem[3];
      for (int i = 0; i < 3; ++i) {
        const double t = 2e-2 / std::pow(2.0, i);
        rem[i] = (radial_w(apply_perturbation(spec, perts[j], t), k, N).w - W.w - t * S.w).norm();
      }
      const double r1 = rem[1] / rem[0], r2 = rem[2] / rem[1];
      add(names[j], std::max(r1, r2), 0.0, 0.35, "max of successive ratios, step 2e-2 halved twice");
      add(std::string(names[j]) + "_min", std::min(r1, r2), 0.20, inf);
    }
  }

  if (k * R <= 2.0 && N >= 6) {
    double drop = inf;
    for (int n = 5; n < N; ++n) {
      const double a = std::abs(W(n, n)), b = std::abs(W(n + 1, n + 1));
      if (a > 1e-280 && b > 1e-280) drop = std::min(drop, std::log(a) - std::log(b));
    }
    add("decay_log_drop", drop, 2.0, inf, "min over n >= 5 of log|W_nn| - log|W_n+1,n+1|");
  }
  return rep;
}

RunSummary cmd_verify(const VerifySettings& s, const std::string& out_dir, const json& config, VerifyReport& report,
                      const VerifyHooks& hooks) {
  report = run_verify(s, hooks);
  RunDir run(out_dir);
  run.write("verify_report.json", report.to_json().dump(2) + "\n");
  json cfg = config;
  if (cfg.is_null()) {
    cfg = {{"medium", medium_to_json(s.medium)}, {"frequencies", {s.k}}, {"N", s.N}, {"ls_nx", s.ls_nx},
           {"output_dir", out_dir}};
  }
  return finish(run, "verify", cfg, json::object());
}

}  // namespace scatcoef::pipeline
