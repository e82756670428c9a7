#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scatcoef/medium.hpp"
#include "scatcoef/reconstruct.hpp"
#include "scatcoef/scatmat.hpp"

namespace scatcoef::pipeline {

struct ReconstructionParams {
  std::string kind = "radial";  // radial | angular | general
  int L = 8;
  int alpha_max = 4;
  int p_max = 2;
  double lambda = 1e-12;  // relative Tikhonov parameter
  double k_max = 0.0;     // 0 uses every configured frequency
  int n = 0;              // mode index of the radial pipeline
  int l_max = -1;         // angular; negative means N
  int k_index = 0;        // angular: frequency used
  bool calibrate = true;
  std::string exchange = "least_squares";  // least_squares | taylor
  int samples = 401;
};

struct ExperimentConfig {
  std::optional<nlohmann::json> medium;  // inline form, file references resolved
  std::vector<double> k;
  bool k_uniform = false;  // k_j = j k_max / count
  std::string solver = "radial";  // radial | ls | born
  int N = 8;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  int P = 0, Q = 0;  // 0 means 2N + 1
  int ls_nx = 48;    // grid used when the ls solver meets a non-grid medium
  ReconstructionParams recon;
  std::string output_dir = "run";

  int P_resolved() const { return P > 0 ? P : 2 * N + 1; }
  int Q_resolved() const { return Q > 0 ? Q : 2 * N + 1; }
};

// Strict: unknown keys, wrong types and out-of-range values are ValidationErrors.
ExperimentConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& c);

struct RunSummary {
  std::string dir;
  std::vector<std::string> outputs;
  nlohmann::json manifest;
};

std::string sha256_hex(const std::string& data);
// Sorted files in dir whose names start with prefix and end with ".csv".
std::vector<std::string> discover(const std::string& dir, const std::string& prefix);

RunSummary cmd_simulate(const ExperimentConfig& c);
RunSummary cmd_extract(const ExperimentConfig& c, const std::vector<std::string>& farfield_files);
RunSummary cmd_reconstruct(const ExperimentConfig& c, const std::vector<std::string>& w_files);

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::string verdict;  // PASS | FAIL | INFO
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

struct VerifyHooks {
  std::function<FarFieldData(const ScatteringMatrix&, int, int)> synthesize;
};

struct VerifySettings {
  MediumSpec medium;
  double k = 1.0;
  int N = 8;
  int ls_nx = 32;
};

// Homogeneous disk eps = 2 eps0, R = 1, k = 1, N = 8.
VerifySettings default_verify_settings();
VerifySettings verify_settings(const ExperimentConfig& c);
VerifyReport run_verify(const VerifySettings& s, const VerifyHooks& hooks = {});
// Writes verify_report.json and a manifest into out_dir.
RunSummary cmd_verify(const VerifySettings& s, const std::string& out_dir, const nlohmann::json& config,
                      VerifyReport& report, const VerifyHooks& hooks = {});

}  // namespace scatcoef::pipeline
