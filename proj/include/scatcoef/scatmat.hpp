#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scatcoef/medium.hpp"
#include "scatcoef/scattering_matrix.hpp"

namespace scatcoef {

// A(theta_xi_p, theta_x_q) on uniform grids theta_xi_p = 2 pi p / P, theta_x_q = 2 pi q / Q.
struct FarFieldData {
  double k = 0.0;
  int P = 0, Q = 0;
  Eigen::MatrixXcd A;  // P x Q
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;

  double theta_xi(int p) const;
  double theta_x(int q) const;
};

// A = sum_{m,n} i^{m-n} e^{-i m theta_xi} e^{i n theta_x} W_nm
FarFieldData far_field_synthesize(const ScatteringMatrix& W, int P, int Q);
// Adds complex circular Gaussian noise with E|noise|^2 = sigma^2 per sample.
FarFieldData add_noise(const FarFieldData& data, double sigma, std::uint64_t seed);
ScatteringMatrix extract_w(const FarFieldData& data, int N);
// ||A - synthesize(extract(A, N))|| / ||A||; nonzero when content above order N aliases.
double extraction_residual(const FarFieldData& data, int N);
// Per-sample noise std from the residual of the order-N fit.
double estimate_sigma(const FarFieldData& data, int N);
// Multiplier i^e for integer e.
cplx ipow(int e);

struct DecayFit {
  int N = -1;               // extraction order, default (min(P, Q) - 1) / 2
  double sigma = -1.0;      // per-sample noise; negative uses the data's value
  bool estimate = false;    // estimate sigma from the fit residual instead
  double usable_factor = 3.0;  // entries above usable_factor * floor enter the fit
};

// Envelope amp * C^{2n} / n^{2n} fitted to m_n = (|W_nn| + |W_{-n,-n}|)/2.
struct TruncationReport {
  int N_data = 0;
  int N_selected = 0;
  double sigma = 0.0;
  double noise_floor = 0.0;
  double C = 0.0;
  double amplitude = 0.0;
  int usable = 0;
  std::vector<double> measured;  // n = 0..N_data
  std::vector<double> envelope;  // n = 0..N_data
};

TruncationReport select_truncation(const FarFieldData& data, const DecayFit& fit = {});
double decay_envelope(double amplitude, double C, int n);

ScatteringMatrix rule_rotate(const ScatteringMatrix& W, double theta);
ScatteringMatrix rule_conj_transpose(const ScatteringMatrix& W);

// Scaling rule: W of a medium dilated by s at wavenumber k equals W of the
// original medium at wavenumber s k.
struct ScalePrediction {
  double s = 1.0;
  double k_scaled = 0.0;  // wavenumber at which the undilated medium must reproduce W
  ScatteringMatrix predicted;
  std::string statement;
  double defect(const ScatteringMatrix& recomputed) const;
};
ScalePrediction rule_scale(const ScatteringMatrix& W_dilated, double s);

// W'_nm = sum_{|p|,|l| <= order} conj(u0_p(z)) u0_l(z) W_{n-p, m-l}, output order W.N - order.
struct TranslationResult {
  ScatteringMatrix W;
  double graf_residual = 0.0;  // tail mass of the truncated Graf coefficients
};
TranslationResult rule_translate(const ScatteringMatrix& W, Point z, int order);

// ||W - W^H|| / ||W||
double hermitian_defect(const ScatteringMatrix& W);
// ||W_nm - (-1)^{n+m} W_{-m,-n}|| / ||W||
double reciprocity_defect(const ScatteringMatrix& W);

}  // namespace scatcoef
