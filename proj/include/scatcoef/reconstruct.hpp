#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scatcoef/medium.hpp"
#include "scatcoef/scattering_matrix.hpp"

namespace scatcoef {

// Uniform k_j = j dk, j = 1..K, trapezoid weights (last one halved; k = 0 excluded).
struct KGrid {
  std::vector<double> k;
  std::vector<double> weights;
  double k_max() const { return k.empty() ? 0.0 : k.back(); }
};
KGrid make_k_grid(double k_max, int K);

struct MomentOptions {
  double R = 1.0;
  int Nr = 300;              // collocation points r_i = r_min + (R - r_min) i / Nr
  double r_min = 0.0;
  double lambda_rel = 1e-12; // lambda = lambda_rel * sigma_max(M)^2
  bool weight_by_r = true;   // rows scaled by r_i
  double window_lo = 0.1;    // residual window [window_lo * R, R]
  double tolerance = 1e-3;   // residual above this flags the functional
  bool closed_form_l0 = true;  // l = 0 returns g = 1/k
};

// Weights g(k_j) with sum_j w_j g_j J_n(k_j r) J_m(k_j r) k_j^2 ~ r^{l-1}.
struct MomentFunctional {
  int n = 0, m = 0, l = 0;
  KGrid grid;
  std::vector<double> g;
  double lambda = 0.0;
  double residual = 0.0;       // max over collocation points in the window
  double residual_full = 0.0;  // max over all collocation points
  bool flagged = false;
  bool closed_form = false;
};

MomentFunctional moment_functional(int n, int l, const KGrid& grid, const MomentOptions& opt = {});
MomentFunctional moment_functional_general(int n, int m, int l, const KGrid& grid, const MomentOptions& opt = {});
// Orders 0..L sharing one factorization of the collocation matrix.
std::vector<MomentFunctional> moment_functionals(int n, int m, int L, const KGrid& grid, const MomentOptions& opt);
// max over r in points of |sum_j w_j g_j J_n J_m k_j^2 - r^{l-1}|
double functional_residual(const MomentFunctional& f, const std::vector<double>& r);

struct HCoefficients {
  int n = 0, m = 0, l = 0;
  double k_max = 0.0;
  cplx value;
};

HCoefficients h_coefficients(const std::vector<double>& k, const std::vector<cplx>& w_samples,
                             const MomentFunctional& f);

enum class Exchange {
  LeastSquares,  // L2 projection of e^{-i beta r} onto polynomials of degree <= L
  Taylor,        // truncated power series sum (-i beta)^l / l!
};

// Coefficients c_l with e^{-i 2 pi alpha r / R} ~ sum_l c_l r^l on [0, R].
std::vector<cplx> exchange_weights(int alpha, int L, double R, Exchange ex);

struct ReconstructionResult {
  enum class Kind { Radial, Angular, General };
  Kind kind = Kind::Radial;
  // Radial: r; angular: theta; general: r (outer) x theta (inner), row-major.
  std::vector<double> r, theta;
  std::vector<double> value;
  std::vector<double> imag;  // imaginary part left by truncation
  std::vector<double> truth;
  int L = 0, alpha_max = 0, p_max = 0, l_max = 0;
  double k_max = 0.0;
  std::vector<double> calibration;  // per harmonic p (radial: one entry)
  std::vector<int> harmonics;       // index of fourier / amplification entries
  std::vector<cplx> fourier;        // radial: F(alpha), angular: c_l
  std::vector<double> amplification;  // angular: 1/|C(m_l, n_l)|
  std::vector<int> missing;         // harmonics without a usable pair
  std::vector<std::string> notes;
  std::vector<HCoefficients> moments;  // multifrequency pipelines only
  double rel_error = -1.0;          // negative when no truth is set
};

// Relative L2 error of value against truth with the natural measure (dr, dtheta, r dr dtheta).
double relative_l2_error(const ReconstructionResult& res);
void set_truth(ReconstructionResult& res, const std::function<double(double, double)>& contrast);

struct RadialOptions {
  double eps0 = 1.0;
  Exchange exchange = Exchange::LeastSquares;
  double calibration = 1.0;
  int samples = 401;
  double growth_limit = 1.0;  // Taylor: max (2 pi alpha)^{L+1}/(L+1)!
};

// H over l = 0..L for one mode; contrast c(r) = sum_alpha F(alpha) e^{i 2 pi alpha r / R}.
ReconstructionResult radial_reconstruct(const std::vector<HCoefficients>& H, double R, int alpha_max,
                                        const RadialOptions& opt = {});

double angular_c(int m, int n, double k, double R);
// Same integral through the plane-wave representation of J_n J_m and the closed form of
// int_0^R r e^{i a r} dr, evaluated with an M x M uniform angle grid.
double angular_c_fourier(int m, int n, double k, double R, int M = 64);

struct AngularPair {
  int n = 0, m = 0;  // harmonic l = n - m
};

struct AngularOptions {
  double c_floor = 1e-12;  // relative to R^2/2
  int samples = 256;
};

// c_l = -W_{n_l m_l} / (2 pi omega^2 mu0 C(m_l, n_l)); contrast sum_l c_l e^{i l theta}.
// Pairs are tried in order per harmonic; default pair (0, -l).
ReconstructionResult angular_reconstruct(const ScatteringMatrix& W, const std::vector<AngularPair>& pairs,
                                         const Background& bg, double R, int l_max,
                                         const AngularOptions& opt = {});

struct MultiFrequencyOptions {
  int L = 8;
  int alpha_max = 4;
  int n = 0;  // radial pipeline mode
  MomentOptions moment;
  RadialOptions radial;
  bool calibrate = true;
};

// Constant 1/F_ref(0) from a constant-contrast round trip through the same functionals.
double calibration_constant(int n, int m, const std::vector<MomentFunctional>& fns, const Background& bg,
                            double R, const RadialOptions& opt);

// W samples W[j] on grid.k[j] (matrices of any order >= the modes used).
ReconstructionResult radial_pipeline(const std::vector<ScatteringMatrix>& W, const KGrid& grid,
                                     const Background& bg, double R, const MultiFrequencyOptions& opt);

struct GeneralOptions {
  MultiFrequencyOptions base;
  int p_max = 2;
  std::vector<AngularPair> pairs;  // per harmonic override; default (0, -p)
  int r_samples = 101;
  int theta_samples = 128;
};

ReconstructionResult general_reconstruct(const std::vector<ScatteringMatrix>& W, const KGrid& grid,
                                         const Background& bg, double R, const GeneralOptions& opt);

}  // namespace scatcoef
