#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "scatcoef/medium.hpp"
#include "scatcoef/quadrature.hpp"
#include "scatcoef/scattering_matrix.hpp"

namespace scatcoef {

// Regular interior solution of (1/r)(r u'/mu)' + (omega^2 eps - n^2/(mu r^2)) u = 0,
// scaled so that max(|u(R)|, R |flux(R)|) = 1. flux = u'/mu.
struct RadialModeSolution {
  int n = 0;
  double k = 0.0;
  std::vector<double> r, u, flux;
  double u_R = 0.0, flux_R = 0.0;
  int steps = 0;
};

struct NtDSpectrum {
  double k = 0.0;
  int N = 0;
  // index n = 0..N; negative orders coincide
  std::vector<cplx> lambda_int, lambda0, lambda_ext;
};

RadialModeSolution solve_radial_mode(const MediumSpec& spec, double k, int n,
                                     const std::vector<double>& output_r = {});
NtDSpectrum ntd_spectrum(const MediumSpec& spec, double k, int N);
ScatteringMatrix radial_w(const MediumSpec& spec, double k, int N);

// Scattered coefficient b_n of J_n + b_n H_n matched to an interior solution with
// boundary values (u_R, flux_R); the total field inside is A * u with A returned too.
struct ModeMatch {
  cplx b;
  cplx A;
};
ModeMatch match_mode(const MediumSpec& spec, double k, int n, double u_R, double flux_R);

// Composite Gauss rule on [0, R] split at every profile knot.
quad::Rule radial_rule(const MediumSpec& spec, double k, int order = 16);

struct FieldSolution {
  int nx = 0;
  double R = 0.0, h = 0.0, k = 0.0;
  int m = 0;                // incident mode, or INT_MIN for other incidences
  std::vector<int> cells;   // iy * nx + ix of the unknowns (cells inside the disk)
  std::vector<cplx> u;
  double residual = 0.0;
};

// Collocation system (I + k^2 K Q) u = u0 over the in-disk cells of a grid medium.
class LsSolver {
 public:
  LsSolver(const MediumSpec& spec, double k);
  ~LsSolver();
  LsSolver(const LsSolver&) = delete;
  LsSolver& operator=(const LsSolver&) = delete;

  FieldSolution solve(const Eigen::VectorXcd& incident, int m) const;
  FieldSolution solve_mode(int m) const;
  // Field of the incident mode J_n(kr)e^{in theta} sampled on the unknown cells.
  Eigen::VectorXcd incident_mode(int n) const;
  Eigen::VectorXcd plane_wave(double theta) const;
  // u - u0 at an arbitrary point from the volume representation.
  cplx scattered(const FieldSolution& sol, Point x) const;

  const std::vector<int>& cells() const;
  const Eigen::VectorXd& contrast() const;  // q = (eps - eps0)/eps0 per unknown
  std::vector<Point> centers() const;
  double spacing() const;
  bool dense() const;
  double rcond() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Cells above this count per side switch from dense LU to restarted GMRES.
inline constexpr int kDenseGridLimit = 64;

FieldSolution ls_solve(const MediumSpec& spec, double k, int m);
ScatteringMatrix ls_w(const MediumSpec& spec, double k, int N);

ScatteringMatrix born_w(const MediumSpec& spec, double k, int N);

// Cell quadrature points per direction used by born_w on grid media.
inline constexpr int kBornCellGauss = 4;

}  // namespace scatcoef
