#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "scatcoef/specfun.hpp"

namespace scatcoef {

struct Background {
  double eps0 = 1.0;
  double mu0 = 1.0;

  // k0 = omega * sqrt(eps0 * mu0)
  double omega(double k) const;
};

// Scalar function of r on [0, R]: a sum of scaled piecewise monotone cubics.
// Layered fields are piecewise constant with exact jumps at layer radii.
class RadialField {
 public:
  static RadialField constant(double R, double value);
  static RadialField pchip(std::vector<double> r, std::vector<double> values);
  static RadialField layered(const std::vector<double>& outer_radii, const std::vector<double>& values);

  double operator()(double r) const;
  // Evaluates with the pieces active at `inside`, so one-sided values at jumps are reachable.
  double eval_on(double r, double inside) const;
  // Segment ends and interpolation knots of every term, sorted and unique.
  std::vector<double> knots() const;
  // Points where the field may jump.
  std::vector<double> jumps() const;
  RadialField plus(const RadialField& other, double scale) const;
  RadialField scaled_radius(double s) const;
  bool empty() const { return terms_.empty(); }

 private:
  struct Segment {
    double a = 0.0, b = 0.0;
    std::vector<double> r, v, d;
    double eval(double x) const;
  };
  struct Term {
    double scale = 1.0;
    std::vector<Segment> segs;
    const Segment& locate(double x) const;
  };
  std::vector<Term> terms_;
};

struct RadialProfile {
  RadialField eps;
  RadialField inv_mu;
  // Source description kept for serialization: uniform samples or layers.
  std::vector<double> src_radii;  // empty for uniform samples
  std::vector<double> src_eps;
  std::vector<double> src_mu;
  bool serializable = true;
};

// Cell-center values on an nx-by-nx grid over [-R, R]^2, row-major (iy * nx + ix).
struct GridProfile {
  int nx = 0;
  std::vector<double> eps;
};

// Samples eps(theta_j), theta_j = 2 pi j / M, trigonometric interpolation between them.
struct AngularProfile {
  std::vector<double> eps;

  double operator()(double theta) const;
  // (1/2pi) int eps(theta) e^{-i l theta} dtheta of the interpolant.
  cplx fourier(int l) const;
};

struct MediumSpec {
  Background background;
  double R = 1.0;
  std::variant<RadialProfile, GridProfile, AngularProfile> profile;

  bool is_radial() const { return std::holds_alternative<RadialProfile>(profile); }
  bool is_grid() const { return std::holds_alternative<GridProfile>(profile); }
  bool is_angular() const { return std::holds_alternative<AngularProfile>(profile); }
  const RadialProfile& radial() const;
  const GridProfile& grid() const;
  const AngularProfile& angular() const;

  double eps_at(double x, double y) const;
  double inv_mu_at(double x, double y) const;
  // mu == mu0 everywhere
  bool nonmagnetic() const;
};

struct ContrastNorm {
  double eps_hat = 0.0;
  double d_eps = 0.0;     // sup |eps - eps0|
  double d_inv_mu = 0.0;  // sup |1/mu - 1/mu0|
};

MediumSpec make_radial(const Background& bg, double R, const std::vector<double>& eps_samples,
                       const std::vector<double>& mu_samples);
// Piecewise-constant layers; outer_radii increasing with the last equal to R.
MediumSpec make_layered(const Background& bg, double R, const std::vector<double>& outer_radii,
                        const std::vector<double>& eps, const std::vector<double>& mu);
MediumSpec make_grid(const Background& bg, double R, int nx, const std::vector<double>& eps_values);
MediumSpec make_angular(const Background& bg, double R, const std::vector<double>& eps_samples);

ContrastNorm contrast_norm(const MediumSpec& spec);

// Grid helpers.
double grid_spacing(const MediumSpec& spec);
Point cell_center(double R, int nx, int ix, int iy);
bool cell_in_disk(double R, int nx, int ix, int iy);
MediumSpec sample_to_grid(const MediumSpec& spec, int nx);
// eps'(x) = eps(R_{-theta} x) for theta = quarter_turns * pi/2.
MediumSpec rotate_grid(const MediumSpec& spec, int quarter_turns);
MediumSpec translate_grid(const MediumSpec& spec, int shift_x, int shift_y);
MediumSpec scale_radial(const MediumSpec& spec, double s);

nlohmann::json medium_to_json(const MediumSpec& spec);
MediumSpec medium_from_json(const nlohmann::json& j);

}  // namespace scatcoef
