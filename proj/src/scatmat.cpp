#include "scatcoef/scatmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "scatcoef/errors.hpp"

namespace scatcoef {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e^{i 2 pi a / P} with the phase reduced exactly
cplx root(long long a, int P) {
  const long long r = ((a % P) + P) % P;
  return std::polar(1.0, kTwoPi * static_cast<double>(r) / P);
}

}  // namespace

cplx ipow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double FarFieldData::theta_xi(int p) const { return kTwoPi * p / P; }
double FarFieldData::theta_x(int q) const { return kTwoPi * q / Q; }

FarFieldData far_field_synthesize(const ScatteringMatrix& W, int P, int Q) {
  if (P < 1 || Q < 1) throw ValidationError("far_field_synthesize: empty grid");
  const int N = W.N, s = W.size();
  Eigen::MatrixXcd Sp(P, s), M(s, s), Sq(s, Q);
  for (int p = 0; p < P; ++p)
    for (int m = -N; m <= N; ++m) Sp(p, m + N) = root(-static_cast<long long>(m) * p, P);
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) M(m + N, n + N) = ipow(m - n) * W(n, m);
  for (int n = -N; n <= N; ++n)
    for (int q = 0; q < Q; ++q) Sq(n + N, q) = root(static_cast<long long>(n) * q, Q);
  FarFieldData d;
  d.k = W.k;
  d.P = P;
  d.Q = Q;
  d.A = Sp * M * Sq;
  return d;
}

FarFieldData add_noise(const FarFieldData& data, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("add_noise: sigma must be >= 0");
  FarFieldData out = data;
  out.noise_sigma = std::hypot(data.noise_sigma, sigma);
  out.rng_seed = seed;
  if (sigma == 0.0) return out;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, sigma / std::sqrt(2.0));
  for (int p = 0; p < data.P; ++p)
    for (int q = 0; q < data.Q; ++q) {
      const double re = gauss(gen);
      const double im = gauss(gen);
      out.A(p, q) += cplx(re, im);
    }
  return out;
}

ScatteringMatrix extract_w(const FarFieldData& data, int N) {
  if (N < 0) throw ValidationError("extract_w: negative order");
  if (data.P < 2 * N + 1 || data.Q < 2 * N + 1)
    throw ValidationError("extract_w: grids P=" + std::to_string(data.P) + ", Q=" + std::to_string(data.Q) +
                          " too coarse for order " + std::to_string(N));
  const int s = 2 * N + 1;
  Eigen::MatrixXcd Ep(s, data.P), Eq(data.Q, s);
  for (int m = -N; m <= N; ++m)
    for (int p = 0; p < data.P; ++p) Ep(m + N, p) = root(static_cast<long long>(m) * p, data.P) / double(data.P);
  for (int q = 0; q < data.Q; ++q)
    for (int n = -N; n <= N; ++n) Eq(q, n + N) = root(-static_cast<long long>(n) * q, data.Q) / double(data.Q);
  const Eigen::MatrixXcd F = Ep * data.A * Eq;  // F(m, n)
  ScatteringMatrix W(N, data.k);
  for (int n = -N; n <= N; ++n)
    for (int m = -N; m <= N; ++m) W(n, m) = ipow(n - m) * F(m + N, n + N);
  return W;
}

double extraction_residual(const FarFieldData& data, int N) {
  const FarFieldData back = far_field_synthesize(extract_w(data, N), data.P, data.Q);
  const double den = data.A.norm();
  const double num = (data.A - back.A).norm();
  return den > 0.0 ? num / den : num;
}

double estimate_sigma(const FarFieldData& data, int N) {
  const FarFieldData back = far_field_synthesize(extract_w(data, N), data.P, data.Q);
  const double dof = static_cast<double>(data.P) * data.Q - static_cast<double>(2 * N + 1) * (2 * N + 1);
  if (dof <= 0.0) throw EstimationError("estimate_sigma: no residual degrees of freedom");
  return (data.A - back.A).norm() / std::sqrt(dof);
}

double decay_envelope(double amplitude, double C, int n) {
  const double nl = n > 0 ? n * std::log(static_cast<double>(n)) : 0.0;
  return amplitude * std::exp(2.0 * n * std::log(C) - 2.0 * nl);
}

TruncationReport select_truncation(const FarFieldData& data, const DecayFit& fit) {
  TruncationReport rep;
  rep.N_data = fit.N >= 0 ? fit.N : (std::min(data.P, data.Q) - 1) / 2;
  const ScatteringMatrix W = extract_w(data, rep.N_data);
  rep.measured.resize(static_cast<std::size_t>(rep.N_data) + 1);
  for (int n = 0; n <= rep.N_data; ++n) rep.measured[n] = 0.5 * (std::abs(W(n, n)) + std::abs(W(-n, -n)));
  if (fit.estimate) rep.sigma = estimate_sigma(data, rep.N_data);
  else rep.sigma = fit.sigma >= 0.0 ? fit.sigma : data.noise_sigma;
  rep.noise_floor = rep.sigma / std::sqrt(static_cast<double>(data.P) * data.Q);

  std::vector<int> use;
  for (int n = 0; n <= rep.N_data; ++n)
    if (rep.measured[n] > fit.usable_factor * rep.noise_floor && rep.measured[n] > 0.0) use.push_back(n);
  rep.usable = static_cast<int>(use.size());
  if (rep.noise_floor == 0.0) {
    rep.N_selected = rep.N_data;
    rep.envelope = rep.measured;
    return rep;
  }
  if (use.empty()) {
    rep.N_selected = 0;
    rep.envelope.assign(rep.measured.size(), 0.0);
    return rep;
  }
  if (use.size() < 3)
    throw EstimationError("select_truncation: only " + std::to_string(use.size()) +
                          " diagonal entries above the noise floor, need 3");

  // log m_n + 2 n log n = a + b n
  Eigen::MatrixXd X(static_cast<Eigen::Index>(use.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(use.size()));
  for (std::size_t i = 0; i < use.size(); ++i) {
    const int n = use[i];
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    X(static_cast<Eigen::Index>(i), 1) = n;
    y[static_cast<Eigen::Index>(i)] = std::log(rep.measured[n]) + (n > 0 ? 2.0 * n * std::log(double(n)) : 0.0);
  }
  const Eigen::Vector2d ab = X.colPivHouseholderQr().solve(y);
  rep.amplitude = std::exp(ab[0]);
  rep.C = std::exp(0.5 * ab[1]);
  rep.envelope.resize(rep.measured.size());
  rep.N_selected = 0;
  for (int n = 0; n <= rep.N_data; ++n) {
    rep.envelope[n] = decay_envelope(rep.amplitude, rep.C, n);
    if (rep.envelope[n] >= rep.noise_floor) rep.N_selected = n;
  }
  return rep;
}

ScatteringMatrix rule_rotate(const ScatteringMatrix& W, double theta) {
  ScatteringMatrix out = W;
  for (int n = -W.N; n <= W.N; ++n)
    for (int m = -W.N; m <= W.N; ++m) out(n, m) = std::polar(1.0, (m - n) * theta) * W(n, m);
  return out;
}

ScatteringMatrix rule_conj_transpose(const ScatteringMatrix& W) {
  ScatteringMatrix out = W;
  out.w = W.w.adjoint();
  return out;
}

double ScalePrediction::defect(const ScatteringMatrix& recomputed) const {
  return relative_difference(recomputed, predicted);
}

ScalePrediction rule_scale(const ScatteringMatrix& W_dilated, double s) {
  if (!(s > 0.0)) throw ValidationError("rule_scale: factor must be positive");
  ScalePrediction p;
  p.s = s;
  p.k_scaled = s * W_dilated.k;
  p.predicted = W_dilated;
  p.predicted.k = p.k_scaled;
  p.statement = "W[eps, mu, omega, s*Omega] == W[eps, mu, s*omega, Omega] with s=" + std::to_string(s);
  return p;
}

TranslationResult rule_translate(const ScatteringMatrix& W, Point z, int order) {
  if (order < 0 || order > W.N) throw ValidationError("rule_translate: Graf order must lie in [0, N]");
  const int Nout = W.N - order;
  const specfun::GrafTranslation g = specfun::graf_translate(0, W.k, z, order, std::span<const Point>{});
  TranslationResult res;
  res.W = ScatteringMatrix(Nout, W.k);
  for (int n = -Nout; n <= Nout; ++n)
    for (int m = -Nout; m <= Nout; ++m) {
      cplx s = 0.0;
      for (int p = -order; p <= order; ++p)
        for (int l = -order; l <= order; ++l) s += std::conj(g.coeff(p)) * g.coeff(l) * W(n - p, m - l);
      res.W(n, m) = s;
    }
  // size of the first omitted coefficient bounds the truncation error
  const double rz = std::hypot(z.x, z.y);
  res.graf_residual = std::abs(specfun::bessel_j(order + 1, W.k * rz));
  return res;
}

double hermitian_defect(const ScatteringMatrix& W) {
  const double n = W.norm();
  const double d = (W.w - W.w.adjoint()).norm();
  return n > 0.0 ? d / n : d;
}

double reciprocity_defect(const ScatteringMatrix& W) {
  double d = 0.0;
  for (int n = -W.N; n <= W.N; ++n)
    for (int m = -W.N; m <= W.N; ++m) {
      const double sg = ((n + m) % 2 == 0) ? 1.0 : -1.0;
      d += std::norm(W(n, m) - sg * W(-m, -n));
    }
  const double nn = W.norm();
  return nn > 0.0 ? std::sqrt(d) / nn : std::sqrt(d);
}

}  // namespace scatcoef
