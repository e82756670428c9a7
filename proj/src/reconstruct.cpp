#include "scatcoef/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "scatcoef/errors.hpp"
#include "scatcoef/parallel.hpp"
#include "scatcoef/quadrature.hpp"

namespace scatcoef {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double jsigned(const std::vector<double>& j, int n) {
  const int a = std::abs(n);
  return (n < 0 && (a % 2)) ? -j[a] : j[a];
}

std::vector<double> collocation_points(const MomentOptions& opt) {
  if (opt.Nr < 2 || !(opt.R > 0.0) || opt.r_min < 0.0 || opt.r_min >= opt.R)
    throw ValidationError("moment functional: bad collocation grid");
  std::vector<double> r(static_cast<std::size_t>(opt.Nr));
  for (int i = 1; i <= opt.Nr; ++i) r[i - 1] = opt.r_min + (opt.R - opt.r_min) * i / opt.Nr;
  return r;
}

void check_grid(const KGrid& g) {
  if (g.k.empty() || g.k.size() != g.weights.size()) throw ValidationError("k grid: empty or inconsistent");
  for (std::size_t j = 0; j < g.k.size(); ++j)
    if (!(g.k[j] > 0.0) || (j > 0 && !(g.k[j] > g.k[j - 1])))
      throw ValidationError("k grid: values must be positive and increasing");
}

// J_n(k r) J_m(k r) k^2 w (without the weight when w == 1)
double kernel(int n, int m, double k, double r) {
  const std::vector<double> j = specfun::bessel_j_range(std::max(std::abs(n), std::abs(m)), k * r);
  return jsigned(j, n) * jsigned(j, m) * k * k;
}

void fill_residuals(MomentFunctional& f, const std::vector<double>& r, const MomentOptions& opt) {
  f.residual = 0.0;
  f.residual_full = 0.0;
  for (double x : r) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.grid.k.size(); ++j) s += f.grid.weights[j] * f.g[j] * kernel(f.n, f.m, f.grid.k[j], x);
    const double e = std::abs(s - std::pow(x, f.l - 1));
    f.residual_full = std::max(f.residual_full, e);
    if (x >= opt.window_lo * opt.R * (1.0 - 1e-12)) f.residual = std::max(f.residual, e);
  }
  f.flagged = f.residual > opt.tolerance;
}

cplx integral_r_exp(double a, double R) {
  // int_0^R r e^{i a r} dr
  if (std::abs(a) * R < 0.05) {
    cplx s = 0.0, term = 1.0;
    for (int j = 0; j < 25; ++j) {
      s += term * std::pow(R, j + 2) / (j + 2.0);
      term *= cplx(0.0, a) / double(j + 1);
    }
    return s;
  }
  const cplx e = std::polar(1.0, a * R);
  return R * e / cplx(0.0, a) + (e - 1.0) / (a * a);
}

struct PipelineHarmonic {
  std::vector<cplx> F;  // alpha = -alpha_max..alpha_max
  double calibration = 1.0;
  std::vector<HCoefficients> H;
  std::vector<std::string> notes;
};

PipelineHarmonic harmonic_from_samples(int n, int m, const std::vector<ScatteringMatrix>& W, const KGrid& grid,
                                       const Background& bg, double R, const MultiFrequencyOptions& opt) {
  for (const auto& w : W)
    if (w.N < std::max(std::abs(n), std::abs(m))) throw ValidationError("pipeline: W order too small for pair");
  MomentOptions mo = opt.moment;
  mo.R = R;
  mo.closed_form_l0 = false;
  const std::vector<MomentFunctional> fns = moment_functionals(n, m, opt.L, grid, mo);
  std::vector<cplx> samples(W.size());
  for (std::size_t j = 0; j < W.size(); ++j) samples[j] = W[j](n, m);
  std::vector<HCoefficients> H;
  for (const auto& f : fns) H.push_back(h_coefficients(grid.k, samples, f));
  RadialOptions ro = opt.radial;
  ro.eps0 = bg.eps0;
  ro.calibration = opt.calibrate ? calibration_constant(n, m, fns, bg, R, ro) : ro.calibration;
  const ReconstructionResult rr = radial_reconstruct(H, R, opt.alpha_max, ro);
  PipelineHarmonic out{rr.fourier, ro.calibration, H, {}};
  for (const auto& f : fns)
    if (f.l > 0 && f.flagged)
      out.notes.push_back("pair (" + std::to_string(n) + "," + std::to_string(m) + ") l=" + std::to_string(f.l) +
                          ": moment residual " + std::to_string(f.residual) + " above tolerance");
  return out;
}

}  // namespace

KGrid make_k_grid(double k_max, int K) {
  if (!(k_max > 0.0) || K < 2) throw ValidationError("make_k_grid: need k_max > 0 and K >= 2");
  KGrid g;
  const double dk = k_max / K;
  for (int j = 1; j <= K; ++j) {
    g.k.push_back(dk * j);
    g.weights.push_back(j == K ? 0.5 * dk : dk);
  }
  return g;
}

std::vector<MomentFunctional> moment_functionals(int n, int m, int L, const KGrid& grid, const MomentOptions& opt) {
  check_grid(grid);
  if (L < 0) throw ValidationError("moment functional: negative order");
  if (!(opt.lambda_rel >= 0.0)) throw ValidationError("moment functional: lambda must be >= 0");
  const std::vector<double> r = collocation_points(opt);
  const auto nr = static_cast<Eigen::Index>(r.size());
  const auto nk = static_cast<Eigen::Index>(grid.k.size());
  Eigen::MatrixXd A(nr, nk);
  parallel_for(r.size(), [&](std::size_t i) {
    const double row = opt.weight_by_r ? r[i] : 1.0;
    for (Eigen::Index j = 0; j < nk; ++j)
      A(static_cast<Eigen::Index>(i), j) = row * grid.weights[static_cast<std::size_t>(j)] *
                                           kernel(n, m, grid.k[static_cast<std::size_t>(j)], r[i]);
  });
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const double lambda = opt.lambda_rel * s[0] * s[0];
  Eigen::VectorXd filt(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) filt[i] = (s[i] * s[i] + lambda) > 0.0 ? s[i] / (s[i] * s[i] + lambda) : 0.0;

  std::vector<MomentFunctional> out(static_cast<std::size_t>(L) + 1);
  parallel_for(out.size(), [&](std::size_t li) {
    const int l = static_cast<int>(li);
    MomentFunctional& f = out[li];
    f.n = n;
    f.m = m;
    f.l = l;
    f.grid = grid;
    f.lambda = lambda;
    if (l == 0 && n == m && opt.closed_form_l0) {
      f.closed_form = true;
      f.g.resize(grid.k.size());
      for (std::size_t j = 0; j < grid.k.size(); ++j) f.g[j] = 1.0 / grid.k[j];
    } else {
      Eigen::VectorXd b(nr);
      for (Eigen::Index i = 0; i < nr; ++i) {
        const double x = r[static_cast<std::size_t>(i)];
        b[i] = (opt.weight_by_r ? x : 1.0) * std::pow(x, l - 1);
      }
      const Eigen::VectorXd g = svd.matrixV() * (filt.asDiagonal() * (svd.matrixU().transpose() * b));
      f.g.assign(g.data(), g.data() + g.size());
    }
    fill_residuals(f, r, opt);
  });
  return out;
}

MomentFunctional moment_functional_general(int n, int m, int l, const KGrid& grid, const MomentOptions& opt) {
  if (l < 0) throw ValidationError("moment functional: negative order");
  auto all = moment_functionals(n, m, l, grid, opt);
  return all.back();
}

MomentFunctional moment_functional(int n, int l, const KGrid& grid, const MomentOptions& opt) {
  return moment_functional_general(n, n, l, grid, opt);
}

double functional_residual(const MomentFunctional& f, const std::vector<double>& r) {
  double e = 0.0;
  for (double x : r) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.grid.k.size(); ++j) s += f.grid.weights[j] * f.g[j] * kernel(f.n, f.m, f.grid.k[j], x);
    e = std::max(e, std::abs(s - std::pow(x, f.l - 1)));
  }
  return e;
}

HCoefficients h_coefficients(const std::vector<double>& k, const std::vector<cplx>& w_samples,
                             const MomentFunctional& f) {
  if (k.size() != f.grid.k.size() || w_samples.size() != k.size())
    throw ValidationError("h_coefficients: samples do not match the functional's k grid");
  for (std::size_t j = 0; j < k.size(); ++j)
    if (std::abs(k[j] - f.grid.k[j]) > 1e-12 * f.grid.k[j])
      throw ValidationError("h_coefficients: sample wavenumber mismatch at index " + std::to_string(j));
  HCoefficients h;
  h.n = f.n;
  h.m = f.m;
  h.l = f.l;
  h.k_max = f.grid.k_max();
  cplx s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) s += f.grid.weights[j] * f.g[j] * w_samples[j];
  h.value = s;
  return h;
}

std::vector<cplx> exchange_weights(int alpha, int L, double R, Exchange ex) {
  const double beta = kTwoPi * alpha / R;
  std::vector<cplx> c(static_cast<std::size_t>(L) + 1, 0.0);
  if (ex == Exchange::Taylor) {
    cplx t = 1.0;
    for (int l = 0; l <= L; ++l) {
      c[l] = t;
      t *= cplx(0.0, -beta) / double(l + 1);
    }
    return c;
  }
  // a_j = (2j+1)/R int_0^R e^{-i beta r} P*_j(r/R) dr; P*_j(x) = sum_i (-1)^{j+i} C(j,i) C(j+i,i) x^i
  const quad::Rule q = quad::gauss_legendre(std::max(64, 2 * L + 32), 0.0, R);
  auto binom = [](int a, int b) { return std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0)); };
  for (int j = 0; j <= L; ++j) {
    std::vector<double> mono(static_cast<std::size_t>(j) + 1);
    for (int i = 0; i <= j; ++i) mono[i] = (((j + i) % 2) ? -1.0 : 1.0) * std::round(binom(j, i) * binom(j + i, i));
    cplx a = 0.0;
    for (std::size_t t = 0; t < q.nodes.size(); ++t) {
      const double x = q.nodes[t] / R;
      double p = 0.0;
      for (int i = j; i >= 0; --i) p = p * x + mono[i];
      a += q.weights[t] * std::polar(1.0, -beta * q.nodes[t]) * p;
    }
    a *= (2.0 * j + 1.0) / R;
    for (int i = 0; i <= j; ++i) c[i] += a * mono[i] / std::pow(R, i);
  }
  return c;
}

double relative_l2_error(const ReconstructionResult& res) {
  if (res.truth.size() != res.value.size() || res.truth.empty()) return -1.0;
  auto trap = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return s;
  };
  std::vector<double> e2(res.value.size()), t2(res.value.size());
  for (std::size_t i = 0; i < e2.size(); ++i) {
    const double d = res.value[i] - res.truth[i];
    e2[i] = d * d + (res.imag.size() == e2.size() ? res.imag[i] * res.imag[i] : 0.0);
    t2[i] = res.truth[i] * res.truth[i];
  }
  double num = 0.0, den = 0.0;
  if (res.kind == ReconstructionResult::Kind::Radial) {
    num = trap(res.r, e2);
    den = trap(res.r, t2);
  } else if (res.kind == ReconstructionResult::Kind::Angular) {
    for (std::size_t i = 0; i < e2.size(); ++i) {
      num += e2[i];
      den += t2[i];
    }
  } else {
    const std::size_t nt = res.theta.size();
    std::vector<double> ne(res.r.size()), nd(res.r.size());
    for (std::size_t a = 0; a < res.r.size(); ++a) {
      for (std::size_t b = 0; b < nt; ++b) {
        ne[a] += e2[a * nt + b];
        nd[a] += t2[a * nt + b];
      }
      ne[a] *= res.r[a];
      nd[a] *= res.r[a];
    }
    num = trap(res.r, ne);
    den = trap(res.r, nd);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

void set_truth(ReconstructionResult& res, const std::function<double(double, double)>& contrast) {
  res.truth.resize(res.value.size());
  if (res.kind == ReconstructionResult::Kind::Radial) {
    for (std::size_t i = 0; i < res.r.size(); ++i) res.truth[i] = contrast(res.r[i], 0.0);
  } else if (res.kind == ReconstructionResult::Kind::Angular) {
    for (std::size_t i = 0; i < res.theta.size(); ++i) res.truth[i] = contrast(0.0, res.theta[i]);
  } else {
    const std::size_t nt = res.theta.size();
    for (std::size_t a = 0; a < res.r.size(); ++a)
      for (std::size_t b = 0; b < nt; ++b) res.truth[a * nt + b] = contrast(res.r[a], res.theta[b]);
  }
  res.rel_error = relative_l2_error(res);
}

ReconstructionResult radial_reconstruct(const std::vector<HCoefficients>& H, double R, int alpha_max,
                                        const RadialOptions& opt) {
  if (H.empty()) throw ValidationError("radial_reconstruct: no H coefficients");
  if (alpha_max < 0) throw ValidationError("radial_reconstruct: negative alpha_max");
  const int L = static_cast<int>(H.size()) - 1;
  for (int l = 0; l <= L; ++l)
    if (H[l].l != l || H[l].n != H[0].n || H[l].m != H[0].m)
      throw ValidationError("radial_reconstruct: H must cover l = 0..L for one index pair");
  if (opt.exchange == Exchange::Taylor) {
    const double growth = std::exp((L + 1) * std::log(kTwoPi * std::max(alpha_max, 1)) - std::lgamma(L + 2.0));
    if (alpha_max > 0 && growth > opt.growth_limit)
      throw ValidationError("radial_reconstruct: Taylor exchange remainder bound " + std::to_string(growth) +
                            " exceeds limit; lower alpha_max, raise L, or use the least-squares exchange");
  }
  ReconstructionResult res;
  res.kind = ReconstructionResult::Kind::Radial;
  res.L = L;
  res.alpha_max = alpha_max;
  res.k_max = H[0].k_max;
  res.calibration = {opt.calibration};
  std::vector<cplx> M(static_cast<std::size_t>(L) + 1);
  for (int l = 0; l <= L; ++l) M[l] = -(opt.eps0 / kTwoPi) * H[l].value;
  for (int a = -alpha_max; a <= alpha_max; ++a) {
    const std::vector<cplx> w = exchange_weights(a, L, R, opt.exchange);
    cplx F = 0.0;
    for (int l = 0; l <= L; ++l) F += w[l] * M[l];
    res.harmonics.push_back(a);
    res.fourier.push_back(opt.calibration * F / R);
  }
  const int S = std::max(opt.samples, 2);
  for (int s = 0; s < S; ++s) {
    const double r = R * s / (S - 1);
    cplx v = 0.0;
    for (int a = -alpha_max; a <= alpha_max; ++a)
      v += res.fourier[static_cast<std::size_t>(a + alpha_max)] * std::polar(1.0, kTwoPi * a * r / R);
    res.r.push_back(r);
    res.value.push_back(v.real());
    res.imag.push_back(v.imag());
  }
  return res;
}

double angular_c(int m, int n, double k, double R) {
  if (!(R > 0.0) || !(k >= 0.0)) throw ValidationError("angular_c: need R > 0, k >= 0");
  auto f = [&](double r) {
    const std::vector<double> j = specfun::bessel_j_range(std::max(std::abs(n), std::abs(m)), k * r);
    return jsigned(j, n) * jsigned(j, m) * r;
  };
  // Entire integrand: 24-point Gauss on panels with k dr <= 1 is at roundoff.
  const int panels = std::max(1, static_cast<int>(std::ceil(k * R)));
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const quad::Rule q = quad::gauss_legendre(24, R * p / panels, R * (p + 1) / panels);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
  }
  return s;
}

double angular_c_fourier(int m, int n, double k, double R, int M) {
  if (M < 4) throw ValidationError("angular_c_fourier: need M >= 4");
  std::vector<double> s(static_cast<std::size_t>(M));
  for (int a = 0; a < M; ++a) s[a] = std::sin(kTwoPi * a / M);
  cplx sum = 0.0;
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      sum += std::polar(1.0, -kTwoPi * (double(n) * a + double(m) * b) / M) * integral_r_exp(k * (s[a] + s[b]), R);
  return (sum / (double(M) * M)).real();
}

ReconstructionResult angular_reconstruct(const ScatteringMatrix& W, const std::vector<AngularPair>& pairs,
                                         const Background& bg, double R, int l_max, const AngularOptions& opt) {
  if (l_max < 0) throw ValidationError("angular_reconstruct: negative l_max");
  const double k = W.k;
  const double w2mu0 = k * k / bg.eps0;
  ReconstructionResult res;
  res.kind = ReconstructionResult::Kind::Angular;
  res.l_max = l_max;
  res.k_max = k;
  const double floor = opt.c_floor * 0.5 * R * R;
  for (int l = -l_max; l <= l_max; ++l) {
    std::vector<AngularPair> cand;
    for (const auto& p : pairs)
      if (p.n - p.m == l) cand.push_back(p);
    cand.push_back({0, -l});
    bool done = false;
    for (const auto& p : cand) {
      if (std::abs(p.n) > W.N || std::abs(p.m) > W.N) continue;
      const double C = angular_c(p.m, p.n, k, R);
      if (!(std::abs(C) >= floor)) continue;
      res.harmonics.push_back(l);
      res.fourier.push_back(-W(p.n, p.m) / (kTwoPi * w2mu0 * C));
      res.amplification.push_back(1.0 / std::abs(C));
      done = true;
      break;
    }
    if (!done) {
      res.missing.push_back(l);
      res.notes.push_back("harmonic " + std::to_string(l) + ": no pair with |C| above the floor");
    }
  }
  const int S = std::max(opt.samples, 1);
  for (int s = 0; s < S; ++s) {
    const double th = kTwoPi * s / S;
    cplx v = 0.0;
    for (std::size_t i = 0; i < res.harmonics.size(); ++i) v += res.fourier[i] * std::polar(1.0, res.harmonics[i] * th);
    res.theta.push_back(th);
    res.value.push_back(v.real());
    res.imag.push_back(v.imag());
  }
  return res;
}

double calibration_constant(int n, int m, const std::vector<MomentFunctional>& fns, const Background& bg, double R,
                            const RadialOptions& opt) {
  if (fns.empty()) throw ValidationError("calibration: no functionals");
  const KGrid& grid = fns[0].grid;
  std::vector<cplx> w(grid.k.size());
  for (std::size_t j = 0; j < grid.k.size(); ++j) {
    const double k = grid.k[j];
    w[j] = -kTwoPi * (k * k / bg.eps0) * angular_c(m, n, k, R);
  }
  std::vector<HCoefficients> H;
  for (const auto& f : fns) H.push_back(h_coefficients(grid.k, w, f));
  RadialOptions o = opt;
  o.calibration = 1.0;
  o.eps0 = bg.eps0;
  const ReconstructionResult r = radial_reconstruct(H, R, 0, o);
  const cplx F0 = r.fourier[0];
  if (std::abs(F0) < 1e-12) throw SolverError("calibration: reference mean vanishes");
  return 1.0 / F0.real();
}

ReconstructionResult radial_pipeline(const std::vector<ScatteringMatrix>& W, const KGrid& grid, const Background& bg,
                                     double R, const MultiFrequencyOptions& opt) {
  if (W.size() != grid.k.size()) throw ValidationError("radial_pipeline: one W per grid wavenumber required");
  for (std::size_t j = 0; j < W.size(); ++j)
    if (std::abs(W[j].k - grid.k[j]) > 1e-12 * grid.k[j])
      throw ValidationError("radial_pipeline: W wavenumber does not match the grid");
  const PipelineHarmonic h = harmonic_from_samples(opt.n, opt.n, W, grid, bg, R, opt);
  // Rebuild samples from the calibrated Fourier coefficients.
  ReconstructionResult res;
  res.kind = ReconstructionResult::Kind::Radial;
  res.L = opt.L;
  res.alpha_max = opt.alpha_max;
  res.k_max = grid.k_max();
  res.calibration = {h.calibration};
  res.fourier = h.F;
  res.moments = h.H;
  res.notes = h.notes;
  for (int a = -opt.alpha_max; a <= opt.alpha_max; ++a) res.harmonics.push_back(a);
  const int S = std::max(opt.radial.samples, 2);
  for (int s = 0; s < S; ++s) {
    const double r = R * s / (S - 1);
    cplx v = 0.0;
    for (int a = -opt.alpha_max; a <= opt.alpha_max; ++a)
      v += h.F[static_cast<std::size_t>(a + opt.alpha_max)] * std::polar(1.0, kTwoPi * a * r / R);
    res.r.push_back(r);
    res.value.push_back(v.real());
    res.imag.push_back(v.imag());
  }
  return res;
}

ReconstructionResult general_reconstruct(const std::vector<ScatteringMatrix>& W, const KGrid& grid,
                                         const Background& bg, double R, const GeneralOptions& opt) {
  if (W.size() != grid.k.size()) throw ValidationError("general_reconstruct: one W per grid wavenumber required");
  if (opt.p_max < 0) throw ValidationError("general_reconstruct: negative p_max");
  const int np = 2 * opt.p_max + 1;
  std::vector<PipelineHarmonic> hs(static_cast<std::size_t>(np));
  std::vector<std::string> err(static_cast<std::size_t>(np));
  parallel_for(hs.size(), [&](std::size_t i) {
    const int p = static_cast<int>(i) - opt.p_max;
    AngularPair pair{0, -p};
    for (const auto& c : opt.pairs)
      if (c.n - c.m == p) {
        pair = c;
        break;
      }
    try {
      hs[i] = harmonic_from_samples(pair.n, pair.m, W, grid, bg, R, opt.base);
    } catch (const std::exception& e) {
      err[i] = e.what();
    }
  });
  ReconstructionResult res;
  res.kind = ReconstructionResult::Kind::General;
  res.L = opt.base.L;
  res.alpha_max = opt.base.alpha_max;
  res.p_max = opt.p_max;
  res.k_max = grid.k_max();
  for (int i = 0; i < np; ++i) {
    const int p = i - opt.p_max;
    if (!err[i].empty()) {
      res.missing.push_back(p);
      res.notes.push_back("harmonic " + std::to_string(p) + ": " + err[i]);
      continue;
    }
    res.calibration.push_back(hs[i].calibration);
    res.moments.insert(res.moments.end(), hs[i].H.begin(), hs[i].H.end());
    res.notes.insert(res.notes.end(), hs[i].notes.begin(), hs[i].notes.end());
    for (int a = -opt.base.alpha_max; a <= opt.base.alpha_max; ++a) {
      res.harmonics.push_back(p);
      res.fourier.push_back(hs[i].F[static_cast<std::size_t>(a + opt.base.alpha_max)]);
    }
  }
  if (!res.missing.empty()) res.notes.push_back("partial reconstruction: some harmonics missing");
  const int Sr = std::max(opt.r_samples, 2), St = std::max(opt.theta_samples, 1);
  for (int s = 0; s < Sr; ++s) res.r.push_back(R * s / (Sr - 1));
  for (int t = 0; t < St; ++t) res.theta.push_back(kTwoPi * t / St);
  const int na = 2 * opt.base.alpha_max + 1;
  for (int s = 0; s < Sr; ++s)
    for (int t = 0; t < St; ++t) {
      cplx v = 0.0;
      for (std::size_t i = 0; i < res.fourier.size(); ++i) {
        const int a = static_cast<int>(i % na) - opt.base.alpha_max;
        v += res.fourier[i] * std::polar(1.0, kTwoPi * a * res.r[s] / R + res.harmonics[i] * res.theta[t]);
      }
      res.value.push_back(v.real());
      res.imag.push_back(v.imag());
    }
  return res;
}

}  // namespace scatcoef
