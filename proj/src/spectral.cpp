#include "hsys/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "hsys/kernels.hpp"
#include "hsys/linearized.hpp"
#include "hsys/shooting.hpp"
#include "hsys/types.hpp"

namespace hsys::spectral {

namespace {

constexpr std::size_t kBand = 3;

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kGaussX{0.11270166537925831, 0.5, 0.88729833462074169};
constexpr std::array<double, 3> kGaussW{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// 2 pi r / r'(s) and 2 pi m^2 r'(s) / r in the compact variable.
double kappa1(GridMap map, double s) {
  if (map == GridMap::Rational) return 2.0 * kPi * s * (1.0 - s);
  return 2.0 * std::sin(kPi * s);
}
double kappa0(GridMap map, double s, int m) {
  const double m2 = static_cast<double>(m) * m;
  if (map == GridMap::Rational) return 2.0 * kPi * m2 / (s * (1.0 - s));
  return 2.0 * kPi * kPi * m2 / std::sin(kPi * s);
}

}  // namespace

Window parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("malformed window '" + text + "' (expected lo:hi)");
  Window w;
  try {
    std::size_t used = 0;
    const std::string lo = text.substr(0, colon);
    const std::string hi = text.substr(colon + 1);
    w.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument("trailing");
    w.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("malformed window '" + text + "' (expected lo:hi)");
  }
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi)) throw ConfigError("window bounds must be finite");
  if (!(w.hi > w.lo)) throw ConfigError("empty window '" + text + "' (need lo < hi)");
  return w;
}

SpectralProblem assemble_pencil(int m, const RadialGrid& grid, bool cross_term_enabled) {
  if (m < 1) throw ConfigError("degree must be >= 1, got " + std::to_string(m));
  const int N = grid.N;
  if (N < 16 || grid.s.size() != static_cast<std::size_t>(N)) throw ConfigError("grid is malformed");
  SpectralProblem p;
  p.m = m;
  p.grid = grid;
  p.cross_term_enabled = cross_term_enabled;
  p.f_dof.assign(N, -1);
  p.g_dof.assign(N, -1);
  int next = 0;
  for (int i = 0; i < N; ++i) {
    if (i != 0 && i != N - 1) p.f_dof[i] = next++;
    p.g_dof[i] = next++;
  }
  p.A = banded::BandMatrix(static_cast<std::size_t>(next), kBand);
  p.B.assign(static_cast<std::size_t>(next), 0.0);
  for (int i = 0; i < N; ++i) {
    if (p.f_dof[i] >= 0) p.B[static_cast<std::size_t>(p.f_dof[i])] = grid.weights[i];
    p.B[static_cast<std::size_t>(p.g_dof[i])] = grid.weights[i];
  }

  // Bubble profiles at every Gauss point in one batch.
  const std::size_t nq = 3 * static_cast<std::size_t>(N - 1);
  std::vector<double> sq(nq);
  std::vector<double> rq(nq);
  for (int e = 0; e + 1 < N; ++e) {
    const double h = grid.s[e + 1] - grid.s[e];
    for (std::size_t q = 0; q < 3; ++q) {
      const double s = grid.s[e] + kGaussX[q] * h;
      sq[3 * e + q] = s;
      rq[3 * e + q] = map_radius(grid.map, s);
    }
  }
  std::vector<double> F(nq), G(nq), dF(nq), dG(nq);
  kernels::bubble_profiles(m, rq, F, G, dF, dG);

  const double cpl = 4.0 * kPi * m;
  for (int e = 0; e + 1 < N; ++e) {
    const double h = grid.s[e + 1] - grid.s[e];
    const std::array<int, 2> node{e, e + 1};
    const std::array<double, 2> dphi{-1.0 / h, 1.0 / h};
    double kff[2][2] = {{0, 0}, {0, 0}};
    double kgg[2][2] = {{0, 0}, {0, 0}};
    double kfg[2][2] = {{0, 0}, {0, 0}};  // [f node][g node]
    for (std::size_t q = 0; q < 3; ++q) {
      const std::size_t iq = 3 * static_cast<std::size_t>(e) + q;
      const double s = sq[iq];
      const double wq = kGaussW[q] * h;
      const std::array<double, 2> phi{1.0 - kGaussX[q], kGaussX[q]};
      const double k1 = kappa1(grid.map, s);
      double k0 = kappa0(grid.map, s, m);
      double Fq = 0.0;
      if (cross_term_enabled) {
        const double Gs = dG[iq] * map_jacobian(grid.map, s);
        k0 -= cpl * Gs;
        Fq = F[iq];
      }
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          kff[a][b] += wq * (k1 * dphi[a] * dphi[b] + k0 * phi[a] * phi[b]);
          kgg[a][b] += wq * k1 * dphi[a] * dphi[b];
          kfg[a][b] += -wq * cpl * Fq * phi[a] * dphi[b];
        }
      }
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const int fa = p.f_dof[node[a]];
        const int fb = p.f_dof[node[b]];
        const int ga = p.g_dof[node[a]];
        const int gb = p.g_dof[node[b]];
        // Each symmetric pair is visited once (a <= b), then mirrored.
        if (a <= b) {
          if (fa >= 0 && fb >= 0) p.A.add_symmetric(fa, fb, kff[a][b]);
          p.A.add_symmetric(ga, gb, kgg[a][b]);
        }
        if (cross_term_enabled && fa >= 0) p.A.add_symmetric(fa, gb, kfg[a][b]);
      }
    }
  }
  return p;
}

RadialMode mode_from_vector(const SpectralProblem& prob, const Eigen::VectorXd& x) {
  const int N = prob.grid.N;
  std::vector<double> f(N, 0.0);
  std::vector<double> g(N, 0.0);
  for (int i = 0; i < N; ++i) {
    if (prob.f_dof[i] >= 0) f[i] = x[prob.f_dof[i]];
    g[i] = x[prob.g_dof[i]];
  }
  return RadialMode(prob.m, Chart::RChart, prob.grid.r, std::move(f), std::move(g));
}

namespace {

void fix_sign(Eigen::VectorXd& x) {
  Eigen::Index k = 0;
  x.cwiseAbs().maxCoeff(&k);
  if (x[k] < 0.0) x = -x;
}

EigenMode make_mode(const SpectralProblem& prob, double lambda, Eigen::VectorXd x) {
  fix_sign(x);
  EigenMode em;
  em.lambda = lambda;
  em.mode = mode_from_vector(prob, x);
  em.x = std::move(x);
  return em;
}

}  // namespace

std::vector<EigenMode> solve_pencil(const SpectralProblem& prob, Window window) {
  if (!(window.hi > window.lo)) throw ConfigError("eigenvalue window is empty");
  const std::size_t n = prob.dofs();
  std::vector<double> isq(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(prob.B[i] > 0.0)) throw NumericalError("mass matrix is not positive definite at dof " + std::to_string(i));
    isq[i] = 1.0 / std::sqrt(prob.B[i]);
  }
  banded::BandMatrix C(n, kBand);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < std::min(n, j + kBand + 1); ++i) {
      const double a = prob.A(i, j);
      if (a != 0.0) C.add_symmetric(i, j, a * isq[i] * isq[j]);
    }
  }
  // A x = -lambda B x, so mu = -lambda; the window is closed on both ends.
  const double pad = 1e-12 * std::max(1.0, std::max(std::abs(window.lo), std::abs(window.hi)));
  const auto pairs = banded::symmetric_band_eigen(C, -window.hi - pad, -window.lo + pad);
  std::vector<EigenMode> out;
  for (std::size_t k = 0; k < pairs.values.size(); ++k) {
    const double lambda = -pairs.values[k];
    if (lambda < window.lo || lambda > window.hi) continue;
    Eigen::VectorXd x = pairs.vectors[k];
    for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] *= isq[i];
    out.push_back(make_mode(prob, lambda, std::move(x)));
  }
  std::sort(out.begin(), out.end(), [](const EigenMode& a, const EigenMode& b) { return a.lambda < b.lambda; });
  return out;
}

std::vector<EigenMode> solve_pencil_dense(const SpectralProblem& prob, Window window) {
  const Eigen::MatrixXd A = prob.A.to_dense();
  const auto n = static_cast<Eigen::Index>(prob.dofs());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) B(i, i) = prob.B[static_cast<std::size_t>(i)];
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
  if (es.info() != Eigen::Success) throw NumericalError("dense generalized eigensolver failed");
  std::vector<EigenMode> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = -es.eigenvalues()[k];
    if (lambda < window.lo || lambda > window.hi) continue;
    out.push_back(make_mode(prob, lambda, es.eigenvectors().col(k)));
  }
  std::sort(out.begin(), out.end(), [](const EigenMode& a, const EigenMode& b) { return a.lambda < b.lambda; });
  return out;
}

double b_orthonormality_defect(const SpectralProblem& prob, const std::vector<EigenMode>& modes) {
  const std::span<const double> w(prob.B);
  double worst = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = i; j < modes.size(); ++j) {
      const double ip = kernels::weighted_dot(w, std::span<const double>(modes[i].x.data(), prob.dofs()),
                                              std::span<const double>(modes[j].x.data(), prob.dofs()));
      worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double rho_inner(const RadialGrid& grid, const RadialMode& a, const RadialMode& b) {
  if (a.size() != grid.r.size() || b.size() != grid.r.size()) throw ConfigError("modes are not on the grid nodes");
  return kernels::weighted_dot(grid.weights, a.f(), b.f()) + kernels::weighted_dot(grid.weights, a.g(), b.g());
}

double rho_cosine(const RadialGrid& grid, const RadialMode& a, const RadialMode& b) {
  const double na = rho_inner(grid, a, a);
  const double nb = rho_inner(grid, b, b);
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return std::abs(rho_inner(grid, a, b)) / std::sqrt(na * nb);
}

namespace {

// Flat tail inner product int w_a . w_b r dr over [10, 0.1 r_max], trapezoid in r.
double tail_inner(const RadialGrid& grid, const RadialMode& a, const RadialMode& b) {
  const double lo = kDecayWindowStart;
  const double hi = 0.1 * grid.r_max();
  double sum = 0.0;
  const auto& r = grid.r;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (r[i] < lo || r[i + 1] > hi) continue;
    const double p0 = (a.f()[i] * b.f()[i] + a.g()[i] * b.g()[i]) * r[i];
    const double p1 = (a.f()[i + 1] * b.f()[i + 1] + a.g()[i + 1] * b.g()[i + 1]) * r[i + 1];
    sum += 0.5 * (r[i + 1] - r[i]) * (p0 + p1);
  }
  return sum;
}

}  // namespace

std::vector<EigenMode> cluster_align(const SpectralProblem& prob, std::vector<EigenMode> modes) {
  std::sort(modes.begin(), modes.end(), [](const EigenMode& a, const EigenMode& b) { return a.lambda < b.lambda; });
  std::vector<EigenMode> out;
  std::size_t start = 0;
  while (start < modes.size()) {
    std::size_t end = start + 1;
    while (end < modes.size() && modes[end].lambda - modes[end - 1].lambda <= drift_threshold(modes[end - 1].lambda)) {
      ++end;
    }
    const auto k = static_cast<Eigen::Index>(end - start);
    if (k == 1) {
      out.push_back(std::move(modes[start]));
    } else {
      Eigen::MatrixXd T(k, k);
      for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
          const double v = tail_inner(prob.grid, modes[start + i].mode, modes[start + j].mode);
          T(i, j) = v;
          T(j, i) = v;
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      const Eigen::MatrixXd& Q = es.eigenvectors();
      for (Eigen::Index c = 0; c < k; ++c) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(prob.dofs()));
        double lam = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
          x += Q(i, c) * modes[start + i].x;
          lam += Q(i, c) * Q(i, c) * modes[start + i].lambda;
        }
        out.push_back(make_mode(prob, lam, std::move(x)));
      }
    }
    start = end;
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenMode& a, const EigenMode& b) { return a.lambda < b.lambda; });
  return out;
}

DecayFit decay_exponent(const RadialMode& mode_in) {
  const RadialMode mode = mode_in.in_r_chart();
  const auto& r = mode.coord();
  double r_max = 0.0;
  for (double x : r) {
    if (std::isfinite(x)) r_max = std::max(r_max, x);
  }
  DecayFit fit;
  fit.r_lo = kDecayWindowStart;
  fit.r_hi = 0.1 * r_max;
  std::vector<double> X;
  std::vector<double> Y;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= fit.r_lo && r[i] <= fit.r_hi)) continue;
    const double mag = std::hypot(mode.f()[i], mode.g()[i]);
    if (mag == 0.0) continue;
    X.push_back(std::log(r[i]));
    Y.push_back(std::log(mag));
  }
  fit.nodes = X.size();
  if (fit.nodes < kDecayMinNodes) {
    throw ConfigError("decay window [10, 0.1 r_max] holds " + std::to_string(fit.nodes) + " usable nodes; need " +
                      std::to_string(kDecayMinNodes));
  }
  const double n = static_cast<double>(fit.nodes);
  const double mx = std::accumulate(X.begin(), X.end(), 0.0) / n;
  const double my = std::accumulate(Y.begin(), Y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double e = Y[i] - (my + slope * (X[i] - mx));
    ss += e * e;
  }
  fit.alpha = -slope;
  fit.fit_residual = std::sqrt(ss / n);
  return fit;
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Eigenvalue:
      return "Eigenvalue";
    case Classification::Resonance:
      return "Resonance";
    case Classification::Spurious:
      return "Spurious";
  }
  return "?";
}

Classification classify_mode(double lambda, const DecayFit& fit, double drift) {
  if (!(drift <= drift_threshold(lambda))) return Classification::Spurious;
  // Growing profiles (alpha < 0) are not square integrable either.
  return fit.alpha >= kEigenvalueAlpha ? Classification::Eigenvalue : Classification::Resonance;
}

namespace {

struct ConfigSolve {
  GridMap map;
  int N;
  RadialGrid grid;
  std::vector<EigenMode> modes;
};

ConfigSolve solve_config(int m, GridMap map, int N, Window wide) {
  ConfigSolve cs;
  cs.map = map;
  cs.N = N;
  const auto prob = assemble_pencil(m, build_grid(N, map));
  cs.grid = prob.grid;
  cs.modes = cluster_align(prob, solve_pencil(prob, wide));
  return cs;
}

// Best rho-weighted overlap of `ref` (on ref_grid) against the modes of cs.
std::pair<int, double> best_match(const RadialGrid& ref_grid, const RadialMode& ref, const ConfigSolve& cs) {
  int best = -1;
  double best_ov = 0.0;
  const std::size_t n = ref_grid.r.size();
  std::vector<double> f(n), g(n);
  for (std::size_t k = 0; k < cs.modes.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) std::tie(f[i], g[i]) = cs.modes[k].mode.interpolate(ref_grid.r[i]);
    double ab = 0.0, aa = 0.0, bb = 0.0;
    ab = kernels::weighted_dot(ref_grid.weights, ref.f(), f) + kernels::weighted_dot(ref_grid.weights, ref.g(), g);
    aa = kernels::weighted_dot(ref_grid.weights, ref.f(), ref.f()) + kernels::weighted_dot(ref_grid.weights, ref.g(), ref.g());
    bb = kernels::weighted_dot(ref_grid.weights, f, f) + kernels::weighted_dot(ref_grid.weights, g, g);
    const double ov = (aa > 0.0 && bb > 0.0) ? std::abs(ab) / std::sqrt(aa * bb) : 0.0;
    if (ov > best_ov) {
      best_ov = ov;
      best = static_cast<int>(k);
    }
  }
  return {best, best_ov};
}

constexpr double kMatchOverlap = 0.9;

}  // namespace

SpectrumReport scan_spectrum(const ScanConfig& config) {
  if (config.m < 1) throw ConfigError("degree must be >= 1");
  if (!(config.window.hi > config.window.lo)) throw ConfigError("scan window is empty");
  if (config.grids.empty() || config.maps.empty()) throw ConfigError("scan needs at least one grid and one map");
  std::vector<int> grids = config.grids;
  std::sort(grids.begin(), grids.end());
  grids.erase(std::unique(grids.begin(), grids.end()), grids.end());

  const double width = config.window.hi - config.window.lo;
  const double margin = std::max(1.0, 0.1 * width);
  const Window wide{config.window.lo - margin, config.window.hi + margin};

  // Work items are independent; results are gathered in a fixed order.
  std::vector<std::future<ConfigSolve>> jobs;
  for (GridMap map : config.maps) {
    for (int N : grids) jobs.push_back(std::async(std::launch::async, solve_config, config.m, map, N, wide));
  }
  std::vector<ConfigSolve> solved;
  for (auto& j : jobs) solved.push_back(j.get());
  const std::size_t ng = grids.size();
  auto at = [&](std::size_t map_idx, std::size_t grid_idx) -> const ConfigSolve& {
    return solved[map_idx * ng + grid_idx];
  };
  const ConfigSolve& ref = at(0, ng - 1);

  SpectrumReport report;
  report.config = config;
  report.config.grids = grids;
  report.version = HSYS_VERSION;

  for (const EigenMode& em : ref.modes) {
    if (em.lambda < config.window.lo || em.lambda > config.window.hi) continue;
    ModeRecord rec;
    rec.lambda = em.lambda;
    rec.mode = em.mode;
    // lambda per configuration, indexed like `solved`.
    std::vector<std::optional<double>> lam(solved.size());
    for (std::size_t c = 0; c < solved.size(); ++c) {
      ConfigLambda cl;
      cl.map = solved[c].map;
      cl.N = solved[c].N;
      if (&solved[c] == &ref) {
        cl.lambda = em.lambda;
        cl.overlap = 1.0;
      } else {
        const auto [k, ov] = best_match(ref.grid, em.mode, solved[c]);
        cl.overlap = ov;
        if (k >= 0 && ov >= kMatchOverlap) cl.lambda = solved[c].modes[static_cast<std::size_t>(k)].lambda;
      }
      lam[c] = cl.lambda;
      rec.per_config.push_back(cl);
    }
    double drift = 0.0;
    auto diff = [&](std::size_t a, std::size_t b) {
      if (!lam[a] || !lam[b]) return std::numeric_limits<double>::infinity();
      return std::abs(*lam[a] - *lam[b]);
    };
    for (std::size_t mi = 0; mi < config.maps.size(); ++mi) {
      for (std::size_t gi = 0; gi + 1 < ng; ++gi) drift = std::max(drift, diff(mi * ng + gi, mi * ng + gi + 1));
      if (mi > 0) drift = std::max(drift, diff(ng - 1, mi * ng + ng - 1));
    }
    rec.drift = drift;

    rec.lambda_richardson = em.lambda;
    rec.convergence_ratio = std::numeric_limits<double>::quiet_NaN();
    if (ng >= 2 && lam[ng - 2]) {
      const double ratio = static_cast<double>(grids[ng - 1] - 1) / static_cast<double>(grids[ng - 2] - 1);
      rec.lambda_richardson = em.lambda + (em.lambda - *lam[ng - 2]) / (ratio * ratio - 1.0);
    }
    if (ng >= 3 && lam[ng - 3] && lam[ng - 2]) {
      const double d_coarse = *lam[ng - 2] - *lam[ng - 3];
      const double d_fine = em.lambda - *lam[ng - 2];
      if (d_fine != 0.0) rec.convergence_ratio = d_coarse / d_fine;
    }

    rec.decay = decay_exponent(em.mode);
    rec.classification = classify_mode(em.lambda, rec.decay, drift);
    if (config.shoot_check && rec.classification == Classification::Eigenvalue) {
      rec.shoot_checked = true;
      const auto sr = shoot_refine(config.m, rec.lambda_richardson, std::max(1e-2, 1e-2 * std::abs(rec.lambda_richardson)));
      rec.shoot_branch_exists = sr.branch_exists;
      rec.shoot_lambda = sr.lambda;
      rec.shoot_defect = sr.defect;
      rec.shoot_agrees = sr.branch_exists && std::abs(sr.lambda - rec.lambda_richardson) <= kShootAgreement &&
                         sr.defect <= 1e-6;
    }
    report.modes.push_back(std::move(rec));
  }
  return report;
}

}  // namespace hsys::spectral
