#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hsys/banded.hpp"
#include "hsys/grid.hpp"
#include "hsys/radial_mode.hpp"

namespace hsys::spectral {

/// Weak form of the co-rotational linearized operator on a compactified grid:
/// A x = -lambda B x with A symmetric (band storage) and B diagonal.
///
/// Unknowns are interleaved per node as (f_i, g_i). f is fixed to zero at the
/// origin and at the infinity node; g is free at both ends.
struct SpectralProblem {
  int m = 1;
  RadialGrid grid;
  bool cross_term_enabled = true;
  banded::BandMatrix A;
  std::vector<double> B;
  std::vector<int> f_dof;  ///< dof index of f at node i, or -1 if fixed
  std::vector<int> g_dof;

  std::size_t dofs() const { return B.size(); }
};

SpectralProblem assemble_pencil(int m, const RadialGrid& grid, bool cross_term_enabled = true);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Window&, const Window&) = default;
};

/// Parses "lo:hi"; throws ConfigError on malformed or empty windows.
Window parse_window(const std::string& text);

struct EigenMode {
  double lambda = 0.0;
  Eigen::VectorXd x;  ///< B-orthonormal coefficient vector
  RadialMode mode;    ///< r-chart profiles on the grid nodes
};

/// Eigenpairs with lambda in [lo, hi], sorted by lambda. Vectors have unit
/// B-norm and their largest-magnitude entry is positive.
std::vector<EigenMode> solve_pencil(const SpectralProblem& prob, Window window);

/// Dense generalized solver on the same pencil; used as a test oracle.
std::vector<EigenMode> solve_pencil_dense(const SpectralProblem& prob, Window window);

/// Maps a dof vector to r-chart profiles on the grid nodes.
RadialMode mode_from_vector(const SpectralProblem& prob, const Eigen::VectorXd& x);

/// max |x_i^T B x_j - delta_ij| over the returned modes.
double b_orthonormality_defect(const SpectralProblem& prob, const std::vector<EigenMode>& modes);

/// rho-weighted inner product of two modes sampled on the grid nodes.
double rho_inner(const RadialGrid& grid, const RadialMode& a, const RadialMode& b);
/// |<a, b>_rho| / (|a|_rho |b|_rho).
double rho_cosine(const RadialGrid& grid, const RadialMode& a, const RadialMode& b);

/// Tolerance used to group eigenvalues into clusters and to flag drift.
inline double drift_threshold(double lambda) { return std::max(1e-2, 1e-2 * std::abs(lambda)); }

/// Within each cluster of nearly equal eigenvalues, rotates the modes so that
/// their flat tail Gram matrix on [10, 0.1 r_max] is diagonal. Separates a
/// decaying mode from a non-decaying one sharing the same discrete lambda;
/// lambda becomes the Rayleigh quotient of the rotated vector.
std::vector<EigenMode> cluster_align(const SpectralProblem& prob, std::vector<EigenMode> modes);

struct DecayFit {
  double alpha = 0.0;
  double fit_residual = 0.0;  ///< RMS deviation of log|w| from the fitted line
  std::size_t nodes = 0;
  double r_lo = 0.0;
  double r_hi = 0.0;
};

inline constexpr double kDecayWindowStart = 10.0;
inline constexpr std::size_t kDecayMinNodes = 20;

/// Least-squares fit of log|w| = c - alpha log r over [10, 0.1 r_max].
DecayFit decay_exponent(const RadialMode& mode);

enum class Classification { Eigenvalue, Resonance, Spurious };
const char* classification_name(Classification c);

inline constexpr double kEigenvalueAlpha = 1.2;

Classification classify_mode(double lambda, const DecayFit& fit, double drift);

struct ScanConfig {
  int m = 1;
  Window window{-30.0, 30.0};
  std::vector<int> grids{500, 1000, 2000};
  std::vector<GridMap> maps{GridMap::Rational, GridMap::Stereographic};
  bool shoot_check = true;
};

struct ConfigLambda {
  GridMap map = GridMap::Rational;
  int N = 0;
  std::optional<double> lambda;  ///< empty when no mode matched
  double overlap = 0.0;
};

struct ModeRecord {
  double lambda = 0.0;  ///< reference configuration (largest N, first map)
  double lambda_richardson = 0.0;
  double convergence_ratio = 0.0;  ///< NaN when fewer than three grids
  double drift = 0.0;
  DecayFit decay;
  Classification classification = Classification::Resonance;
  std::vector<ConfigLambda> per_config;
  bool shoot_checked = false;
  bool shoot_branch_exists = false;
  double shoot_lambda = 0.0;
  double shoot_defect = 0.0;
  bool shoot_agrees = false;
  RadialMode mode;
};

struct SpectrumReport {
  ScanConfig config;
  std::string version;
  std::vector<ModeRecord> modes;
};

inline constexpr double kShootAgreement = 1e-4;

SpectrumReport scan_spectrum(const ScanConfig& config);

/// Deterministic JSON text of a report.
std::string report_json(const SpectrumReport& report);

}  // namespace hsys::spectral
