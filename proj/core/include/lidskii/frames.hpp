#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lidskii/descent.hpp"
#include "lidskii/matrix_core.hpp"
#include "lidskii/norms.hpp"

namespace lidskii {

/// A point of T_d(a): vectors g_1..g_k in C^d (stored as columns) with
/// ||g_i||^2 = a_i.
class FrameSequence {
 public:
  /// Validates |‖g_i‖² - a_i| <= sphere_tol * a_i and a_i > 0.
  FrameSequence(Matrix vectors, RealVector a, double sphere_tol = 1e-10);

  /// Rescales each column onto its sphere. Columns must be non-zero.
  static FrameSequence projected(const Matrix& vectors, const RealVector& a);

  Index dim() const noexcept { return g_.rows(); }
  Index size() const noexcept { return g_.cols(); }
  const Matrix& vectors() const noexcept { return g_; }
  const RealVector& norms() const noexcept { return a_; }
  CVector vector(Index i) const { return g_.col(i); }

  /// max_i |‖g_i‖² - a_i| / a_i.
  double sphere_residual() const;

 private:
  Matrix g_;
  RealVector a_;
};

/// d x k matrix whose columns are the g_i.
GeneralMatrix synthesis(const FrameSequence& g);

/// S_G = sum g_i (x) g_i = T T*.
HermitianMatrix frame_operator(const FrameSequence& g);

/// Theta(G) = N(S - S_G).
double theta(const NormSpec& n, const HermitianMatrix& s, const FrameSequence& g);

struct WaterFill {
  double level = 0.0;      // c, with sum (lambda_i - c)^+ = t and c <= lambda_1
  SpectrumVector spectrum; // ((lambda_i - c)^+)_i
};

/// Solves sum_i (lambda_i - c)^+ = t exactly on the piecewise-linear
/// branches. Requires t > 0.
WaterFill water_fill(const SpectrumVector& lambda, double t);

struct NaiveBound {
  double value = 0.0;        // N(S - A^op)
  double level = 0.0;        // water level c
  HermitianMatrix minimizer; // A^op = sum (lambda_i - c)^+ v_i (x) v_i
};

/// min N(S - A) over PSD A with tr A = t; a lower bound for Theta over
/// T_d(a) when t = sum a_i.
NaiveBound naive_lower_bound(const NormSpec& n, const HermitianMatrix& s, double t);

/// Necessary conditions a local minimizer of Theta must satisfy.
enum class StructureCheck { eigenvector, commutation, lidskii_alignment, linear_independence };

std::string to_string(StructureCheck c);

struct StructureWitness {
  StructureCheck failed;
  std::optional<Index> index;  // vector (eigenvector) or cluster (independence)
  double value = 0.0;          // offending residual / gap / singular value ratio
};

/// One eigenvalue cluster c_j of (S - S0) restricted to R(S0).
struct FrameCluster {
  double value = 0.0;               // c_j
  std::vector<Index> members;       // J_j
  Index span_dim = 0;               // dim W_j
  bool independence_required = false;  // some eigenvalue of S - S0 exceeds c_j
  bool independent = true;
};

struct FodStructureReport {
  std::vector<double> eigvec_residuals;  // ‖(S-S0)g - c g‖ / ‖g‖
  RealVector fitted_eigenvalues;         // Rayleigh quotients c(j)
  double commute_residual = 0.0;         // ‖[S, S0]‖_F
  bool lidskii_aligned = false;
  double alignment_gap = 0.0;            // max |lambda(S-S0) - (lambda(S) - lambda(S0)) sorted|
  std::vector<FrameCluster> partition;   // sorted by c ascending
  double theta_value = 0.0;
  std::optional<StructureWitness> witness;

  bool consistent() const noexcept { return !witness.has_value(); }
};

/// Residual tests are relative to (1 + ‖S - S0‖_2) and (1 + ‖S‖‖S0‖).
FodStructureReport structure_check_local(const NormSpec& n, const HermitianMatrix& s,
                                         const FrameSequence& g0, double tol = 1e-6);

enum class SpecialCaseVerdict { certified_global, not_applicable, violates };

std::string to_string(SpecialCaseVerdict v);

struct SpecialCaseReport {
  SpecialCaseVerdict verdict = SpecialCaseVerdict::not_applicable;
  std::optional<double> common_eigenvalue;  // c_1 when the hypothesis holds
  double spectrum_gap = 0.0;  // max |lambda(S0) - (lambda(S) - c_1)^+|
  double theta_value = 0.0;
  double naive_bound = 0.0;
};

/// Global certification when every g_i is an eigenvector of S - S0 for one
/// common eigenvalue c_1. Requires k >= d and a strictly convex N.
SpecialCaseReport special_case_certify(const NormSpec& n, const HermitianMatrix& s,
                                       const FrameSequence& g0, double tol = 1e-6);

struct FodOptions {
  /// Objective is N(S - S_G)^p for schatten p (Theta^2 for frobenius).
  NormSpec norm = NormSpec::frobenius();
  double grad_tol = 1e-10;
  int max_iters = 50000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  /// Keep the trace only every `trace_stride` iterations (plus the last).
  int trace_stride = 1;
};

struct FodIterate {
  int iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct FodResult {
  FrameSequence frame;
  std::vector<FodIterate> trace;
  bool converged = false;
  double objective = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
};

/// Riemannian gradient norm of the descent objective at G (tangent to the
/// product of spheres).
double fod_gradient_norm(const HermitianMatrix& s, const FrameSequence& g,
                         const NormSpec& n = NormSpec::frobenius());

/// Projected gradient descent on T_d(a) from a seeded random start.
FodResult fod_descent(const HermitianMatrix& s, const RealVector& a, std::uint64_t seed,
                      const FodOptions& opts = {});

/// Same iteration from a given start.
FodResult fod_descent_from(const HermitianMatrix& s, const FrameSequence& start,
                           const FodOptions& opts = {});

struct FodOptimizeResult {
  FodResult best;
  Index best_restart = 0;
  std::vector<double> restart_objectives;
  std::vector<bool> restart_converged;
};

/// Runs `restarts` independent descents (seeds seed, seed+1, ...) on up to
/// `threads` workers and keeps the lowest objective, ties to the lowest
/// restart index.
FodOptimizeResult fod_optimize(const HermitianMatrix& s, const RealVector& a, int restarts,
                               std::uint64_t seed, const FodOptions& opts = {},
                               unsigned threads = 1);

/// Frame move g_l(t) = sqrt(1 - t²|z_l|²) g_l + t z_l sqrt(a_l) h for a
/// linearly dependent cluster that sits below another eigenvalue c of
/// S - S0 (h a unit eigenvector for c). Returns nullopt when the cluster is
/// independent, when no larger eigenvalue exists, or when the sampled
/// decrease of Theta (under `n`) cannot be verified.
std::optional<DescentCurve> escape_move(const HermitianMatrix& s, const FrameSequence& g0,
                                        Index cluster_index, double tol = 1e-6,
                                        const NormSpec& n = NormSpec::frobenius());

}  // namespace lidskii
