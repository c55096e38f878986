#pragma once

#include <cstdint>
#include <optional>

#include "lidskii/descent.hpp"
#include "lidskii/matrix_core.hpp"
#include "lidskii/norms.hpp"

namespace lidskii {

/// V_s = {C : s(C) = s}. The s = 0 orbit is {0} and needs permits_zero.
struct SvOrbitSpec {
  SpectrumVector s;
  bool permits_zero = false;
  Index dim() const noexcept { return s.size(); }
};

/// Simultaneous reduction U* A V = D_alpha, U* B V = D_beta.
struct JointSVD {
  UnitaryMatrix u;
  UnitaryMatrix v;
  SpectrumVector alpha;  // s(A)
  RealVector beta;       // may carry signs before certification
  double residual_a = 0.0;  // ||U* A V - D_alpha||_F
  double residual_b = 0.0;  // ||U* B V - D_beta||_F
};

struct SvCertificate {
  Verdict verdict = Verdict::inconclusive;
  double residual_adjoint_left = 0.0;   // ||A*B - (A*B)*||_F
  double residual_adjoint_right = 0.0;  // ||AB* - (AB*)*||_F
  double psi_value = 0.0;
  std::optional<JointSVD> joint;
  std::optional<DescentCurve> descent_witness;
};

/// Psi(C) = N(A - C).
double psi(const NormSpec& n, const GeneralMatrix& a, const GeneralMatrix& c);

/// With A = V* D_{s(A)} U, returns V* D_s U.
GeneralMatrix global_minimizer_sv(const GeneralMatrix& a, const SpectrumVector& s);

/// Eckart-Young reduction for A, B with A*B and AB* Hermitian: cluster the
/// singular values of A, check that B is block diagonal in the SVD frame of
/// A, diagonalize the Hermitian blocks and take an SVD of the block that
/// meets a zero singular value. Throws PreconditionError if the hypothesis
/// fails beyond tol.
JointSVD joint_svd(const GeneralMatrix& a, const GeneralMatrix& b, double tol = tol::kNullSpace);

/// Local/global certification of B on V_{s(B)} for a strictly convex norm.
SvCertificate certify_local_sv(const NormSpec& n, const GeneralMatrix& a,
                               const GeneralMatrix& b, double tol = tol::kNullSpace,
                               std::uint64_t seed = 0);

struct SvEqualityReport {
  /// s(A - B) = |s(A) - s(B)| sorted, within tol * (1 + s1(A) + s1(B)).
  bool spectral_equality = false;
  /// joint_svd succeeds with beta >= 0 and sorted.
  bool joint_svd_feasible = false;
  double gap = 0.0;
};

SvEqualityReport sv_equality_report(const GeneralMatrix& a, const GeneralMatrix& b,
                                    double tol = 1e-7);

/// Equality in the singular-value Lidskii inequality.
bool sv_equality_case(const GeneralMatrix& a, const GeneralMatrix& b, double tol = 1e-7);

}  // namespace lidskii
