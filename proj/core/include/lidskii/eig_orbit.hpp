#pragma once

#include <cstdint>
#include <optional>

#include "lidskii/descent.hpp"
#include "lidskii/matrix_core.hpp"
#include "lidskii/norms.hpp"

namespace lidskii {

/// The unitary orbit O_mu = {G Hermitian : lambda(G) = mu}.
struct OrbitSpec {
  SpectrumVector mu;
  Index dim() const noexcept { return mu.size(); }
};

/// Phi(G) = N(S - G).
double phi(const NormSpec& n, const HermitianMatrix& s, const HermitianMatrix& g);

/// G^op = sum mu_i v_i (x) v_i in an eigenbasis of S ordered by lambda(S).
/// lambda(S - G^op) = (lambda(S) - mu) sorted, and G^op minimizes Phi on O_mu
/// for every unitarily invariant norm.
HermitianMatrix global_minimizer_eig(const HermitianMatrix& s, const SpectrumVector& mu);

/// Delta(U, V) = N(U* S U - V* G0 V).
double delta_map(const NormSpec& n, const HermitianMatrix& s, const HermitianMatrix& g0,
                 const UnitaryMatrix& u, const UnitaryMatrix& v);

/// Common eigenbasis of commuting S and G0. lambda = lambda(S) non-increasing;
/// nu_i = <G0 v_i, v_i>, sorted non-increasingly inside each cluster of
/// lambda.
struct JointEigenbasis {
  UnitaryMatrix basis;
  RealVector lambda;
  RealVector nu;
};

JointEigenbasis joint_eigenbasis(const HermitianMatrix& s, const HermitianMatrix& g0);

struct EigCertificate {
  Verdict verdict = Verdict::inconclusive;
  double commutator_residual = 0.0;
  std::optional<UnitaryMatrix> joint_basis;
  RealVector lambda;  // in the joint basis (when commuting)
  RealVector nu;
  bool alignment_ok = false;
  double phi_value = 0.0;
  /// max |lambda(S - G0) - (lambda(S) - lambda(G0)) sorted|.
  double lidskii_gap = 0.0;
  std::optional<DescentCurve> descent_witness;
};

/// Decides whether G0 is a local minimizer of Phi on its orbit for a
/// strictly convex N (which then makes it global), or produces a verified
/// descent curve. `seed` drives the local search used for non-commuting
/// candidates.
EigCertificate certify_local_eig(const NormSpec& n, const HermitianMatrix& s,
                                 const HermitianMatrix& g0, double tol = tol::kNullSpace,
                                 std::uint64_t seed = 0);

/// G(t) = U(t) G0 U(t)*, where U(t) rotates the (v_j, v_{j+1}) plane of
/// `joint_basis` by angle t in [0, pi/2). Requires lambda_j > lambda_{j+1}
/// and nu_j < nu_{j+1} in that basis.
DescentCurve descent_curve_eig(const NormSpec& n, const HermitianMatrix& s,
                               const HermitianMatrix& g0, Index j,
                               const UnitaryMatrix& joint_basis);

/// Random two-sided search over Delta near (I, I) with radii 1e-2 .. 1e-6.
/// Returns a verified, sampled-monotone curve on the orbit of G0, if found.
std::optional<DescentCurve> search_orbit_descent(const NormSpec& n, const HermitianMatrix& s,
                                                 const HermitianMatrix& g0, std::uint64_t seed);

}  // namespace lidskii
