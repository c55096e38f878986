#include "lidskii/eig_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lidskii/majorization.hpp"

namespace lidskii {

namespace {

constexpr int kCurveSamples = 64;

RealVector real_diagonal(const Matrix& m) { return m.diagonal().real(); }

double lidskii_gap(const HermitianMatrix& s, const HermitianMatrix& g) {
  const RealVector lhs = eigenvalues(s - g).values();
  const RealVector rhs =
      sort_desc(eigenvalues(s).values() - eigenvalues(g).values()).values();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

HermitianMatrix random_unit_hermitian(Index d, Rng& rng) {
  HermitianMatrix x = random_hermitian(d, rng);
  return (1.0 / x.matrix().norm()) * x;
}

}  // namespace

double phi(const NormSpec& n, const HermitianMatrix& s, const HermitianMatrix& g) {
  require_square(g.matrix(), "phi", s.dim());
  return evaluate(n, s - g);
}

HermitianMatrix global_minimizer_eig(const HermitianMatrix& s, const SpectrumVector& mu) {
  if (mu.size() != s.dim()) {
    throw PreconditionError("global_minimizer_eig: length(mu) must equal dim(S)");
  }
  const auto [lambda, v] = eigh(s);
  return HermitianMatrix::diagonal(mu.values()).conjugate(v);
}

double delta_map(const NormSpec& n, const HermitianMatrix& s, const HermitianMatrix& g0,
                 const UnitaryMatrix& u, const UnitaryMatrix& v) {
  const Index d = s.dim();
  require_square(g0.matrix(), "delta_map", d);
  require_square(u.matrix(), "delta_map", d);
  require_square(v.matrix(), "delta_map", d);
  return evaluate(n, s.conjugate_adjoint(u) - g0.conjugate_adjoint(v));
}

JointEigenbasis joint_eigenbasis(const HermitianMatrix& s, const HermitianMatrix& g0) {
  require_square(g0.matrix(), "joint_eigenbasis", s.dim());
  const auto [lambda, vs] = eigh(s);
  Matrix basis = vs.matrix();
  for (const auto& [b, e] : cluster_ranges(lambda.values(), gap_tolerance(lambda.values()))) {
    const Index m = e - b;
    if (m == 1) continue;
    const Matrix w = basis.middleCols(b, m);
    const HermitianMatrix block(Matrix(w.adjoint() * g0.matrix() * w), 1e-6);
    const auto [nu_block, q] = eigh(block);
    basis.middleCols(b, m) = w * q.matrix();
  }
  JointEigenbasis out{UnitaryMatrix(basis, 1e-9), lambda.values(),
                      real_diagonal(basis.adjoint() * g0.matrix() * basis)};
  return out;
}

DescentCurve descent_curve_eig(const NormSpec& n, const HermitianMatrix& s,
                               const HermitianMatrix& g0, Index j,
                               const UnitaryMatrix& joint_basis) {
  const Index d = s.dim();
  require_square(g0.matrix(), "descent_curve_eig", d);
  require_square(joint_basis.matrix(), "descent_curve_eig", d);
  if (j < 0 || j + 1 >= d) throw PreconditionError("descent_curve_eig: index out of range");

  const Matrix& v = joint_basis.matrix();
  const RealVector lambda = real_diagonal(v.adjoint() * s.matrix() * v);
  const RealVector nu = real_diagonal(v.adjoint() * g0.matrix() * v);
  if (!(lambda[j] > lambda[j + 1] + gap_tolerance(lambda))) {
    throw PreconditionError("descent_curve_eig: requires lambda_j > lambda_{j+1}");
  }
  if (!(nu[j] < nu[j + 1] - gap_tolerance(nu))) {
    throw PreconditionError("descent_curve_eig: requires nu_j < nu_{j+1}");
  }

  DescentCurve curve;
  curve.kind = CurveKind::givens;
  curve.index = j;
  curve.t_max = std::numbers::pi / 2;
  const Matrix g0m = g0.matrix();
  curve.point = [v, g0m, j](double t) {
    Matrix r = Matrix::Identity(v.rows(), v.cols());
    r(j, j) = std::cos(t);
    r(j + 1, j + 1) = std::cos(t);
    r(j, j + 1) = std::sin(t);
    r(j + 1, j) = -std::sin(t);
    const Matrix u = v * r * v.adjoint();
    const Matrix g = u * g0m * u.adjoint();
    return Matrix(0.5 * (g + g.adjoint()));
  };
  const HermitianMatrix sc = s;
  sample_curve(curve, log_spaced_grid(1e-4, std::numbers::pi / 2 - 1e-3, kCurveSamples),
               [&n, &sc](const Matrix& g) { return phi(n, sc, HermitianMatrix(g)); });
  return curve;
}

std::optional<DescentCurve> search_orbit_descent(const NormSpec& n, const HermitianMatrix& s,
                                                 const HermitianMatrix& g0, std::uint64_t seed) {
  const Index d = s.dim();
  const double phi0 = phi(n, s, g0);
  const double threshold = verification_threshold(phi0);
  Rng rng(seed);
  const int trials = 8 + 4 * static_cast<int>(d * d);

  for (double radius : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    for (int trial = 0; trial < trials; ++trial) {
      const HermitianMatrix x1 = random_unit_hermitian(d, rng);
      const HermitianMatrix x2 = random_unit_hermitian(d, rng);
      for (double sign : {1.0, -1.0}) {
        const double step = sign * radius;
        const UnitaryMatrix u = unitary_exp(step * x1);
        const UnitaryMatrix v = unitary_exp(step * x2);
        if (!(delta_map(n, s, g0, u, v) < phi0 - threshold)) continue;

        // Delta(U, V) = Phi(Z* G0 Z) with Z = V U*; follow that path on O_mu.
        DescentCurve curve;
        curve.kind = CurveKind::orbit_search;
        curve.t_max = 1.0;
        const Matrix g0m = g0.matrix();
        curve.point = [g0m, x1, x2, step](double t) {
          const Matrix u_t = unitary_exp((t * step) * x1).matrix();
          const Matrix v_t = unitary_exp((t * step) * x2).matrix();
          const Matrix z = v_t * u_t.adjoint();
          const Matrix g = z.adjoint() * g0m * z;
          return Matrix(0.5 * (g + g.adjoint()));
        };
        sample_curve(curve, log_spaced_grid(1e-3, 1.0, kCurveSamples),
                     [&n, &s](const Matrix& g) { return phi(n, s, HermitianMatrix(g)); });
        if (curve.verified_drop > threshold && curve.strictly_decreasing()) return curve;
      }
    }
  }
  return std::nullopt;
}

EigCertificate certify_local_eig(const NormSpec& n, const HermitianMatrix& s,
                                 const HermitianMatrix& g0, double tol, std::uint64_t seed) {
  if (!n.strictly_convex()) {
    throw PreconditionError("certify_local_eig: the norm " + n.to_string() +
                            " is not strictly convex");
  }
  require_square(g0.matrix(), "certify_local_eig", s.dim());

  EigCertificate cert;
  cert.phi_value = phi(n, s, g0);
  cert.commutator_residual = commutator(s.matrix(), g0.matrix()).norm();
  cert.lidskii_gap = lidskii_gap(s, g0);
  const double scale = 1.0 + s.matrix().norm() * g0.matrix().norm();

  if (cert.commutator_residual > tol * scale) {
    cert.descent_witness = search_orbit_descent(n, s, g0, seed);
    cert.verdict = cert.descent_witness ? Verdict::not_local_min : Verdict::inconclusive;
    return cert;
  }

  JointEigenbasis joint = joint_eigenbasis(s, g0);
  cert.lambda = joint.lambda;
  cert.nu = joint.nu;
  cert.joint_basis = joint.basis;

  const double nu_gap = gap_tolerance(joint.nu);
  std::optional<Index> violation;
  for (Index i = 0; i + 1 < joint.nu.size(); ++i) {
    if (joint.nu[i] < joint.nu[i + 1] - nu_gap) {
      violation = i;
      break;
    }
  }
  cert.alignment_ok = !violation.has_value();
  if (cert.alignment_ok) {
    cert.verdict = Verdict::certified_global;
    return cert;
  }
  // nu is sorted inside each lambda-cluster, so a violation sits on a cluster
  // boundary where lambda_j > lambda_{j+1}.
  DescentCurve curve = descent_curve_eig(n, s, g0, *violation, joint.basis);
  if (curve.verified_drop > verification_threshold(cert.phi_value)) {
    cert.verdict = Verdict::not_local_min;
    cert.descent_witness = std::move(curve);
  } else {
    cert.verdict = Verdict::inconclusive;
  }
  return cert;
}

}  // namespace lidskii
