#include "lidskii/sv_orbit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "lidskii/eig_orbit.hpp"
#include "lidskii/majorization.hpp"

namespace lidskii {

namespace {

constexpr int kCurveSamples = 64;

struct AdjointResiduals {
  double left = 0.0;
  double right = 0.0;
};

AdjointResiduals adjoint_residuals(const GeneralMatrix& a, const GeneralMatrix& b) {
  const Matrix left = a.adjoint() * b;
  const Matrix right = a * b.adjoint();
  return {(left - left.adjoint()).norm(), (right - right.adjoint()).norm()};
}

HermitianMatrix random_unit_hermitian(Index d, Rng& rng) {
  HermitianMatrix x = random_hermitian(d, rng);
  return (1.0 / x.matrix().norm()) * x;
}

std::optional<DescentCurve> search_sv_descent(const NormSpec& n, const GeneralMatrix& a,
                                              const GeneralMatrix& b, std::uint64_t seed) {
  const Index d = a.rows();
  const double psi0 = psi(n, a, b);
  const double threshold = verification_threshold(psi0);
  Rng rng(seed);
  const int trials = 8 + 4 * static_cast<int>(d * d);

  for (double radius : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    for (int trial = 0; trial < trials; ++trial) {
      std::array<HermitianMatrix, 4> x = {
          random_unit_hermitian(d, rng), random_unit_hermitian(d, rng),
          random_unit_hermitian(d, rng), random_unit_hermitian(d, rng)};
      for (double sign : {1.0, -1.0}) {
        const double step = sign * radius;
        // Xi(U1, U2, V1, V2) = N(A - P* B Q) with P = U2 U1*, Q = V2 V1*.
        auto moved = [x, b](double h) {
          const Matrix u1 = unitary_exp(h * x[0]).matrix();
          const Matrix u2 = unitary_exp(h * x[1]).matrix();
          const Matrix v1 = unitary_exp(h * x[2]).matrix();
          const Matrix v2 = unitary_exp(h * x[3]).matrix();
          const Matrix p = u2 * u1.adjoint();
          const Matrix q = v2 * v1.adjoint();
          return Matrix(p.adjoint() * b * q);
        };
        if (!(psi(n, a, moved(step)) < psi0 - threshold)) continue;

        DescentCurve curve;
        curve.kind = CurveKind::orbit_search;
        curve.t_max = 1.0;
        curve.point = [moved, step](double t) { return moved(t * step); };
        sample_curve(curve, log_spaced_grid(1e-3, 1.0, kCurveSamples),
                     [&n, &a](const Matrix& c) { return psi(n, a, c); });
        if (curve.verified_drop > threshold && curve.strictly_decreasing()) return curve;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

double psi(const NormSpec& n, const GeneralMatrix& a, const GeneralMatrix& c) {
  require_square(a, "psi");
  require_square(c, "psi", a.rows());
  return evaluate(n, GeneralMatrix(a - c));
}

GeneralMatrix global_minimizer_sv(const GeneralMatrix& a, const SpectrumVector& s) {
  require_square(a, "global_minimizer_sv");
  if (s.size() != a.rows()) {
    throw PreconditionError("global_minimizer_sv: length(s) must equal dim(A)");
  }
  if (s.size() > 0 && s[s.size() - 1] < 0.0) {
    throw PreconditionError("global_minimizer_sv: s must be non-negative");
  }
  const auto f = svd(a);
  return f.v.matrix().adjoint() * diag(s.values()) * f.u.matrix();
}

JointSVD joint_svd(const GeneralMatrix& a, const GeneralMatrix& b, double tol) {
  require_square(a, "joint_svd");
  const Index d = a.rows();
  require_square(b, "joint_svd", d);
  const double scale = (1.0 + a.norm()) * (1.0 + b.norm());
  const auto res = adjoint_residuals(a, b);
  if (res.left > tol * scale || res.right > tol * scale) {
    throw PreconditionError("joint_svd: A*B or AB* is not Hermitian (residuals " +
                            std::to_string(res.left) + ", " + std::to_string(res.right) + ")");
  }

  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector alpha = solver.singularValues();
  const Matrix p = solver.matrixU();
  const Matrix q = solver.matrixV();
  const Matrix bt = p.adjoint() * b * q;

  auto clusters = cluster_ranges(alpha, gap_tolerance(alpha));
  const double zero_tol = alpha[0] > 0.0 ? 1e-9 * alpha[0] : 1e-12;
  const bool has_zero_block = alpha[d - 1] < zero_tol;

  Matrix block_diag = Matrix::Zero(d, d);
  for (const auto& [s0, e0] : clusters) {
    block_diag.block(s0, s0, e0 - s0, e0 - s0) = bt.block(s0, s0, e0 - s0, e0 - s0);
  }
  const double off_mass = (bt - block_diag).norm();
  if (off_mass > tol * scale) {
    throw PreconditionError("joint_svd: off-diagonal block mass " + std::to_string(off_mass) +
                            " exceeds tolerance");
  }

  Matrix left = Matrix::Identity(d, d);
  Matrix right = Matrix::Identity(d, d);
  RealVector beta(d);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto [s0, e0] = clusters[c];
    const Index m = e0 - s0;
    const Matrix blk = bt.block(s0, s0, m, m);
    const bool zero_block = has_zero_block && c + 1 == clusters.size();
    if (zero_block) {
      Eigen::JacobiSVD<Matrix> bsvd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
      left.block(s0, s0, m, m) = bsvd.matrixU();
      right.block(s0, s0, m, m) = bsvd.matrixV();
      beta.segment(s0, m) = bsvd.singularValues();
    } else {
      if ((blk - blk.adjoint()).norm() > tol * scale) {
        throw PreconditionError("joint_svd: diagonal block is not Hermitian");
      }
      const auto [gamma, w] = eigh(HermitianMatrix(Matrix(0.5 * (blk + blk.adjoint()))));
      left.block(s0, s0, m, m) = w.matrix();
      right.block(s0, s0, m, m) = w.matrix();
      beta.segment(s0, m) = gamma.values();
    }
  }

  Matrix u = p * left;
  Matrix v = q * right;
  JointSVD out{UnitaryMatrix(u, 1e-9), UnitaryMatrix(v, 1e-9), SpectrumVector(alpha), beta};
  out.residual_a = (u.adjoint() * a * v - diag(alpha)).norm();
  out.residual_b = (u.adjoint() * b * v - diag(beta)).norm();
  return out;
}

SvCertificate certify_local_sv(const NormSpec& n, const GeneralMatrix& a,
                               const GeneralMatrix& b, double tol, std::uint64_t seed) {
  if (!n.strictly_convex()) {
    throw PreconditionError("certify_local_sv: the norm " + n.to_string() +
                            " is not strictly convex");
  }
  require_square(a, "certify_local_sv");
  const Index d = a.rows();
  require_square(b, "certify_local_sv", d);

  SvCertificate cert;
  cert.psi_value = psi(n, a, b);
  const auto res = adjoint_residuals(a, b);
  cert.residual_adjoint_left = res.left;
  cert.residual_adjoint_right = res.right;

  if (b.norm() == 0.0) {
    // V_0 = {0}.
    cert.verdict = Verdict::certified_global;
    return cert;
  }

  const double scale = (1.0 + a.norm()) * (1.0 + b.norm());
  if (res.left > tol * scale || res.right > tol * scale) {
    cert.descent_witness = search_sv_descent(n, a, b, seed);
    cert.verdict = cert.descent_witness ? Verdict::not_local_min : Verdict::inconclusive;
    return cert;
  }

  try {
    cert.joint = joint_svd(a, b, tol);
  } catch (const PreconditionError&) {
    cert.verdict = Verdict::inconclusive;
    return cert;
  }
  const JointSVD& joint = *cert.joint;
  const Matrix u = joint.u.matrix();
  const Matrix v = joint.v.matrix();
  const RealVector& alpha = joint.alpha.values();
  const RealVector& beta = joint.beta;

  Index worst = 0;
  beta.minCoeff(&worst);
  if (beta[worst] < -tol * (1.0 + b.norm())) {
    // B(t) = U W(t) D_beta V*, w_ll = e^{it}: |alpha_l - e^{it} beta_l| decreases on [0, pi].
    DescentCurve curve;
    curve.kind = CurveKind::phase;
    curve.index = worst;
    curve.t_max = std::numbers::pi;
    curve.point = [u, v, beta, worst](double t) {
      CVector w = beta.cast<Complex>();
      w[worst] *= std::polar(1.0, t);
      return Matrix(u * w.asDiagonal() * v.adjoint());
    };
    sample_curve(curve, log_spaced_grid(1e-4, std::numbers::pi, kCurveSamples),
                 [&n, &a](const Matrix& c) { return psi(n, a, c); });
    if (curve.verified_drop > verification_threshold(cert.psi_value)) {
      cert.verdict = Verdict::not_local_min;
      cert.descent_witness = std::move(curve);
    }
    return cert;
  }

  // beta >= 0: the remaining question is the ordering of beta against alpha,
  // which is the Hermitian-orbit problem for S = D_alpha, G0 = D_beta.
  const RealVector beta_plus = beta.cwiseMax(0.0);
  const HermitianMatrix s_diag = HermitianMatrix::diagonal(alpha);
  const HermitianMatrix g_diag = HermitianMatrix::diagonal(beta_plus);
  const EigCertificate inner = certify_local_eig(n, s_diag, g_diag, tol, seed);
  if (inner.verdict == Verdict::certified_global) {
    cert.verdict = Verdict::certified_global;
    return cert;
  }
  if (inner.verdict == Verdict::not_local_min && inner.descent_witness) {
    DescentCurve curve;
    curve.kind = inner.descent_witness->kind;
    curve.index = inner.descent_witness->index;
    curve.t_max = inner.descent_witness->t_max;
    auto diag_point = inner.descent_witness->point;
    curve.point = [u, v, diag_point](double t) {
      return Matrix(u * diag_point(t) * v.adjoint());
    };
    std::vector<double> grid;
    for (std::size_t i = 1; i < inner.descent_witness->samples.size(); ++i) {
      grid.push_back(inner.descent_witness->samples[i].t);
    }
    sample_curve(curve, grid, [&n, &a](const Matrix& c) { return psi(n, a, c); });
    if (curve.verified_drop > verification_threshold(cert.psi_value)) {
      cert.verdict = Verdict::not_local_min;
      cert.descent_witness = std::move(curve);
    }
  }
  return cert;
}

SvEqualityReport sv_equality_report(const GeneralMatrix& a, const GeneralMatrix& b, double tol) {
  require_square(a, "sv_equality_case");
  require_square(b, "sv_equality_case", a.rows());
  const RealVector sa = singular_values(a).values();
  const RealVector sb = singular_values(b).values();
  const RealVector sab = singular_values(GeneralMatrix(a - b)).values();
  const RealVector target = sort_desc((sa - sb).cwiseAbs()).values();
  const double scale = 1.0 + sa[0] + sb[0];

  SvEqualityReport out;
  out.gap = (sab - target).cwiseAbs().maxCoeff();
  out.spectral_equality = out.gap <= tol * scale;
  try {
    const JointSVD joint = joint_svd(a, b, tol);
    bool ok = joint.beta.minCoeff() >= -tol * scale;
    for (Index i = 0; ok && i + 1 < joint.beta.size(); ++i) {
      ok = joint.beta[i] >= joint.beta[i + 1] - tol * scale;
    }
    out.joint_svd_feasible = ok;
  } catch (const PreconditionError&) {
    out.joint_svd_feasible = false;
  }
  return out;
}

bool sv_equality_case(const GeneralMatrix& a, const GeneralMatrix& b, double tol) {
  return sv_equality_report(a, b, tol).spectral_equality;
}

}  // namespace lidskii
