#include <gtest/gtest.h>

#include <cmath>

#include "lidskii/frames.hpp"
#include "lidskii/samplers.hpp"
#include "oracles.hpp"

using namespace lidskii;

namespace {

RealVector vec(std::initializer_list<double> xs) {
  RealVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

HermitianMatrix dg(std::initializer_list<double> xs) { return HermitianMatrix::diagonal(vec(xs)); }

Matrix cols(Index d, std::initializer_list<std::initializer_list<Complex>> vs) {
  Matrix m(d, static_cast<Index>(vs.size()));
  Index j = 0;
  for (const auto& v : vs) {
    Index i = 0;
    for (const Complex& x : v) m(i++, j) = x;
    ++j;
  }
  return m;
}

const NormSpec kFrob = NormSpec::frobenius();

}  // namespace

TEST(FrameSequence, SphereMembership) {
  EXPECT_NO_THROW(FrameSequence(Matrix::Identity(2, 2), vec({1, 1})));
  EXPECT_THROW(FrameSequence(Matrix::Identity(2, 2), vec({1, 2})), PreconditionError);
  EXPECT_THROW(FrameSequence(Matrix::Zero(2, 1), vec({0})), PreconditionError);
  EXPECT_THROW(FrameSequence(Matrix::Identity(2, 2), vec({1})), PreconditionError);
  const FrameSequence p = FrameSequence::projected(cols(2, {{3, 4}}), vec({2}));
  EXPECT_LT(p.sphere_residual(), 1e-15);
  EXPECT_NEAR(std::abs(p.vector(0)[0]), 0.6 * std::sqrt(2.0), 1e-15);
}

TEST(Synthesis, Examples) {
  EXPECT_EQ(synthesis(FrameSequence(Matrix::Identity(3, 3), vec({1, 1, 1}))), Matrix::Identity(3, 3));
  Matrix want(2, 2);
  want << 1, 1, 0, 0;
  EXPECT_EQ(synthesis(FrameSequence(cols(2, {{1, 0}, {1, 0}}), vec({1, 1}))), want);
  const Matrix g = cols(3, {{Complex(0, 1), 0, 0}});
  EXPECT_EQ(synthesis(FrameSequence(g, vec({1}))), g);
}

TEST(FrameOperator, Examples) {
  EXPECT_LT((frame_operator(FrameSequence(Matrix::Identity(2, 2), vec({1, 1}))).matrix() -
             Matrix::Identity(2, 2))
                .norm(),
            1e-15);
  EXPECT_LT((frame_operator(FrameSequence(cols(2, {{1, 0}, {1, 0}}), vec({1, 1}))).matrix() -
             diag(vec({2, 0})))
                .norm(),
            1e-15);
  // (1,1) scaled to norm^2 = 2: S_G = [[1,1],[1,1]].
  const HermitianMatrix r = frame_operator(FrameSequence(cols(2, {{1, 1}}), vec({2})));
  EXPECT_NEAR(r.matrix().trace().real(), 2.0, 1e-15);
  EXPECT_LT((eigenvalues(r).values() - vec({2, 0})).norm(), 1e-14);
}

TEST(Theta, Examples) {
  const FrameSequence e(Matrix::Identity(2, 2), vec({1, 1}));
  EXPECT_NEAR(theta(kFrob, 2.0 * HermitianMatrix::identity(2), e), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(theta(kFrob, HermitianMatrix::identity(2), e), 0.0);
  const FrameSequence g = FrameSequence::projected(cols(2, {{1, 2}, {Complex(0, 1), 1}}), vec({1, 3}));
  EXPECT_NEAR(theta(NormSpec::schatten(3.0), HermitianMatrix::zero(2), g),
              evaluate(NormSpec::schatten(3.0), frame_operator(g)), 1e-14);
  EXPECT_THROW(theta(kFrob, HermitianMatrix::identity(3), e), PreconditionError);
}

TEST(WaterFill, Examples) {
  auto w = water_fill(SpectrumVector(vec({3, 2, 1})), 3.0);
  EXPECT_NEAR(w.level, oracle::water_level(vec({3, 2, 1}), 3.0), 1e-12);
  EXPECT_NEAR(w.level, 1.0, 1e-14);
  EXPECT_LT((w.spectrum.values() - vec({2, 1, 0})).norm(), 1e-14);

  w = water_fill(SpectrumVector(vec({5})), 2.0);
  EXPECT_NEAR(w.level, 3.0, 1e-14);
  EXPECT_NEAR(w.spectrum[0], 2.0, 1e-14);

  w = water_fill(SpectrumVector(vec({1, 1})), 2.0);
  EXPECT_NEAR(w.level, 0.0, 1e-14);
  EXPECT_LT((w.spectrum.values() - vec({1, 1})).norm(), 1e-14);

  EXPECT_THROW(water_fill(SpectrumVector(vec({1, 1})), 0.0), PreconditionError);
}

TEST(WaterFill, RootAgainstBisectionAndMonotone) {
  Rng rng(1);
  std::uniform_real_distribution<double> ut(0.01, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Index d = 1 + i % 6;
    const SpectrumVector lam = samplers::random_spectrum(d, rng, 0.0, 4.0);
    const double t = ut(rng);
    const WaterFill w = water_fill(lam, t);
    const double root = (lam.values().array() - w.level).cwiseMax(0.0).sum();
    EXPECT_LE(std::abs(root - t), 1e-10 * (1.0 + t));
    EXPECT_LE(w.level, lam[0]);
    EXPECT_NEAR(w.level, oracle::water_level(lam.values(), t), 1e-9 * (1.0 + t));
    EXPECT_LE(water_fill(lam, 1.1 * t).level, w.level + 1e-12);
  }
}

TEST(NaiveLowerBound, Examples) {
  auto nb = naive_lower_bound(kFrob, dg({3, 2, 1}), 3.0);
  EXPECT_NEAR(nb.value, std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(nb.level, 1.0, 1e-14);

  const HermitianMatrix s = dg({4, 2, 1});
  nb = naive_lower_bound(NormSpec::schatten(3.0), s, 7.0);
  EXPECT_NEAR(nb.value, 0.0, 1e-14);
  EXPECT_LT((nb.minimizer.matrix() - s.matrix()).norm(), 1e-14);

  nb = naive_lower_bound(kFrob, HermitianMatrix::zero(3), 6.0);
  EXPECT_NEAR(nb.level, -2.0, 1e-14);
  EXPECT_LT((nb.minimizer.matrix() - 2.0 * Matrix::Identity(3, 3)).norm(), 1e-14);
  EXPECT_NEAR(nb.value, 2.0 * std::sqrt(3.0), 1e-14);
}

TEST(NaiveLowerBound, BelowThetaAndPsdSamples) {
  Rng rng(2);
  const std::vector<NormSpec> norms = {kFrob, NormSpec::schatten(1.0), NormSpec::schatten(3.0),
                                       NormSpec::spectral(), NormSpec::kyfan(2)};
  std::uniform_real_distribution<double> ua(0.2, 2.0);
  for (int i = 0; i < 30; ++i) {
    const Index d = 1 + i % 5;
    const Index k = 1 + i % 8;
    const HermitianMatrix s = samplers::random_psd_trace(d, 4.0, rng);
    RealVector a(k);
    for (Index j = 0; j < k; ++j) a[j] = ua(rng);
    for (const auto& n : norms) {
      const NaiveBound nb = naive_lower_bound(n, s, a.sum());
      for (int r = 0; r < 100; ++r) {
        EXPECT_LE(nb.value, theta(n, s, samplers::random_frame(d, a, rng)) + 1e-8);
        EXPECT_LE(nb.value, evaluate(n, s - samplers::random_psd_trace(d, a.sum(), rng)) + 1e-8);
      }
    }
  }
}

TEST(FrameProperties, TraceConservation) {
  Rng rng(3);
  std::uniform_real_distribution<double> ua(0.1, 3.0);
  for (int i = 0; i < 500; ++i) {
    const Index d = 1 + i % 5;
    const Index k = 1 + i % 7;
    RealVector a(k);
    for (Index j = 0; j < k; ++j) a[j] = ua(rng);
    const FrameSequence g = samplers::random_frame(d, a, rng);
    EXPECT_LE(g.sphere_residual(), 1e-10);
    EXPECT_NEAR(frame_operator(g).matrix().trace().real(), a.sum(), 1e-10 * (1.0 + a.sum()));
  }
}

TEST(StructureCheck, Examples) {
  const FrameSequence e(Matrix::Identity(2, 2), vec({1, 1}));
  auto r = structure_check_local(kFrob, 2.0 * HermitianMatrix::identity(2), e);
  EXPECT_TRUE(r.consistent());
  EXPECT_TRUE(r.lidskii_aligned);
  EXPECT_LT(r.commute_residual, 1e-15);
  for (double x : r.eigvec_residuals) EXPECT_LT(x, 1e-15);
  ASSERT_EQ(r.partition.size(), 1u);
  EXPECT_NEAR(r.partition[0].value, 1.0, 1e-15);
  EXPECT_EQ(r.partition[0].members, (std::vector<Index>{0, 1}));
  EXPECT_EQ(r.partition[0].span_dim, 2);
  EXPECT_FALSE(r.partition[0].independence_required);

  // g = (1,1)/sqrt 2: (S - g g*) g = (2,0)/sqrt 2, Rayleigh quotient 1,
  // residual (1,-1)/sqrt 2 of norm 1.
  const FrameSequence g = FrameSequence::projected(cols(2, {{1, 1}}), vec({1}));
  r = structure_check_local(kFrob, dg({3, 1}), g);
  ASSERT_FALSE(r.consistent());
  EXPECT_EQ(r.witness->failed, StructureCheck::eigenvector);
  EXPECT_EQ(r.witness->index, 0);
  EXPECT_NEAR(r.fitted_eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(r.eigvec_residuals[0], 1.0, 1e-14);

  EXPECT_THROW(structure_check_local(kFrob, HermitianMatrix::identity(3), e), PreconditionError);
}

TEST(StructureCheck, DependentClusterBelowLargerEigenvalue) {
  // {e1, e1} with S = diag(2,5): S - S0 = diag(0,5), both vectors at c = 0.
  // lambda(S - S0) = (5,0) against (5,2) - (2,0) = (3,2), so alignment is
  // the first condition to fail; the cluster is dependent as well.
  const FrameSequence g(cols(2, {{1, 0}, {1, 0}}), vec({1, 1}));
  const auto r = structure_check_local(kFrob, dg({2, 5}), g);
  ASSERT_FALSE(r.consistent());
  EXPECT_EQ(r.witness->failed, StructureCheck::lidskii_alignment);
  EXPECT_FALSE(r.lidskii_aligned);
  EXPECT_NEAR(r.alignment_gap, 2.0, 1e-14);
  ASSERT_EQ(r.partition.size(), 1u);
  EXPECT_TRUE(r.partition[0].independence_required);
  EXPECT_FALSE(r.partition[0].independent);
  EXPECT_EQ(r.partition[0].span_dim, 1);
}

TEST(SpecialCase, Examples) {
  const FrameSequence e(Matrix::Identity(2, 2), vec({1, 1}));
  auto r = special_case_certify(kFrob, 2.0 * HermitianMatrix::identity(2), e);
  EXPECT_EQ(r.verdict, SpecialCaseVerdict::certified_global);
  ASSERT_TRUE(r.common_eigenvalue.has_value());
  EXPECT_NEAR(*r.common_eigenvalue, 1.0, 1e-15);
  EXPECT_NEAR(r.theta_value, r.naive_bound, 1e-14);

  // {e1, e1} under diag(3,0): c_1 = 1 and lambda(S0) = (2,0) = ((3-1)^+, (0-1)^+).
  const FrameSequence ee(cols(2, {{1, 0}, {1, 0}}), vec({1, 1}));
  r = special_case_certify(kFrob, dg({3, 0}), ee);
  EXPECT_EQ(r.verdict, SpecialCaseVerdict::certified_global);
  EXPECT_NEAR(r.theta_value, 1.0, 1e-14);
  EXPECT_NEAR(r.naive_bound, 1.0, 1e-14);

  // Fitted values 2 and 1 on {e1, e2} under diag(3,2).
  EXPECT_EQ(special_case_certify(kFrob, dg({3, 2}), e).verdict, SpecialCaseVerdict::not_applicable);

  const FrameSequence one(cols(2, {{1, 0}}), vec({1}));
  EXPECT_THROW(special_case_certify(kFrob, dg({3, 2}), one), PreconditionError);
  EXPECT_THROW(special_case_certify(NormSpec::spectral(), dg({3, 2}), e), PreconditionError);
}

TEST(EscapeMove, Examples) {
  const FrameSequence ee(cols(2, {{1, 0}, {1, 0}}), vec({1, 1}));
  // c_j = 1 is already the top of sigma(S - S0) = {1, 0}.
  EXPECT_FALSE(escape_move(dg({3, 0}), ee, 0).has_value());

  const auto curve = escape_move(dg({2, 5}), ee, 0);
  ASSERT_TRUE(curve.has_value());
  EXPECT_EQ(curve->kind, CurveKind::escape);
  EXPECT_GT(curve->verified_drop, verification_threshold(5.0));
  EXPECT_TRUE(curve->strictly_decreasing());
  // |z_l| = 1/2 and h = e2 give S(t) = diag(2 - t^2/2, t^2/2), so
  // Theta_F(t)^2 = t^4/4 + (5 - t^2/2)^2.
  for (const auto& smp : curve->samples) {
    const double t2 = smp.t * smp.t;
    EXPECT_NEAR(smp.value, std::sqrt(t2 * t2 / 4 + (5 - t2 / 2) * (5 - t2 / 2)), 1e-12) << smp.t;
    EXPECT_NO_THROW(FrameSequence(curve->point(smp.t), vec({1, 1}), 1e-10));
  }

  const FrameSequence e(Matrix::Identity(2, 2), vec({1, 1}));
  EXPECT_FALSE(escape_move(dg({2, 5}), e, 0).has_value());
}

TEST(EscapeMove, ConstructedDependentClusters) {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto dc = samplers::dependent_cluster(2 + i % 3, rng);
    const auto report = structure_check_local(kFrob, dc.s, dc.g0);
    Index target = -1;
    for (std::size_t j = 0; j < report.partition.size(); ++j) {
      if (report.partition[j].independence_required && !report.partition[j].independent) {
        target = static_cast<Index>(j);
        break;
      }
    }
    ASSERT_GE(target, 0);
    EXPECT_NEAR(report.partition[target].value, dc.cluster_value, 1e-8);
    const NormSpec n = i % 2 == 0 ? kFrob : NormSpec::schatten(3.0);
    const auto curve = escape_move(dc.s, dc.g0, target, 1e-6, n);
    ASSERT_TRUE(curve.has_value());
    EXPECT_GT(curve->verified_drop, verification_threshold(curve->initial_value()));
    for (const auto& smp : curve->samples) {
      EXPECT_LE(FrameSequence(curve->point(smp.t), dc.g0.norms(), 1e-9).sphere_residual(), 1e-10);
    }
  }
}

TEST(FodDescent, ConvergesToTightFrame) {
  Matrix start = Matrix::Identity(2, 2);
  start(1, 0) = 1e-3;
  start(0, 1) = Complex(0, -1e-3);
  const auto r = fod_descent_from(HermitianMatrix::identity(2),
                                  FrameSequence::projected(start, vec({1, 1})));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(std::sqrt(r.objective), 1e-6);
  EXPECT_LT(theta(kFrob, HermitianMatrix::identity(2), r.frame), 1e-6);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_LE(r.trace[i].objective, r.trace[i - 1].objective + 1e-14);
  }
}

TEST(FodDescent, StationaryStartStopsImmediately) {
  const FrameSequence e(Matrix::Identity(2, 2), vec({1, 1}));
  EXPECT_LT(fod_gradient_norm(2.0 * HermitianMatrix::identity(2), e), 1e-15);
  const auto r = fod_descent_from(2.0 * HermitianMatrix::identity(2), e);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.frame.vectors(), e.vectors());
}

TEST(FodDescent, SeedDeterminism) {
  const HermitianMatrix s = dg({3, 1, 0.5});
  const RealVector a = vec({1, 0.5, 0.7, 1.2});
  const auto r1 = fod_descent(s, a, 42);
  const auto r2 = fod_descent(s, a, 42);
  ASSERT_EQ(r1.trace.size(), r2.trace.size());
  for (std::size_t i = 0; i < r1.trace.size(); ++i) {
    EXPECT_EQ(r1.trace[i].objective, r2.trace[i].objective);
  }
  EXPECT_EQ(r1.frame.vectors(), r2.frame.vectors());
  EXPECT_NE(fod_descent(s, a, 43).frame.vectors(), r1.frame.vectors());
}

TEST(FodOptimize, ThreadCountDoesNotChangeResult) {
  const HermitianMatrix s = dg({2, 1, 0.2});
  const RealVector a = vec({0.8, 0.8, 0.5});
  const auto one = fod_optimize(s, a, 6, 9, {}, 1);
  const auto four = fod_optimize(s, a, 6, 9, {}, 4);
  EXPECT_EQ(one.best_restart, four.best_restart);
  EXPECT_EQ(one.restart_objectives, four.restart_objectives);
  EXPECT_EQ(one.best.frame.vectors(), four.best.frame.vectors());
  for (double v : one.restart_objectives) EXPECT_GE(v, one.best.objective);
}

TEST(FodProperties, ConvergedPointsHaveMinimizerStructure) {
  Rng rng(5);
  std::uniform_real_distribution<double> ua(0.2, 1.5);
  int converged = 0;
  for (int i = 0; i < 24; ++i) {
    const Index d = 2 + i % 3;
    const Index k = d + i % 3;
    const HermitianMatrix s = samplers::random_psd_trace(d, 3.0, rng);
    RealVector a(k);
    for (Index j = 0; j < k; ++j) a[j] = ua(rng);
    const auto r = fod_descent(s, a, 100 + static_cast<std::uint64_t>(i));
    if (r.grad_norm >= 1e-9) continue;
    ++converged;
    const auto report = structure_check_local(kFrob, s, r.frame, 1e-6);
    EXPECT_TRUE(report.consistent()) << "instance " << i << " "
                                     << (report.witness ? to_string(report.witness->failed) : "");
  }
  EXPECT_GE(converged, 12);
}
