#include <gtest/gtest.h>

#include <cmath>

#include "lidskii/eig_orbit.hpp"
#include "lidskii/majorization.hpp"
#include "lidskii/samplers.hpp"

using namespace lidskii;

namespace {

RealVector vec(std::initializer_list<double> xs) {
  RealVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

HermitianMatrix dg(std::initializer_list<double> xs) { return HermitianMatrix::diagonal(vec(xs)); }

const NormSpec kFrob = NormSpec::frobenius();

}  // namespace

TEST(Phi, Examples) {
  EXPECT_EQ(phi(kFrob, dg({3, 1}), dg({3, 1})), 0.0);
  EXPECT_NEAR(phi(kFrob, dg({3, 1}), dg({2, 0})), std::sqrt(2.0), 1e-14);
  Rng rng(1);
  const SpectrumVector mu(vec({2, 0.5, -1}));
  const double base = evaluate(NormSpec::schatten(3.0), diag(mu.values()));
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(phi(NormSpec::schatten(3.0), HermitianMatrix::zero(3), samplers::orbit_sample(mu, rng)),
                base, 1e-10);
  }
  EXPECT_THROW(phi(kFrob, dg({1, 2}), dg({1, 2, 3})), PreconditionError);
}

TEST(GlobalMinimizerEig, Examples) {
  const HermitianMatrix g = global_minimizer_eig(dg({3, 1}), SpectrumVector(vec({2, 0})));
  EXPECT_LT((g.matrix() - diag(vec({2, 0}))).norm(), 1e-14);
  EXPECT_LT((eigenvalues(dg({3, 1}) - g).values() - vec({1, 1})).norm(), 1e-14);

  const HermitianMatrix z = global_minimizer_eig(HermitianMatrix::zero(3), SpectrumVector(vec({3, 1, 0})));
  EXPECT_LT((eigenvalues(z).values() - vec({3, 1, 0})).norm(), 1e-12);

  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  const HermitianMatrix gop = global_minimizer_eig(HermitianMatrix(s), SpectrumVector(vec({1, 0})));
  Matrix expected(2, 2);
  expected << 0.5, 0.5, 0.5, 0.5;  // v1 (x) v1 with v1 = (1,1)/sqrt 2
  EXPECT_LT((gop.matrix() - expected).norm(), 1e-12);
  EXPECT_LT((eigenvalues(HermitianMatrix(s) - gop).values() - vec({2, 1})).norm(), 1e-12);
  EXPECT_THROW(global_minimizer_eig(dg({1, 2}), SpectrumVector(vec({1}))), PreconditionError);
}

TEST(GlobalMinimizerEig, BeatsHaarSamples) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Index d = 2 + i % 5;
    const HermitianMatrix s = random_hermitian(d, rng);
    const SpectrumVector mu = samplers::random_spectrum(d, rng);
    const HermitianMatrix gop = global_minimizer_eig(s, mu);
    for (const auto& n : {kFrob, NormSpec::schatten(1.0), NormSpec::spectral(), NormSpec::kyfan(2)}) {
      const double best = phi(n, s, gop);
      for (int k = 0; k < 30; ++k) {
        EXPECT_GE(phi(n, s, samplers::orbit_sample(mu, rng)), best - 1e-8);
      }
    }
  }
}

TEST(CertifyLocalEig, Examples) {
  auto c = certify_local_eig(kFrob, dg({3, 1}), dg({2, 0}));
  EXPECT_EQ(c.verdict, Verdict::certified_global);
  EXPECT_TRUE(c.alignment_ok);

  c = certify_local_eig(kFrob, dg({3, 1}), dg({0, 2}));
  ASSERT_EQ(c.verdict, Verdict::not_local_min);
  ASSERT_TRUE(c.descent_witness.has_value());
  EXPECT_EQ(c.descent_witness->kind, CurveKind::givens);
  EXPECT_EQ(c.descent_witness->index, 0);  // the (v_1, v_2) plane
  EXPECT_GT(c.descent_witness->verified_drop, 1e-10);
  EXPECT_TRUE(c.descent_witness->strictly_decreasing());
  EXPECT_NEAR(c.descent_witness->initial_value(), std::sqrt(10.0), 1e-12);  // ||diag(3,-1)||

  Rng rng(3);
  const HermitianMatrix g0 = samplers::orbit_sample(SpectrumVector(vec({2, 1, -1})), rng);
  EXPECT_EQ(certify_local_eig(NormSpec::schatten(1.5), HermitianMatrix::identity(3), g0).verdict,
            Verdict::certified_global);

  EXPECT_THROW(certify_local_eig(NormSpec::spectral(), dg({3, 1}), dg({2, 0})), PreconditionError);
  EXPECT_THROW(certify_local_eig(kFrob, dg({3, 1}), dg({2, 0, 1})), PreconditionError);
}

TEST(CertifyLocalEig, NonCommutingCandidateGetsSearchWitness) {
  Rng rng(4);
  const HermitianMatrix s = dg({3, 1});
  const HermitianMatrix g0 = samplers::orbit_sample(SpectrumVector(vec({2, 0})), rng);
  const auto c = certify_local_eig(kFrob, s, g0, 1e-8, 7);
  ASSERT_EQ(c.verdict, Verdict::not_local_min);
  ASSERT_TRUE(c.descent_witness.has_value());
  EXPECT_EQ(c.descent_witness->kind, CurveKind::orbit_search);
  EXPECT_TRUE(c.descent_witness->strictly_decreasing());
}

TEST(DescentCurveEig, Examples) {
  const DescentCurve curve =
      descent_curve_eig(kFrob, dg({3, 1}), dg({0, 2}), 0, UnitaryMatrix::identity(2));
  EXPECT_EQ(curve.samples.front().t, 0.0);
  EXPECT_NEAR(curve.samples.front().value, phi(kFrob, dg({3, 1}), dg({0, 2})), 1e-15);
  // Frobenius: Phi(t)^2 = 10 - 8 sin^2 t (hand expansion of tr R(t)^2).
  for (const auto& smp : curve.samples) {
    const double s2 = std::sin(smp.t) * std::sin(smp.t);
    EXPECT_NEAR(smp.value, std::sqrt(10.0 - 8.0 * s2), 1e-12) << "t=" << smp.t;
  }
  EXPECT_THROW(descent_curve_eig(kFrob, dg({1, 1}), dg({0, 2}), 0, UnitaryMatrix::identity(2)),
               PreconditionError);
  EXPECT_THROW(descent_curve_eig(kFrob, dg({3, 1}), dg({2, 0}), 0, UnitaryMatrix::identity(2)),
               PreconditionError);
}

TEST(DeltaMap, Examples) {
  const HermitianMatrix s = dg({3, 1});
  const HermitianMatrix g0 = dg({2, 0});
  const UnitaryMatrix id = UnitaryMatrix::identity(2);
  EXPECT_EQ(delta_map(kFrob, s, g0, id, id), phi(kFrob, s, g0));
  Matrix p(2, 2);
  p << 0, 1, 1, 0;
  const UnitaryMatrix swap(p);
  EXPECT_NEAR(delta_map(kFrob, s, g0, swap, swap), phi(kFrob, s, g0), 1e-14);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const UnitaryMatrix u = haar_unitary(2, rng);
    const UnitaryMatrix v = haar_unitary(2, rng);
    EXPECT_GE(delta_map(kFrob, s, g0, u, v), std::sqrt(2.0) - 1e-12);
    const Matrix gamma = s.conjugate_adjoint(u).matrix() - g0.conjugate_adjoint(v).matrix();
    EXPECT_NEAR(gamma.trace().real(), 2.0, 1e-10);
  }
}

TEST(EigProperties, EqualityCaseForcesCommutation) {
  Rng rng(6);
  int hits = 0;
  for (int i = 0; i < 400; ++i) {
    const Index d = 2 + i % 4;
    const bool commuting = i % 2 == 0;
    const auto pair = samplers::commuting_pair(d, true, rng);
    const HermitianMatrix g = commuting ? pair.g0 : random_hermitian(d, rng);
    const RealVector lhs = eigenvalues(pair.s - g).values();
    const RealVector rhs = sort_desc(eigenvalues(pair.s).values() - eigenvalues(g).values()).values();
    if ((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-8) {
      ++hits;
      const double scale = 1.0 + pair.s.matrix().norm() * g.matrix().norm();
      EXPECT_LE(commutator(pair.s.matrix(), g.matrix()).norm(), 1e-6 * scale);
    }
  }
  EXPECT_GE(hits, 200);
}

TEST(EigProperties, WitnessesStayOnTheOrbit) {
  Rng rng(7);
  for (int i = 0; i < 60; ++i) {
    const Index d = 2 + i % 4;
    const auto pair = samplers::commuting_pair(d, false, rng);
    const NormSpec n = i % 3 == 0 ? kFrob : NormSpec::schatten(i % 3 == 1 ? 1.5 : 4.0);
    const auto c = certify_local_eig(n, pair.s, pair.g0);
    ASSERT_EQ(c.verdict, Verdict::not_local_min);
    const DescentCurve& w = *c.descent_witness;
    EXPECT_TRUE(w.strictly_decreasing()) << n.to_string();
    const RealVector mu = eigenvalues(pair.g0).values();
    for (const auto& smp : w.samples) {
      const RealVector got = eigenvalues(HermitianMatrix(w.point(smp.t), 1e-8)).values();
      EXPECT_LE((got - mu).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(EigProperties, SoundnessAgainstBruteForce) {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const Index d = 2 + i % 2;
    const bool aligned = i % 2 == 0;
    const auto pair = samplers::commuting_pair(d, aligned, rng);
    const auto c = certify_local_eig(kFrob, pair.s, pair.g0);
    const double base = phi(kFrob, pair.s, pair.g0);
    const SpectrumVector mu = eigenvalues(pair.g0);
    if (aligned) {
      ASSERT_EQ(c.verdict, Verdict::certified_global);
      for (int k = 0; k < 2000; ++k) {
        EXPECT_GE(phi(kFrob, pair.s, samplers::orbit_sample(mu, rng)), base - 1e-8);
      }
    } else {
      ASSERT_EQ(c.verdict, Verdict::not_local_min);
      // A ball of radius 1e-3 around G0 already holds a better point.
      bool found = false;
      for (int k = 0; k < 4000 && !found; ++k) {
        HermitianMatrix x = random_hermitian(d, rng);
        x = (1e-3 / x.matrix().norm()) * x;
        found = phi(kFrob, pair.s, pair.g0.conjugate(unitary_exp(x))) < base;
      }
      EXPECT_TRUE(found);
    }
  }
}

TEST(JointEigenbasis, NuSortedInsideClusters) {
  const HermitianMatrix s = dg({2, 2, 1});
  Matrix g(3, 3);
  g << 0, 1, 0, 1, 0, 0, 0, 0, 5;
  const JointEigenbasis jb = joint_eigenbasis(s, HermitianMatrix(g));
  EXPECT_NEAR(jb.nu[0], 1.0, 1e-12);
  EXPECT_NEAR(jb.nu[1], -1.0, 1e-12);
  EXPECT_NEAR(jb.nu[2], 5.0, 1e-12);
  // The ascent sits on the cluster boundary, where the Givens curve applies.
  const auto c = certify_local_eig(kFrob, s, HermitianMatrix(g));
  ASSERT_EQ(c.verdict, Verdict::not_local_min);
  EXPECT_EQ(c.descent_witness->index, 1);
}
