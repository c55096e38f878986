#include <gtest/gtest.h>

#include "lidskii/majorization.hpp"
#include "oracles.hpp"

using namespace lidskii;

namespace {

RealVector vec(std::initializer_list<double> xs) {
  RealVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

RealVector random_vector(Index d, Rng& rng) {
  std::normal_distribution<double> n;
  RealVector v(d);
  for (Index i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

}  // namespace

TEST(SortDesc, Examples) {
  EXPECT_EQ(sort_desc(vec({1, 3, 2})).values(), vec({3, 2, 1}));
  EXPECT_EQ(sort_desc(vec({-1, -1})).values(), vec({-1, -1}));
  EXPECT_EQ(sort_desc(vec({0.5, 0.5, 1.5})).values(), vec({1.5, 0.5, 0.5}));
}

TEST(Submajorizes, Examples) {
  EXPECT_TRUE(submajorizes(vec({2, 0}), vec({1, 0})).holds);
  EXPECT_TRUE(submajorizes(vec({3, 1}), vec({2, 2})).holds);
  const auto v = submajorizes(vec({1, 1}), vec({3, -3}));
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.first_violation_index.has_value());
  EXPECT_EQ(*v.first_violation_index, 1);
  EXPECT_DOUBLE_EQ(v.margin, -2.0);
}

TEST(Majorizes, Examples) {
  auto v = majorizes(vec({3, 1}), vec({2, 2}));
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.strict);
  // (t/d) 1_d < x.
  EXPECT_TRUE(majorizes(vec({3, 1}), vec({2, 2})).holds);
  EXPECT_FALSE(majorizes(vec({2, 2}), vec({3, 1})).holds);
  // x = (1,-3) < y = (2,-4), and then |x| <_w |y|.
  EXPECT_TRUE(majorizes(vec({2, -4}), vec({1, -3})).holds);
  EXPECT_TRUE(submajorizes(vec({2, 4}), vec({1, 3})).holds);
  EXPECT_THROW(majorizes(vec({1, 2}), vec({1})), PreconditionError);
}

TEST(Majorizes, TraceMismatchReportsLastIndex) {
  const auto v = majorizes(vec({3, 1}), vec({2, 1}));
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.first_violation_index.has_value());
  EXPECT_EQ(*v.first_violation_index, 2);
}

TEST(MajorizationPath, Examples) {
  const SpectrumVector a(vec({2, 0}));
  const SpectrumVector b(vec({1, 1}));
  EXPECT_EQ(majorization_path(a, b, 0.0), a.values());
  EXPECT_EQ(majorization_path(a, b, 1.0), b.values());
  const RealVector mid = majorization_path(a, b, 0.5);
  EXPECT_EQ(mid, vec({1.5, 0.5}));
  const auto v = majorizes(a.values(), mid);
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.strict);
  EXPECT_THROW(majorization_path(b, a, 0.5), PreconditionError);
  EXPECT_THROW(majorization_path(a, b, 1.5), PreconditionError);
}

TEST(MajorizationProperties, Reflexive) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const RealVector x = random_vector(1 + i % 8, rng);
    const auto v = majorizes(x, x);
    EXPECT_TRUE(v.holds);
    EXPECT_FALSE(v.strict);
  }
}

TEST(MajorizationProperties, EntrywiseImpliesSubmajorization) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const RealVector x = random_vector(1 + i % 8, rng);
    RealVector y = x;
    for (Index j = 0; j < y.size(); ++j) y[j] += u(rng);
    EXPECT_TRUE(submajorizes(y, x).holds);
  }
}

TEST(MajorizationProperties, AbsoluteValueImplication) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Index d = 1 + i % 6;
    // x = D y for a doubly stochastic D (convex combination of permutations).
    const RealVector y = random_vector(d, rng);
    RealVector x = 0.5 * y;
    RealVector shifted(d);
    for (Index j = 0; j < d; ++j) shifted[j] = y[(j + 1) % d];
    x += 0.5 * shifted;
    ASSERT_TRUE(majorizes(y, x).holds);
    EXPECT_TRUE(oracle::majorized_by(x, y, 1e-10));
    EXPECT_TRUE(submajorizes(y.cwiseAbs(), x.cwiseAbs()).holds);
  }
}

TEST(MajorizationProperties, Rigidity) {
  // x < y and |x| = |y| (sorted) force x = y (sorted). Permutations meet
  // both hypotheses; a proper average of y and its shift breaks |x| = |y|.
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const Index d = 2 + i % 5;
    const RealVector y = random_vector(d, rng);
    RealVector x = y.reverse();
    const auto v = majorizes(y, x);
    ASSERT_TRUE(v.holds);
    EXPECT_EQ(sort_desc(x.cwiseAbs()).values(), sort_desc(y.cwiseAbs()).values());
    EXPECT_EQ(sort_desc(x).values(), sort_desc(y).values());
    EXPECT_FALSE(v.strict);

    RealVector shifted(d);
    for (Index j = 0; j < d; ++j) shifted[j] = y[(j + 1) % d];
    const RealVector avg = 0.5 * (y + shifted);
    const auto w = majorizes(y, avg);
    ASSERT_TRUE(w.holds);
    if (w.strict) {
      EXPECT_NE(sort_desc(avg.cwiseAbs()).values(), sort_desc(y.cwiseAbs()).values());
    }
  }
}

TEST(MajorizationProperties, AgreesWithDirectPartialSums) {
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    const Index d = 1 + i % 6;
    RealVector x = random_vector(d, rng);
    RealVector y = random_vector(d, rng);
    y.array() += (x.sum() - y.sum()) / static_cast<double>(d);
    EXPECT_EQ(majorizes(y, x, 1e-10).holds, oracle::majorized_by(x, y, 1e-10 * (1 + y.cwiseAbs().sum())))
        << "instance " << i;
  }
}

TEST(MajorizationProperties, LidskiiClosure) {
  Rng rng(6);
  for (int i = 0; i < 10000; ++i) {
    const Index d = 1 + i % 8;
    const HermitianMatrix a = random_hermitian(d, rng);
    const HermitianMatrix b = random_hermitian(d, rng);
    EXPECT_TRUE(majorizes(eigenvalues(a - b).values(),
                          sort_desc(eigenvalues(a).values() - eigenvalues(b).values()).values(),
                          1e-8)
                    .holds);
  }
}

TEST(MajorizationProperties, SingularValueLidskii) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const Index d = 1 + i % 8;
    const Matrix a = random_gaussian(d, d, rng);
    const Matrix b = random_gaussian(d, d, rng);
    const RealVector diff = (singular_values(a).values() - singular_values(b).values()).cwiseAbs();
    EXPECT_TRUE(submajorizes(singular_values(Matrix(a - b)).values(), diff, 1e-8).holds);
  }
}
