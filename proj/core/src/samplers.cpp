#include "lidskii/samplers.hpp"

#include <algorithm>
#include <numeric>

namespace lidskii::samplers {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

// Non-increasing positive vector of length d whose values repeat 1-2 times.
RealVector clustered_positive(Index d, Rng& rng) {
  RealVector out(d);
  double value = uniform(rng, 2.0, 4.0);
  Index i = 0;
  while (i < d) {
    const Index rep = std::min<Index>(d - i, uniform_index(rng, 1, 2));
    out.segment(i, rep).setConstant(value);
    i += rep;
    value -= uniform(rng, 0.2, 1.0);
    value = std::max(value, 0.05 * (d - i + 1));
  }
  return SpectrumVector::sorted(out).values();
}

}  // namespace

SpectrumVector random_spectrum(Index d, Rng& rng, double lo, double hi) {
  RealVector v(d);
  for (Index i = 0; i < d; ++i) v[i] = uniform(rng, lo, hi);
  return SpectrumVector::sorted(v);
}

SpectrumVector separated_spectrum(Index d, Rng& rng, double min_gap) {
  RealVector v(d);
  double x = uniform(rng, -1.0, 1.0);
  for (Index i = d - 1; i >= 0; --i) {
    v[i] = x;
    x += min_gap + uniform(rng, 0.0, 1.0);
  }
  return SpectrumVector(v);
}

HermitianMatrix orbit_sample(const SpectrumVector& mu, Rng& rng) {
  return HermitianMatrix::diagonal(mu.values()).conjugate_adjoint(haar_unitary(mu.size(), rng));
}

GeneralMatrix sv_orbit_sample(const SpectrumVector& s, Rng& rng) {
  const UnitaryMatrix x = haar_unitary(s.size(), rng);
  const UnitaryMatrix y = haar_unitary(s.size(), rng);
  return x.matrix().adjoint() * diag(s.values()) * y.matrix();
}

HermitianMatrix random_psd_trace(Index d, double t, Rng& rng) {
  const Matrix x = random_gaussian(d, d, rng);
  Matrix w = x * x.adjoint();
  w *= t / w.trace().real();
  return HermitianMatrix(Matrix(0.5 * (w + w.adjoint())));
}

CommutingPair commuting_pair(Index d, bool aligned, Rng& rng) {
  const SpectrumVector lambda = separated_spectrum(d, rng);
  RealVector nu = separated_spectrum(d, rng).values();
  if (!aligned) {
    if (d < 2) throw PreconditionError("commuting_pair: misaligned pairs need d >= 2");
    std::vector<Index> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
      std::shuffle(perm.begin(), perm.end(), rng);
    } while (std::is_sorted(perm.begin(), perm.end()));
    RealVector permuted(d);
    for (Index i = 0; i < d; ++i) permuted[i] = nu[perm[static_cast<std::size_t>(i)]];
    nu = permuted;
  }
  const UnitaryMatrix v = haar_unitary(d, rng);
  return {HermitianMatrix::diagonal(lambda.values()).conjugate(v),
          HermitianMatrix::diagonal(nu).conjugate(v)};
}

JointSvdPair hypothesis_pair(Index d, bool zero_block, Rng& rng) {
  const Index zeros = zero_block ? uniform_index(rng, 1, std::max<Index>(1, d / 2)) : 0;
  RealVector alpha = RealVector::Zero(d);
  if (d - zeros > 0) alpha.head(d - zeros) = clustered_positive(d - zeros, rng);

  Matrix bt = Matrix::Zero(d, d);
  RealVector beta = RealVector::Zero(d);
  Index i = 0;
  while (i < d) {
    Index j = i + 1;
    while (j < d && alpha[j] == alpha[i]) ++j;
    const Index m = j - i;
    if (alpha[i] > 0.0) {
      bt.block(i, i, m, m) = random_hermitian(m, rng).matrix();
    } else {
      bt.block(i, i, m, m) = random_gaussian(m, m, rng);
    }
    i = j;
  }
  for (Index r = 0; r < d; ++r) beta[r] = bt(r, r).real();

  const Matrix u = haar_unitary(d, rng).matrix();
  const Matrix v = haar_unitary(d, rng).matrix();
  return {u * diag(alpha) * v.adjoint(), u * bt * v.adjoint(), alpha, beta};
}

JointSvdPair aligned_svd_pair(Index d, Rng& rng) {
  const RealVector alpha = random_spectrum(d, rng, 0.0, 3.0).values();
  const RealVector beta = random_spectrum(d, rng, 0.0, 3.0).values();
  const Matrix u = haar_unitary(d, rng).matrix();
  const Matrix v = haar_unitary(d, rng).matrix();
  return {u * diag(alpha) * v.adjoint(), u * diag(beta) * v.adjoint(), alpha, beta};
}

DependentCluster dependent_cluster(Index d, Rng& rng) {
  if (d < 2) throw PreconditionError("dependent_cluster: requires d >= 2");
  const Index m = uniform_index(rng, 1, d - 1);
  const Index k = m + uniform_index(rng, 1, 3);
  const double low = uniform(rng, 0.5, 1.5);
  RealVector lambda(d);
  for (Index i = 0; i < d - m; ++i) lambda[i] = low + uniform(rng, 0.5, 3.0);
  lambda.tail(m).setConstant(low);
  lambda = SpectrumVector::sorted(lambda).values();

  const Matrix v = haar_unitary(d, rng).matrix();
  const HermitianMatrix s = HermitianMatrix::diagonal(lambda).conjugate(UnitaryMatrix(v));

  // Rows of Q are orthonormal in C^k, so sum_l q_l q_l* = I_m.
  const Matrix q = haar_unitary(k, rng).matrix().topRows(m);
  const double beta = uniform(rng, 0.2, 1.5);
  const Matrix w = v.rightCols(m);
  const Matrix g = std::sqrt(beta) * w * q;
  RealVector a(k);
  for (Index l = 0; l < k; ++l) a[l] = g.col(l).squaredNorm();
  return {s, FrameSequence(g, a, 1e-12), low - beta};
}

FrameSequence random_frame(Index d, const RealVector& a, Rng& rng) {
  return FrameSequence::projected(random_gaussian(d, a.size(), rng), a);
}

}  // namespace lidskii::samplers
