#pragma once

#include "lidskii/frames.hpp"
#include "lidskii/matrix_core.hpp"

// Random and constructed instances shared by the property suite, tests and
// benchmarks.
namespace lidskii::samplers {

/// Entries uniform in [lo, hi], sorted non-increasingly.
SpectrumVector random_spectrum(Index d, Rng& rng, double lo = -2.0, double hi = 2.0);

/// Like random_spectrum but consecutive entries differ by at least `min_gap`.
SpectrumVector separated_spectrum(Index d, Rng& rng, double min_gap = 0.1);

/// U* D_mu U with Haar U.
HermitianMatrix orbit_sample(const SpectrumVector& mu, Rng& rng);

/// X* D_s Y with Haar X, Y.
GeneralMatrix sv_orbit_sample(const SpectrumVector& s, Rng& rng);

/// t W / tr W for W = X X* with X complex Gaussian.
HermitianMatrix random_psd_trace(Index d, double t, Rng& rng);

struct CommutingPair {
  HermitianMatrix s;
  HermitianMatrix g0;
};

/// S = V D_lambda V*, G0 = V D_nu V* with lambda strictly separated. If
/// `aligned`, nu is non-increasing; otherwise nu is a permutation of a
/// separated spectrum with at least one ascent.
CommutingPair commuting_pair(Index d, bool aligned, Rng& rng);

struct JointSvdPair {
  GeneralMatrix a;
  GeneralMatrix b;
  RealVector alpha;
  RealVector beta;  // diagonal of U* B V where that is diagonal; zero blocks use s(.)
};

/// A = U D_alpha V*, B = U B~ V* with B~ block diagonal along the clusters
/// of alpha: Hermitian blocks on positive clusters and an arbitrary block on
/// the zero cluster. alpha has repeated values; `zero_block` appends zeros.
JointSvdPair hypothesis_pair(Index d, bool zero_block, Rng& rng);

/// A = U D_alpha V*, B = U D_beta V* with alpha, beta >= 0 both
/// non-increasing: the equality case of the singular-value inequality.
JointSvdPair aligned_svd_pair(Index d, Rng& rng);

struct DependentCluster {
  HermitianMatrix s;
  FrameSequence g0;
  double cluster_value;  // c_j of the dependent cluster
};

/// S has a repeated bottom eigenvalue on an m-dimensional W; G0 is a tight
/// frame of k > m vectors for W, so S - S0 = c I on W while S - S0 has a
/// strictly larger eigenvalue elsewhere. Requires d >= 2.
DependentCluster dependent_cluster(Index d, Rng& rng);

/// Columns complex Gaussian, rescaled onto the spheres ||g_i||^2 = a_i.
FrameSequence random_frame(Index d, const RealVector& a, Rng& rng);

}  // namespace lidskii::samplers
