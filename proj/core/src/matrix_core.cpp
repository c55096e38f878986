#include "lidskii/matrix_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace lidskii {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// vec(Z^T) = P vec(Z) for column-major vec of a d x d matrix.
Matrix commutation_matrix(Index d) {
  Matrix p = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      p(i * d + j, j * d + i) = 1.0;
    }
  }
  return p;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

double gap_tolerance(const RealVector& values) {
  if (values.size() == 0) return tol::kGapRelative;
  const double spread = values.maxCoeff() - values.minCoeff();
  return tol::kGapRelative * (1.0 + spread);
}

std::vector<std::pair<Index, Index>> cluster_ranges(const RealVector& sorted, double gap) {
  std::vector<std::pair<Index, Index>> out;
  Index begin = 0;
  for (Index i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || std::abs(sorted[i - 1] - sorted[i]) > gap) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

void require_square(const Matrix& m, const char* what, Index d) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw PreconditionError(std::string(what) + ": expected a non-empty square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (d >= 0 && m.rows() != d) {
    throw PreconditionError(std::string(what) + ": dimension " + std::to_string(m.rows()) +
                            " does not match " + std::to_string(d));
  }
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const Matrix& m, double tol) {
  require_square(m, "HermitianMatrix");
  if (!all_finite(m)) throw PreconditionError("HermitianMatrix: non-finite entry");
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol * m.norm()) {
    throw PreconditionError("HermitianMatrix: ||M - M*|| = " + std::to_string(asym) +
                            " exceeds tolerance");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::symmetrized(const Matrix& m) {
  return HermitianMatrix(Matrix(0.5 * (m + m.adjoint())), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  return HermitianMatrix(lidskii::diag(d), Trusted{});
}

HermitianMatrix HermitianMatrix::identity(Index d) {
  return HermitianMatrix(Matrix::Identity(d, d), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(Index d) {
  return HermitianMatrix(Matrix::Zero(d, d), Trusted{});
}

HermitianMatrix HermitianMatrix::conjugate(const UnitaryMatrix& u) const {
  return symmetrized(u.matrix() * m_ * u.matrix().adjoint());
}

HermitianMatrix HermitianMatrix::conjugate_adjoint(const UnitaryMatrix& u) const {
  return symmetrized(u.matrix().adjoint() * m_ * u.matrix());
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_square(b.m_, "HermitianMatrix +", a.dim());
  return HermitianMatrix(Matrix(a.m_ + b.m_), HermitianMatrix::Trusted{});
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_square(b.m_, "HermitianMatrix -", a.dim());
  return HermitianMatrix(Matrix(a.m_ - b.m_), HermitianMatrix::Trusted{});
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(Matrix(s * a.m_), HermitianMatrix::Trusted{});
}

// ---------------------------------------------------------------------------
// UnitaryMatrix

UnitaryMatrix::UnitaryMatrix(Matrix m, double tol) : m_(std::move(m)) {
  require_square(m_, "UnitaryMatrix");
  const Index d = m_.rows();
  const double err = (m_.adjoint() * m_ - Matrix::Identity(d, d)).norm();
  if (!(err <= tol)) {
    throw PreconditionError("UnitaryMatrix: ||U*U - I|| = " + std::to_string(err) +
                            " exceeds tolerance");
  }
}

UnitaryMatrix UnitaryMatrix::identity(Index d) { return UnitaryMatrix(Matrix::Identity(d, d)); }

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(m_.adjoint()); }

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  return UnitaryMatrix(a.m_ * b.m_);
}

// ---------------------------------------------------------------------------
// SpectrumVector

SpectrumVector::SpectrumVector(RealVector v) : v_(std::move(v)) {
  if (!v_.allFinite()) throw PreconditionError("SpectrumVector: non-finite entry");
  for (Index i = 1; i < v_.size(); ++i) {
    if (v_[i] > v_[i - 1]) {
      throw PreconditionError("SpectrumVector: entries must be non-increasing");
    }
  }
}

SpectrumVector SpectrumVector::sorted(RealVector v) {
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return SpectrumVector(std::move(v));
}

Matrix diag(const RealVector& x) {
  Matrix d = Matrix::Zero(x.size(), x.size());
  for (Index i = 0; i < x.size(); ++i) d(i, i) = x[i];
  return d;
}

// ---------------------------------------------------------------------------
// Factorizations

EigenDecomposition eigh(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigh: eigen-solver did not converge", m.matrix().norm());
  }
  // Eigen returns ascending order; reverse to non-increasing.
  RealVector values = solver.eigenvalues().reverse();
  Matrix vectors = solver.eigenvectors().rowwise().reverse();
  const double residual =
      (m.matrix() - vectors * diag(values) * vectors.adjoint()).norm();
  if (!(residual <= tol::kEig * (1.0 + m.matrix().norm()))) {
    throw ConvergenceError("eigh: reconstruction residual too large", residual);
  }
  return {SpectrumVector(std::move(values)), UnitaryMatrix(std::move(vectors))};
}

SpectrumVector eigenvalues(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigenvalues: eigen-solver did not converge", m.matrix().norm());
  }
  return SpectrumVector(solver.eigenvalues().reverse());
}

SingularValueDecomposition svd(const GeneralMatrix& a) {
  require_square(a, "svd");
  if (!a.allFinite()) throw PreconditionError("svd: non-finite entry");
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // Eigen: A = P diag(s) Q*. Here A = V* D_s U, so V = P*, U = Q*.
  const RealVector s = solver.singularValues();
  Matrix v = solver.matrixU().adjoint();
  Matrix u = solver.matrixV().adjoint();
  const double residual = (a - v.adjoint() * diag(s) * u).norm();
  if (!(residual <= tol::kSvd * (1.0 + a.norm()))) {
    throw ConvergenceError("svd: reconstruction residual too large", residual);
  }
  return {UnitaryMatrix(std::move(v)), SpectrumVector(s), UnitaryMatrix(std::move(u))};
}

SpectrumVector singular_values(const GeneralMatrix& a) {
  if (a.size() == 0) return SpectrumVector(RealVector());
  Eigen::JacobiSVD<Matrix> solver(a);
  return SpectrumVector(solver.singularValues());
}

HermitianMatrix dilate(const GeneralMatrix& c) {
  require_square(c, "dilate");
  const Index d = c.rows();
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  out.topRightCorner(d, d) = c;
  out.bottomLeftCorner(d, d) = c.adjoint();
  return HermitianMatrix(out);
}

GeneralMatrix commutator(const GeneralMatrix& a, const GeneralMatrix& b) {
  if (a.cols() != b.rows() || b.cols() != a.rows() || a.rows() != a.cols()) {
    throw PreconditionError("commutator: incompatible shapes");
  }
  return a * b - b * a;
}

// ---------------------------------------------------------------------------
// Random sampling

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(rows, cols);
  // Column-major fill keeps sequences stable across Eigen versions.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return z;
}

HermitianMatrix random_hermitian(Index d, Rng& rng) {
  const Matrix z = random_gaussian(d, d, rng);
  return HermitianMatrix(Matrix(0.5 * (z + z.adjoint())));
}

UnitaryMatrix haar_unitary(Index d, Rng& rng) {
  if (d < 1) throw PreconditionError("haar_unitary: d must be positive");
  const Matrix z = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0);
  }
  return UnitaryMatrix(std::move(q));
}

UnitaryMatrix haar_unitary(Index d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(d, rng);
}

UnitaryMatrix unitary_exp(const HermitianMatrix& x) {
  const auto [values, vectors] = eigh(x);
  CVector phases(values.size());
  for (Index i = 0; i < values.size(); ++i) phases[i] = std::polar(1.0, values[i]);
  const Matrix& v = vectors.matrix();
  return UnitaryMatrix(Matrix(v * phases.asDiagonal() * v.adjoint()));
}

// ---------------------------------------------------------------------------
// Null-space criteria

CommutantTest commutant_is_trivial(const HermitianMatrix& s, const HermitianMatrix& g0,
                                   double tol) {
  const Index d = s.dim();
  require_square(g0.matrix(), "commutant_is_trivial", d);
  if (d == 1) return {true, 0};
  // Complex route: X -> (XS - SX, XG0 - G0X) on all of M_d(C). The commutant
  // is a *-algebra, so its complex dimension equals the real dimension of its
  // Hermitian part; removing the identity leaves the trace-zero kernel.
  const Matrix id = Matrix::Identity(d, d);
  Matrix k(2 * d * d, d * d);
  k.topRows(d * d) = kron(s.matrix().transpose(), id) - kron(id, s.matrix());
  k.bottomRows(d * d) = kron(g0.matrix().transpose(), id) - kron(id, g0.matrix());
  Eigen::JacobiSVD<Matrix> solver(k);
  const RealVector& sv = solver.singularValues();
  const double cut = tol * sv[0];
  Index complex_kernel = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[0] == 0.0 || sv[i] < cut) ++complex_kernel;
  }
  const Index kernel_dim = std::max<Index>(complex_kernel - 1, 0);
  return {kernel_dim == 0, kernel_dim};
}

PiSubmersionTest pi_submersion_test(const GeneralMatrix& a, const GeneralMatrix& b, double tol) {
  require_square(a, "pi_submersion_test");
  const Index d = a.rows();
  require_square(b, "pi_submersion_test", d);
  const Index n = d * d;
  const Matrix id = Matrix::Identity(d, d);
  const Matrix p = commutation_matrix(d);

  // Each block is z -> M z + N conj(z) with z = vec(Z); vec(Z*) = P conj(z).
  //   A Z* - Z A*  : M = -(conj(A) (x) I),  N = (I (x) A) P
  //   A* Z - Z* A  : M = (I (x) A*),        N = -(A^T (x) I) P
  auto blocks = [&](const Matrix& x, Matrix& m1, Matrix& n1, Matrix& m2, Matrix& n2) {
    m1 = -kron(x.conjugate(), id);
    n1 = kron(id, x) * p;
    m2 = kron(id, x.adjoint());
    n2 = -kron(x.transpose(), id) * p;
  };
  std::array<Matrix, 4> ms;
  std::array<Matrix, 4> ns;
  blocks(a, ms[0], ns[0], ms[1], ns[1]);
  blocks(b, ms[2], ns[2], ms[3], ns[3]);

  // Real form on (Re z, Im z): [[Re(M+N), -Im(M-N)], [Im(M+N), Re(M-N)]].
  RealMatrix sys(8 * n, 2 * n);
  for (int blk = 0; blk < 4; ++blk) {
    const Matrix plus = ms[blk] + ns[blk];
    const Matrix minus = ms[blk] - ns[blk];
    sys.block(2 * n * blk, 0, n, n) = plus.real();
    sys.block(2 * n * blk, n, n, n) = -minus.imag();
    sys.block(2 * n * blk + n, 0, n, n) = plus.imag();
    sys.block(2 * n * blk + n, n, n, n) = minus.real();
  }

  Eigen::JacobiSVD<RealMatrix> solver(sys, Eigen::ComputeFullV);
  const RealVector& sv = solver.singularValues();
  PiSubmersionTest out;
  if (sv[0] == 0.0) {
    out.kernel_dim = 2 * n;
    out.witness = Matrix(id / std::sqrt(static_cast<double>(d)));
    return out;
  }
  const double cut = tol * sv[0];
  Index first_null = -1;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] < cut) {
      ++out.kernel_dim;
      if (first_null < 0) first_null = i;
    }
  }
  out.submersion = out.kernel_dim == 0;
  if (!out.submersion) {
    const RealVector v = solver.matrixV().col(first_null);
    Matrix z(d, d);
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < d; ++i) {
        const Index idx = j * d + i;
        z(i, j) = Complex(v[idx], v[n + idx]);
      }
    }
    out.witness = Matrix(z / z.norm());
  }
  return out;
}

}  // namespace lidskii
