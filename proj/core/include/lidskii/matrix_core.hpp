#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lidskii {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Dense complex matrix; houses A, B, C, Z and synthesis operators.
using GeneralMatrix = Matrix;

/// Seed-threaded random engine used by every sampler in the library.
using Rng = std::mt19937_64;

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kEig = 1e-9;
inline constexpr double kSvd = 1e-9;
inline constexpr double kNullSpace = 1e-8;
inline constexpr double kGapRelative = 1e-7;
}  // namespace tol

/// Raised when an operation is called outside its domain (shape mismatch,
/// non-Hermitian input, violated hypothesis).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative factorization fails to converge.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Clustering threshold for (near-)degenerate spectra: 1e-7 * (1 + spread).
double gap_tolerance(const RealVector& values);

/// Half-open index ranges [begin, end) of a sorted vector, split wherever
/// adjacent entries differ by more than `gap` (single linkage).
std::vector<std::pair<Index, Index>> cluster_ranges(const RealVector& sorted, double gap);

class UnitaryMatrix;

/// Self-adjoint d x d matrix. Construction checks ||M - M*|| <= tol ||M||
/// and stores the symmetrized (M + M*) / 2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m, double tol = tol::kHermitian);

  static HermitianMatrix diagonal(const RealVector& d);
  static HermitianMatrix identity(Index d);
  static HermitianMatrix zero(Index d);

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

  /// U M U*.
  HermitianMatrix conjugate(const UnitaryMatrix& u) const;
  /// U* M U, the orbit action used for O_mu = {U* D_mu U}.
  HermitianMatrix conjugate_adjoint(const UnitaryMatrix& u) const;

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  struct Trusted {};
  HermitianMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  static HermitianMatrix symmetrized(const Matrix& m);
  Matrix m_;
};

/// Unitary d x d matrix with ||U*U - I||_F <= tol.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m, double tol = tol::kUnitary);

  static UnitaryMatrix identity(Index d);

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  UnitaryMatrix adjoint() const;

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

 private:
  Matrix m_;
};

/// Real vector sorted non-increasingly.
class SpectrumVector {
 public:
  SpectrumVector() = default;
  /// Throws PreconditionError unless `v` is finite and non-increasing.
  explicit SpectrumVector(RealVector v);

  static SpectrumVector sorted(RealVector v);

  const RealVector& values() const noexcept { return v_; }
  Index size() const noexcept { return v_.size(); }
  double operator[](Index i) const { return v_[i]; }

 private:
  RealVector v_;
};

/// Diagonal complex matrix D_x.
Matrix diag(const RealVector& x);

struct EigenDecomposition {
  SpectrumVector values;   // lambda(M), non-increasing
  UnitaryMatrix vectors;   // columns v_i with M v_i = lambda_i v_i
};

/// M = V D_lambda V*, eigenvalues non-increasing.
EigenDecomposition eigh(const HermitianMatrix& m);

/// Eigenvalues only, non-increasing.
SpectrumVector eigenvalues(const HermitianMatrix& m);

/// A = V* D_s U. The left factor is stored as V, the right one as U.
struct SingularValueDecomposition {
  UnitaryMatrix v;
  SpectrumVector s;
  UnitaryMatrix u;
};

SingularValueDecomposition svd(const GeneralMatrix& a);

/// Singular values only, non-increasing.
SpectrumVector singular_values(const GeneralMatrix& a);

/// The Hermitian dilation [[0, C], [C*, 0]]; its spectrum is
/// (s(C), -reverse(s(C))).
HermitianMatrix dilate(const GeneralMatrix& c);

/// AB - BA.
GeneralMatrix commutator(const GeneralMatrix& a, const GeneralMatrix& b);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of diag(R) moved into Q.
UnitaryMatrix haar_unitary(Index d, std::uint64_t seed);
UnitaryMatrix haar_unitary(Index d, Rng& rng);

/// exp(i X) for Hermitian X.
UnitaryMatrix unitary_exp(const HermitianMatrix& x);

Matrix random_gaussian(Index rows, Index cols, Rng& rng);
HermitianMatrix random_hermitian(Index d, Rng& rng);

struct CommutantTest {
  bool trivial = false;
  Index kernel_dim = 0;  // dimension within trace-zero Hermitian matrices
};

/// Decides {S, G0}' = C I, i.e. whether Y -> ([Y,S],[Y,G0]) has trivial
/// kernel on trace-zero Hermitian Y. Singular values below
/// tol * sigma_max count as zero.
CommutantTest commutant_is_trivial(const HermitianMatrix& s, const HermitianMatrix& g0,
                                   double tol = tol::kNullSpace);

struct PiSubmersionTest {
  bool submersion = false;
  Index kernel_dim = 0;
  std::optional<GeneralMatrix> witness;  // unit Frobenius norm kernel element
};

/// Decides whether the only Z with A*Z, AZ*, B*Z, BZ* Hermitian is Z = 0.
PiSubmersionTest pi_submersion_test(const GeneralMatrix& a, const GeneralMatrix& b,
                                    double tol = tol::kNullSpace);

/// Throws PreconditionError unless `m` is square of size `d` (when d >= 0).
void require_square(const Matrix& m, const char* what, Index d = -1);

}  // namespace lidskii
