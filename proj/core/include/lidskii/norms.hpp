#pragma once

#include <string>
#include <string_view>

#include "lidskii/matrix_core.hpp"

namespace lidskii {

/// A unitarily invariant norm, described by its symmetric gauge function on
/// singular values.
class NormSpec {
 public:
  enum class Kind { schatten, kyfan, spectral, frobenius };

  /// Schatten p-norm, 1 <= p <= infinity. schatten(inf) is the spectral norm.
  static NormSpec schatten(double p);
  static NormSpec kyfan(int k);
  static NormSpec spectral();
  static NormSpec frobenius();

  /// Parses "schatten:P", "kyfan:K", "spectral" or "frobenius"
  /// (P may be "inf").
  static NormSpec parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// Exponent for schatten (2 for frobenius, inf for spectral).
  double p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  bool strictly_convex() const noexcept;

  std::string to_string() const;

  friend bool operator==(const NormSpec&, const NormSpec&) = default;

 private:
  NormSpec(Kind kind, double p, int k) : kind_(kind), p_(p), k_(k) {}
  Kind kind_;
  double p_;
  int k_;
};

bool is_strictly_convex(const NormSpec& n);

/// Gauge function applied to a vector of singular values (entries are taken
/// in absolute value, order irrelevant).
double evaluate_gauge(const NormSpec& n, const RealVector& s);

double evaluate(const NormSpec& n, const GeneralMatrix& a);

/// Same value as evaluate(n, m.matrix()); uses |lambda(M)| = s(M).
double evaluate(const NormSpec& n, const HermitianMatrix& m);

/// Gradient of N at a Hermitian M with respect to the real trace pairing,
/// so d/de N(M + eE) = tr(G E) for Hermitian E. Defined for schatten p > 1
/// (including frobenius) at M != 0.
HermitianMatrix norm_gradient(const NormSpec& n, const HermitianMatrix& m);

}  // namespace lidskii
