#pragma once

#include <optional>

#include "lidskii/matrix_core.hpp"

namespace lidskii {

/// Outcome of a (sub)majorization test x < y.
struct MajorizationVerdict {
  bool holds = false;
  /// holds, and the sorted vectors differ.
  bool strict = false;
  /// Length j of the first partial sum that fails (1-based, so a failure on
  /// the largest entries alone reports 1). Present iff !holds.
  std::optional<Index> first_violation_index;
  /// Minimum over partial sums of (sum y - sum x); for majorization also
  /// bounded above by -|tr x - tr y|.
  double margin = 0.0;
};

SpectrumVector sort_desc(const RealVector& x);

/// x <_w y: partial sums of x sorted never exceed those of y, up to
/// min(len x, len y). Each partial sum may fall short by
/// tol * (1 + max |partial sum|).
MajorizationVerdict submajorizes(const RealVector& y, const RealVector& x, double tol = 1e-10);

/// x < y: submajorization plus |tr x - tr y| <= tol * (1 + |tr y|).
/// Requires equal lengths.
MajorizationVerdict majorizes(const RealVector& y, const RealVector& x, double tol = 1e-10);

/// rho(t) = (1 - t) a + t b, for b < a and t in [0, 1].
RealVector majorization_path(const SpectrumVector& a, const SpectrumVector& b, double t);

}  // namespace lidskii
