#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lidskii/matrix_core.hpp"

namespace lidskii {

enum class Verdict { certified_global, not_local_min, inconclusive };

std::string to_string(Verdict v);

/// How a descent witness was produced.
///  - givens: rotation in the (v_j, v_{j+1}) plane of a joint eigenbasis.
///  - phase: e^{it} on one diagonal entry of a joint SVD.
///  - orbit_search: exponential path toward a point found by local search.
///  - escape: the frame move that spreads a dependent cluster along an
///    eigenvector of a larger eigenvalue.
enum class CurveKind { givens, phase, orbit_search, escape };

std::string to_string(CurveKind k);

struct CurveSample {
  double t = 0.0;
  double value = 0.0;
};

/// A curve t -> X(t) in the constraint set starting at the candidate, with
/// the objective sampled on a grid.
struct DescentCurve {
  CurveKind kind = CurveKind::givens;
  /// Pair index j (givens), entry l (phase) or cluster (escape); 0-based.
  std::optional<Index> index;
  /// Parameter interval [0, t_max] the curve is defined on.
  double t_max = 0.0;
  std::function<Matrix(double)> point;
  /// samples[0] is t = 0.
  std::vector<CurveSample> samples;
  /// value(0) - min over sampled values.
  double verified_drop = 0.0;

  double initial_value() const { return samples.front().value; }
  /// Consecutive samples never increase by more than `slack`, and the last
  /// one is strictly below the first.
  bool strictly_decreasing(double slack = 1e-12) const;
};

/// n points log-spaced in [lo, hi], lo > 0.
std::vector<double> log_spaced_grid(double lo, double hi, int n);

/// Fills samples (with t = 0 prepended) and verified_drop by evaluating
/// `objective` on `point(t)` over `grid`.
void sample_curve(DescentCurve& curve, const std::vector<double>& grid,
                  const std::function<double(const Matrix&)>& objective);

/// Drop a witness must exceed to count as verified: 1e-10 (1 + value).
double verification_threshold(double value);

}  // namespace lidskii
