#include "lidskii/descent.hpp"

#include <algorithm>
#include <cmath>

namespace lidskii {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_global:
      return "certified_global";
    case Verdict::not_local_min:
      return "not_local_min";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return {};
}

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::givens:
      return "givens";
    case CurveKind::phase:
      return "phase";
    case CurveKind::orbit_search:
      return "orbit_search";
    case CurveKind::escape:
      return "escape";
  }
  return {};
}

bool DescentCurve::strictly_decreasing(double slack) const {
  if (samples.size() < 2) return false;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].value > samples[i - 1].value + slack) return false;
  }
  return samples.back().value < samples.front().value;
}

std::vector<double> log_spaced_grid(double lo, double hi, int n) {
  std::vector<double> grid;
  grid.reserve(n);
  if (n == 1) return {hi};
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) grid.push_back(std::exp(a + (b - a) * i / (n - 1)));
  return grid;
}

void sample_curve(DescentCurve& curve, const std::vector<double>& grid,
                  const std::function<double(const Matrix&)>& objective) {
  curve.samples.clear();
  curve.samples.reserve(grid.size() + 1);
  curve.samples.push_back({0.0, objective(curve.point(0.0))});
  double lowest = curve.samples.front().value;
  for (double t : grid) {
    const double v = objective(curve.point(t));
    curve.samples.push_back({t, v});
    lowest = std::min(lowest, v);
  }
  curve.verified_drop = curve.samples.front().value - lowest;
}

double verification_threshold(double value) { return 1e-10 * (1.0 + std::abs(value)); }

}  // namespace lidskii
