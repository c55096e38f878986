#include "lidskii/majorization.hpp"

#include <algorithm>
#include <cmath>

namespace lidskii {

SpectrumVector sort_desc(const RealVector& x) { return SpectrumVector::sorted(x); }

MajorizationVerdict submajorizes(const RealVector& y, const RealVector& x, double tol) {
  if (x.size() == 0 || y.size() == 0) {
    throw PreconditionError("submajorizes: empty vector");
  }
  const RealVector xs = sort_desc(x).values();
  const RealVector ys = sort_desc(y).values();
  const Index m = std::min(xs.size(), ys.size());

  RealVector px(m);
  RealVector py(m);
  double sx = 0.0;
  double sy = 0.0;
  double scale = 0.0;
  for (Index j = 0; j < m; ++j) {
    sx += xs[j];
    sy += ys[j];
    px[j] = sx;
    py[j] = sy;
    scale = std::max({scale, std::abs(sx), std::abs(sy)});
  }
  const double slack = tol * (1.0 + scale);

  MajorizationVerdict out;
  out.holds = true;
  out.margin = py[0] - px[0];
  for (Index j = 0; j < m; ++j) {
    const double gap = py[j] - px[j];
    out.margin = std::min(out.margin, gap);
    if (out.holds && gap < -slack) {
      out.holds = false;
      out.first_violation_index = j + 1;
    }
  }
  if (out.holds) {
    bool differ = xs.size() != ys.size();
    for (Index j = 0; j < m && !differ; ++j) {
      differ = std::abs(xs[j] - ys[j]) > slack;
    }
    out.strict = differ;
  }
  return out;
}

MajorizationVerdict majorizes(const RealVector& y, const RealVector& x, double tol) {
  if (x.size() != y.size()) {
    throw PreconditionError("majorizes: vectors must have equal length");
  }
  MajorizationVerdict out = submajorizes(y, x, tol);
  const double trace_gap = std::abs(x.sum() - y.sum());
  out.margin = std::min(out.margin, -trace_gap);
  if (out.holds && trace_gap > tol * (1.0 + std::abs(y.sum()))) {
    out.holds = false;
    out.strict = false;
    out.first_violation_index = x.size();
  }
  return out;
}

RealVector majorization_path(const SpectrumVector& a, const SpectrumVector& b, double t) {
  if (a.size() != b.size()) {
    throw PreconditionError("majorization_path: length mismatch");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw PreconditionError("majorization_path: t must lie in [0, 1]");
  }
  if (!majorizes(a.values(), b.values()).holds) {
    throw PreconditionError("majorization_path: b is not majorized by a");
  }
  return (1.0 - t) * a.values() + t * b.values();
}

}  // namespace lidskii
