#include "lidskii/norms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace lidskii {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(std::string_view text, std::string_view what) {
  if (text == "inf" || text == "infinity") return kInf;
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw PreconditionError("norm spec: cannot parse " + std::string(what) + " '" +
                            std::string(text) + "'");
  }
  return value;
}

}  // namespace

NormSpec NormSpec::schatten(double p) {
  if (!(p >= 1.0)) throw PreconditionError("schatten norm requires p >= 1");
  if (std::isinf(p)) return spectral();
  return NormSpec(Kind::schatten, p, 0);
}

NormSpec NormSpec::kyfan(int k) {
  if (k < 1) throw PreconditionError("Ky Fan norm requires k >= 1");
  return NormSpec(Kind::kyfan, 1.0, k);
}

NormSpec NormSpec::spectral() { return NormSpec(Kind::spectral, kInf, 1); }

NormSpec NormSpec::frobenius() { return NormSpec(Kind::frobenius, 2.0, 0); }

NormSpec NormSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view() : text.substr(colon + 1);
  if (head == "spectral" && arg.empty()) return spectral();
  if (head == "frobenius" && arg.empty()) return frobenius();
  if (head == "schatten" && !arg.empty()) return schatten(parse_number(arg, "p"));
  if (head == "kyfan" && !arg.empty()) {
    const double k = parse_number(arg, "k");
    if (k != std::floor(k) || k < 1 || k > std::numeric_limits<int>::max()) {
      throw PreconditionError("Ky Fan index must be a positive integer");
    }
    return kyfan(static_cast<int>(k));
  }
  throw PreconditionError("unknown norm '" + std::string(text) +
                          "' (expected schatten:P, kyfan:K, spectral or frobenius)");
}

bool NormSpec::strictly_convex() const noexcept {
  switch (kind_) {
    case Kind::frobenius:
      return true;
    case Kind::schatten:
      return p_ > 1.0 && std::isfinite(p_);
    case Kind::kyfan:
    case Kind::spectral:
      return false;
  }
  return false;
}

std::string NormSpec::to_string() const {
  switch (kind_) {
    case Kind::frobenius:
      return "frobenius";
    case Kind::spectral:
      return "spectral";
    case Kind::kyfan:
      return "kyfan:" + std::to_string(k_);
    case Kind::schatten: {
      std::ostringstream os;
      os.precision(17);
      os << "schatten:" << p_;
      return os.str();
    }
  }
  return {};
}

bool is_strictly_convex(const NormSpec& n) { return n.strictly_convex(); }

double evaluate_gauge(const NormSpec& n, const RealVector& s) {
  if (s.size() == 0) return 0.0;
  RealVector a = s.cwiseAbs();
  std::sort(a.begin(), a.end(), std::greater<>());
  const double top = a[0];
  if (top == 0.0) return 0.0;
  switch (n.kind()) {
    case NormSpec::Kind::spectral:
      return top;
    case NormSpec::Kind::kyfan:
      return a.head(std::min<Index>(n.k(), a.size())).sum();
    case NormSpec::Kind::frobenius:
    case NormSpec::Kind::schatten: {
      // Scaling by the largest entry keeps (s_i/s_1)^p in [0, 1] for any p.
      const double p = n.p();
      if (p == 1.0) return a.sum();
      double acc = 0.0;
      for (Index i = 0; i < a.size(); ++i) acc += std::pow(a[i] / top, p);
      return top * std::pow(acc, 1.0 / p);
    }
  }
  return 0.0;
}

double evaluate(const NormSpec& n, const GeneralMatrix& a) {
  return evaluate_gauge(n, singular_values(a).values());
}

double evaluate(const NormSpec& n, const HermitianMatrix& m) {
  return evaluate_gauge(n, eigenvalues(m).values());
}

HermitianMatrix norm_gradient(const NormSpec& n, const HermitianMatrix& m) {
  const bool smooth = n.kind() == NormSpec::Kind::frobenius ||
                      (n.kind() == NormSpec::Kind::schatten && n.p() > 1.0);
  if (!smooth) throw PreconditionError("norm_gradient: requires schatten p > 1");
  const double value = evaluate(n, m);
  if (value == 0.0) return HermitianMatrix::zero(m.dim());
  const double p = n.p();
  if (p == 2.0) return (1.0 / value) * m;
  const auto [lambda, v] = eigh(m);
  RealVector g(lambda.size());
  for (Index i = 0; i < g.size(); ++i) {
    const double x = lambda[i] / value;
    g[i] = std::copysign(std::pow(std::abs(x), p - 1.0), x);
  }
  return HermitianMatrix::diagonal(g).conjugate(v);
}

}  // namespace lidskii
