#include "lidskii/frames.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "lidskii/majorization.hpp"

namespace lidskii {

namespace {

constexpr int kEscapeSamples = 64;

void check_frame_dims(const HermitianMatrix& s, const FrameSequence& g, const char* what) {
  if (g.size() == 0) throw PreconditionError(std::string(what) + ": empty frame sequence");
  if (g.dim() != s.dim()) {
    throw PreconditionError(std::string(what) + ": frame vectors must live in C^dim(S)");
  }
}

double spectral_norm(const HermitianMatrix& m) {
  const RealVector ev = eigenvalues(m).values();
  return ev.size() == 0 ? 0.0 : std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

Index numerical_rank(const Matrix& m, double rel_tol) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] >= rel_tol * s[0]) ++r;
  }
  return r;
}

// f(G) = N(S - S_G)^p, and the matrix P with df = -tr(P dS_G).
struct Objective {
  NormSpec norm;
  double power;

  explicit Objective(const NormSpec& n) : norm(n) {
    if (n.kind() == NormSpec::Kind::frobenius) {
      power = 2.0;
    } else if (n.kind() == NormSpec::Kind::schatten && n.p() > 1.0 && std::isfinite(n.p())) {
      power = n.p();
    } else {
      throw PreconditionError("fod_descent: needs frobenius or schatten p in (1, inf), got " +
                              n.to_string());
    }
  }

  double value(const Matrix& m) const {
    if (norm.kind() == NormSpec::Kind::frobenius) return m.squaredNorm();
    const RealVector ev = eigenvalues(HermitianMatrix(m, 1e-8)).values();
    return ev.cwiseAbs().array().pow(power).sum();
  }

  Matrix weight(const Matrix& m) const {
    if (norm.kind() == NormSpec::Kind::frobenius) return 2.0 * m;
    const auto [lambda, v] = eigh(HermitianMatrix(m, 1e-8));
    RealVector w(lambda.size());
    for (Index i = 0; i < w.size(); ++i) {
      const double x = lambda[i];
      w[i] = power * (x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0)) * std::pow(std::abs(x), power - 1.0);
    }
    return v.matrix() * diag(w) * v.matrix().adjoint();
  }

  // f(G') - f(G). For Frobenius it is formed from the step itself,
  // -2 Re<M, E> + ||E||^2 with E = S_G' - S_G, which stays accurate after the
  // plain difference of values has drowned in rounding.
  double change(const Matrix& m, const Matrix& g, const Matrix& g_new, double f,
                double f_new) const {
    if (norm.kind() != NormSpec::Kind::frobenius) return f_new - f;
    const Matrix delta = g_new - g;
    const Matrix e = delta * g.adjoint() + g * delta.adjoint() + delta * delta.adjoint();
    return -2.0 * std::real((m.adjoint() * e).trace()) + e.squaredNorm();
  }
};

Matrix residual_matrix(const HermitianMatrix& s, const Matrix& g) {
  return s.matrix() - g * g.adjoint();
}

// Riemannian gradient: Euclidean gradient -2 P g_i with its radial part removed.
Matrix tangent_gradient(const Matrix& p, const Matrix& g, const RealVector& a) {
  Matrix grad = -2.0 * p * g;
  for (Index i = 0; i < g.cols(); ++i) {
    const double radial = std::real(g.col(i).dot(grad.col(i))) / a[i];
    grad.col(i) -= radial * g.col(i);
  }
  return grad;
}

Matrix retract(const Matrix& g, const RealVector& a) {
  Matrix out = g;
  for (Index i = 0; i < out.cols(); ++i) out.col(i) *= std::sqrt(a[i]) / out.col(i).norm();
  return out;
}

}  // namespace

FrameSequence::FrameSequence(Matrix vectors, RealVector a, double sphere_tol)
    : g_(std::move(vectors)), a_(std::move(a)) {
  if (g_.cols() != a_.size()) {
    throw PreconditionError("FrameSequence: " + std::to_string(g_.cols()) + " vectors but " +
                            std::to_string(a_.size()) + " norms");
  }
  for (Index i = 0; i < a_.size(); ++i) {
    if (!(a_[i] > 0.0) || !std::isfinite(a_[i])) {
      throw PreconditionError("FrameSequence: a_" + std::to_string(i) + " must be positive");
    }
    const double err = std::abs(g_.col(i).squaredNorm() - a_[i]);
    if (!(err <= sphere_tol * a_[i])) {
      throw PreconditionError("FrameSequence: vector " + std::to_string(i) +
                              " is off its sphere by " + std::to_string(err));
    }
  }
}

FrameSequence FrameSequence::projected(const Matrix& vectors, const RealVector& a) {
  if (vectors.cols() != a.size()) {
    throw PreconditionError("FrameSequence::projected: vector/norm count mismatch");
  }
  for (Index i = 0; i < vectors.cols(); ++i) {
    if (vectors.col(i).norm() == 0.0) {
      throw PreconditionError("FrameSequence::projected: zero vector " + std::to_string(i));
    }
  }
  return FrameSequence(retract(vectors, a), a);
}

double FrameSequence::sphere_residual() const {
  double worst = 0.0;
  for (Index i = 0; i < a_.size(); ++i) {
    worst = std::max(worst, std::abs(g_.col(i).squaredNorm() - a_[i]) / a_[i]);
  }
  return worst;
}

GeneralMatrix synthesis(const FrameSequence& g) {
  if (g.size() == 0) throw PreconditionError("synthesis: empty frame sequence");
  return g.vectors();
}

HermitianMatrix frame_operator(const FrameSequence& g) {
  if (g.size() == 0) throw PreconditionError("frame_operator: empty frame sequence");
  const Matrix& t = g.vectors();
  return HermitianMatrix(Matrix(t * t.adjoint()));
}

double theta(const NormSpec& n, const HermitianMatrix& s, const FrameSequence& g) {
  check_frame_dims(s, g, "theta");
  return evaluate(n, s - frame_operator(g));
}

WaterFill water_fill(const SpectrumVector& lambda, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("water_fill: t must be positive");
  const Index d = lambda.size();
  if (d == 0) throw PreconditionError("water_fill: empty spectrum");
  // On [lambda_{r+1}, lambda_r] the map c -> sum (lambda_i - c)^+ is linear;
  // the smallest r whose root lies above lambda_{r+1} is the answer.
  double partial = 0.0;
  double c = 0.0;
  for (Index r = 1; r <= d; ++r) {
    partial += lambda[r - 1];
    c = (partial - t) / static_cast<double>(r);
    if (r == d || c >= lambda[r]) break;
  }
  RealVector spec = (lambda.values().array() - c).cwiseMax(0.0);
  return {c, SpectrumVector(spec)};
}

NaiveBound naive_lower_bound(const NormSpec& n, const HermitianMatrix& s, double t) {
  const auto [lambda, v] = eigh(s);
  const WaterFill wf = water_fill(lambda, t);
  HermitianMatrix a_op = HermitianMatrix::diagonal(wf.spectrum.values()).conjugate(v);
  const double value = evaluate(n, s - a_op);
  return {value, wf.level, std::move(a_op)};
}

std::string to_string(StructureCheck c) {
  switch (c) {
    case StructureCheck::eigenvector:
      return "eigenvector";
    case StructureCheck::commutation:
      return "commutation";
    case StructureCheck::lidskii_alignment:
      return "lidskii_alignment";
    case StructureCheck::linear_independence:
      return "linear_independence";
  }
  return {};
}

FodStructureReport structure_check_local(const NormSpec& n, const HermitianMatrix& s,
                                         const FrameSequence& g0, double tol) {
  check_frame_dims(s, g0, "structure_check_local");
  if (g0.sphere_residual() > 1e-10) {
    throw PreconditionError("structure_check_local: G0 is not on T_d(a)");
  }
  const Index k = g0.size();
  const HermitianMatrix s0 = frame_operator(g0);
  const HermitianMatrix m = s - s0;
  const double m_norm = spectral_norm(m);
  const double res_scale = 1.0 + m_norm;

  FodStructureReport rep;
  rep.theta_value = evaluate(n, m);
  rep.fitted_eigenvalues.resize(k);
  rep.eigvec_residuals.resize(k);
  std::vector<Index> eigen_members;
  for (Index j = 0; j < k; ++j) {
    const CVector g = g0.vector(j);
    const CVector mg = m.matrix() * g;
    const double c = std::real(g.dot(mg)) / g.squaredNorm();
    rep.fitted_eigenvalues[j] = c;
    rep.eigvec_residuals[j] = (mg - c * g).norm() / g.norm();
    if (rep.eigvec_residuals[j] < tol * res_scale) {
      eigen_members.push_back(j);
    } else if (!rep.witness) {
      rep.witness = StructureWitness{StructureCheck::eigenvector, j, rep.eigvec_residuals[j]};
    }
  }

  rep.commute_residual = commutator(s.matrix(), s0.matrix()).norm();
  const double s_norm = spectral_norm(s);
  const double s0_norm = spectral_norm(s0);
  if (!rep.witness && rep.commute_residual > tol * (1.0 + s_norm * s0_norm)) {
    rep.witness = StructureWitness{StructureCheck::commutation, std::nullopt, rep.commute_residual};
  }

  const RealVector lm = eigenvalues(m).values();
  const RealVector target =
      sort_desc(eigenvalues(s).values() - eigenvalues(s0).values()).values();
  rep.alignment_gap = (lm - target).cwiseAbs().maxCoeff();
  rep.lidskii_aligned = rep.alignment_gap <= tol * (1.0 + s_norm + s0_norm);
  if (!rep.witness && !rep.lidskii_aligned) {
    rep.witness =
        StructureWitness{StructureCheck::lidskii_alignment, std::nullopt, rep.alignment_gap};
  }

  // Partition the eigenvector members by fitted eigenvalue, ascending.
  std::sort(eigen_members.begin(), eigen_members.end(), [&](Index x, Index y) {
    const double cx = rep.fitted_eigenvalues[x];
    const double cy = rep.fitted_eigenvalues[y];
    return cx < cy || (cx == cy && x < y);
  });
  RealVector fitted(static_cast<Index>(eigen_members.size()));
  for (Index i = 0; i < fitted.size(); ++i) fitted[i] = rep.fitted_eigenvalues[eigen_members[i]];
  const double gap = fitted.size() > 0 ? std::max(gap_tolerance(fitted), tol * res_scale) : 0.0;
  const double top = lm.size() > 0 ? lm[0] : 0.0;

  Index begin = 0;
  for (Index i = 0; i < fitted.size(); ++i) {
    if (i + 1 < fitted.size() && fitted[i + 1] - fitted[i] <= gap) continue;
    FrameCluster cl;
    Matrix span(g0.dim(), i + 1 - begin);
    double sum = 0.0;
    for (Index r = begin; r <= i; ++r) {
      const Index idx = eigen_members[r];
      cl.members.push_back(idx);
      span.col(r - begin) = g0.vector(idx);
      sum += fitted[r];
    }
    cl.value = sum / static_cast<double>(cl.members.size());
    cl.span_dim = numerical_rank(span, tol);
    cl.independent = cl.span_dim == static_cast<Index>(cl.members.size());
    cl.independence_required = top > cl.value + gap;
    rep.partition.push_back(std::move(cl));
    begin = i + 1;
  }
  if (!rep.witness) {
    for (std::size_t j = 0; j < rep.partition.size(); ++j) {
      const FrameCluster& cl = rep.partition[j];
      if (cl.independence_required && !cl.independent) {
        rep.witness = StructureWitness{StructureCheck::linear_independence,
                                       static_cast<Index>(j),
                                       static_cast<double>(cl.span_dim)};
        break;
      }
    }
  }
  return rep;
}

std::string to_string(SpecialCaseVerdict v) {
  switch (v) {
    case SpecialCaseVerdict::certified_global:
      return "certified_global";
    case SpecialCaseVerdict::not_applicable:
      return "not_applicable";
    case SpecialCaseVerdict::violates:
      return "violates";
  }
  return {};
}

SpecialCaseReport special_case_certify(const NormSpec& n, const HermitianMatrix& s,
                                       const FrameSequence& g0, double tol) {
  if (!n.strictly_convex()) {
    throw PreconditionError("special_case_certify: the norm " + n.to_string() +
                            " is not strictly convex");
  }
  check_frame_dims(s, g0, "special_case_certify");
  if (g0.size() < g0.dim()) throw PreconditionError("special_case_certify: requires k >= d");

  const HermitianMatrix s0 = frame_operator(g0);
  const HermitianMatrix m = s - s0;
  const double scale = 1.0 + spectral_norm(m);

  SpecialCaseReport rep;
  rep.theta_value = evaluate(n, m);
  rep.naive_bound = naive_lower_bound(n, s, g0.norms().sum()).value;

  double lo = 0.0;
  double hi = 0.0;
  for (Index j = 0; j < g0.size(); ++j) {
    const CVector g = g0.vector(j);
    const CVector mg = m.matrix() * g;
    const double c = std::real(g.dot(mg)) / g.squaredNorm();
    if ((mg - c * g).norm() / g.norm() >= tol * scale) return rep;
    lo = j == 0 ? c : std::min(lo, c);
    hi = j == 0 ? c : std::max(hi, c);
  }
  if (hi - lo > tol * scale) return rep;

  const double c1 = 0.5 * (lo + hi);
  rep.common_eigenvalue = c1;
  const RealVector expected = (eigenvalues(s).values().array() - c1).cwiseMax(0.0);
  rep.spectrum_gap = (eigenvalues(s0).values() - expected).cwiseAbs().maxCoeff();
  const bool formula = rep.spectrum_gap <= tol * scale;
  const bool attained = std::abs(rep.theta_value - rep.naive_bound) <= tol * scale;
  rep.verdict = formula && attained ? SpecialCaseVerdict::certified_global
                                    : SpecialCaseVerdict::violates;
  return rep;
}

double fod_gradient_norm(const HermitianMatrix& s, const FrameSequence& g, const NormSpec& n) {
  check_frame_dims(s, g, "fod_gradient_norm");
  const Objective obj(n);
  const Matrix m = residual_matrix(s, g.vectors());
  return tangent_gradient(obj.weight(m), g.vectors(), g.norms()).norm();
}

FodResult fod_descent_from(const HermitianMatrix& s, const FrameSequence& start,
                           const FodOptions& opts) {
  check_frame_dims(s, start, "fod_descent");
  const Objective obj(opts.norm);
  const RealVector& a = start.norms();
  const int stride = std::max(1, opts.trace_stride);

  Matrix g = start.vectors();
  Matrix m = residual_matrix(s, g);
  double f = obj.value(m);
  if (!std::isfinite(f)) throw ConvergenceError("fod_descent: non-finite objective", f);

  std::vector<FodIterate> trace;
  bool converged = false;
  double grad_norm = 0.0;
  int it = 0;
  double last_step = 0.0;
  for (;; ++it) {
    const Matrix grad = tangent_gradient(obj.weight(m), g, a);
    grad_norm = grad.norm();
    if (it % stride == 0) trace.push_back({it, f, grad_norm, last_step});
    if (grad_norm < opts.grad_tol) {
      converged = true;
      break;
    }
    if (it >= opts.max_iters) break;

    const double lambda1 = eigenvalues(HermitianMatrix(Matrix(g * g.adjoint()), 1e-8))[0];
    double step = 1.0 / (8.0 * lambda1 + 1.0);
    const double slope = grad_norm * grad_norm;
    bool accepted = false;
    Matrix g_new;
    Matrix m_new;
    double f_new = f;
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f));
    for (int bt = 0; bt < 60; ++bt) {
      g_new = retract(g - step * grad, a);
      m_new = residual_matrix(s, g_new);
      f_new = obj.value(m_new);
      if (!std::isfinite(f_new)) throw ConvergenceError("fod_descent: non-finite objective", f_new);
      const double df = obj.change(m, g, g_new, f, f_new);
      if (df <= -opts.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      // Objective flat to rounding: take the step only if it shrinks the gradient.
      if (std::abs(df) <= noise &&
          tangent_gradient(obj.weight(m_new), g_new, a).norm() < grad_norm) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) break;  // stalled at rounding level
    g = std::move(g_new);
    m = std::move(m_new);
    f = f_new;
    last_step = step;
  }
  if (trace.empty() || trace.back().iteration != it) trace.push_back({it, f, grad_norm, last_step});

  FodResult out{FrameSequence(retract(g, a), a), std::move(trace), converged, f, grad_norm, it};
  return out;
}

FodResult fod_descent(const HermitianMatrix& s, const RealVector& a, std::uint64_t seed,
                      const FodOptions& opts) {
  if (a.size() == 0) throw PreconditionError("fod_descent: empty norm sequence");
  if (s.dim() < 1) throw PreconditionError("fod_descent: d must be positive");
  Rng rng(seed);
  const Matrix start = random_gaussian(s.dim(), a.size(), rng);
  return fod_descent_from(s, FrameSequence::projected(start, a), opts);
}

FodOptimizeResult fod_optimize(const HermitianMatrix& s, const RealVector& a, int restarts,
                               std::uint64_t seed, const FodOptions& opts, unsigned threads) {
  if (restarts < 1) throw PreconditionError("fod_optimize: restarts must be positive");
  std::vector<std::optional<FodResult>> results(static_cast<std::size_t>(restarts));
  std::vector<std::exception_ptr> errors(results.size());
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < restarts; r = next++) {
      try {
        results[r] = fod_descent(s, a, seed + static_cast<std::uint64_t>(r), opts);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const unsigned n_workers = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(restarts));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Index best = 0;
  FodOptimizeResult out{*results[0], 0, {}, {}};
  for (std::size_t r = 0; r < results.size(); ++r) {
    out.restart_objectives.push_back(results[r]->objective);
    out.restart_converged.push_back(results[r]->converged);
    if (results[r]->objective < results[best]->objective) best = static_cast<Index>(r);
  }
  out.best = std::move(*results[best]);
  out.best_restart = best;
  return out;
}

std::optional<DescentCurve> escape_move(const HermitianMatrix& s, const FrameSequence& g0,
                                        Index cluster_index, double tol, const NormSpec& n) {
  const FodStructureReport rep = structure_check_local(n, s, g0, tol);
  if (cluster_index < 0 || cluster_index >= static_cast<Index>(rep.partition.size())) {
    return std::nullopt;
  }
  const FrameCluster& cl = rep.partition[cluster_index];
  if (cl.independent) return std::nullopt;

  const HermitianMatrix m = s - frame_operator(g0);
  const auto [lambda, vecs] = eigh(m);
  const double gap = std::max(gap_tolerance(lambda.values()), tol * (1.0 + spectral_norm(m)));
  if (!(lambda[0] > cl.value + gap)) return std::nullopt;

  const Index mm = static_cast<Index>(cl.members.size());
  const RealVector& a = g0.norms();
  Matrix scaled(g0.dim(), mm);
  for (Index l = 0; l < mm; ++l) {
    scaled.col(l) = std::sqrt(a[cl.members[l]]) * g0.vector(cl.members[l]);
  }
  // sum_l conj(z_l) a_l^{1/2} g_l = 0.
  Eigen::JacobiSVD<Matrix> null_svd(scaled, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CVector z = null_svd.matrixV().col(mm - 1).conjugate();
  z *= 0.5 / z.cwiseAbs().maxCoeff();

  // h: unit eigenvector for lambda_1(S - S0), made exactly orthogonal to W_j.
  CVector h = vecs.matrix().col(0);
  const RealVector sv = null_svd.singularValues();
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] < tol * sv[0]) break;
    const CVector w = null_svd.matrixU().col(i);
    h -= w.dot(h) * w;
  }
  if (h.norm() < 0.5) return std::nullopt;
  h.normalize();

  DescentCurve curve;
  curve.kind = CurveKind::escape;
  curve.index = cluster_index;
  curve.t_max = 0.49;
  const Matrix g = g0.vectors();
  const std::vector<Index> members = cl.members;
  curve.point = [g, a, members, z, h](double t) {
    Matrix out = g;
    for (std::size_t l = 0; l < members.size(); ++l) {
      const Index col = members[l];
      const double zl2 = std::norm(z[static_cast<Index>(l)]);
      out.col(col) = std::sqrt(1.0 - t * t * zl2) * g.col(col) +
                     (t * std::sqrt(a[col])) * z[static_cast<Index>(l)] * h;
    }
    return out;
  };
  const HermitianMatrix sc = s;
  sample_curve(curve, log_spaced_grid(1e-4, 0.49, kEscapeSamples), [&n, &sc](const Matrix& t) {
    return evaluate(n, sc - HermitianMatrix(Matrix(t * t.adjoint())));
  });
  if (!(curve.verified_drop > verification_threshold(curve.initial_value()))) return std::nullopt;
  return curve;
}

}  // namespace lidskii
