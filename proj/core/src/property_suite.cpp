#include "lidskii/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "lidskii/eig_orbit.hpp"
#include "lidskii/frames.hpp"
#include "lidskii/io.hpp"
#include "lidskii/majorization.hpp"
#include "lidskii/samplers.hpp"
#include "lidskii/sv_orbit.hpp"

namespace lidskii {

namespace {

struct Tally {
  PropertyOutcome out;

  void add(bool ok, double margin) {
    ++out.instances;
    if (ok) ++out.passed;
    out.worst_margin = out.instances == 1 ? margin : std::min(out.worst_margin, margin);
  }
  void add(double margin) { add(margin >= 0.0, margin); }
};

Index pick(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

double pick_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

const std::vector<NormSpec>& all_norms() {
  static const std::vector<NormSpec> norms = {
      NormSpec::frobenius(), NormSpec::schatten(1.0), NormSpec::schatten(1.5),
      NormSpec::schatten(4.0), NormSpec::spectral(), NormSpec::kyfan(2)};
  return norms;
}

RealVector positive_norms(Index k, Rng& rng) {
  RealVector a(k);
  for (Index i = 0; i < k; ++i) a[i] = pick_real(rng, 0.2, 2.0);
  return a;
}

using Property = std::function<void(Tally&, Rng&, int)>;

struct NamedProperty {
  const char* name;
  int base_count;
  Property run;
};

std::vector<NamedProperty> properties() {
  return {
      {"eigh_reconstruction", 200,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const HermitianMatrix m = random_hermitian(pick(rng, 1, 8), rng);
           const auto [lam, v] = eigh(m);
           const double res = (m.matrix() - v.matrix() * diag(lam.values()) * v.matrix().adjoint()).norm();
           t.add(tol::kEig * (1.0 + m.matrix().norm()) - res);
         }
       }},
      {"svd_reconstruction", 200,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 8);
           const Matrix a = random_gaussian(d, d, rng);
           const auto f = svd(a);
           const double res =
               (a - f.v.matrix().adjoint() * diag(f.s.values()) * f.u.matrix()).norm();
           t.add(tol::kSvd * (1.0 + a.norm()) - res);
         }
       }},
      {"dilation_spectrum", 200,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 6);
           const Matrix c = random_gaussian(d, d, rng);
           const RealVector s = singular_values(c).values();
           RealVector expected(2 * d);
           expected << s, -s.reverse();
           const double err = (eigenvalues(dilate(c)).values() - expected).cwiseAbs().maxCoeff();
           t.add(tol::kEig * (1.0 + s[0]) - err);
         }
       }},
      {"majorization_reflexive", 200,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const RealVector x = samplers::random_spectrum(pick(rng, 1, 8), rng).values();
           const auto v = majorizes(x, x);
           t.add(v.holds && !v.strict, v.margin);
         }
       }},
      {"entrywise_submajorization", 500,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 8);
           RealVector x(d);
           RealVector y(d);
           for (Index j = 0; j < d; ++j) {
             x[j] = pick_real(rng, -1.0, 1.0);
             y[j] = x[j] + pick_real(rng, 0.0, 1.0);
           }
           const auto v = submajorizes(y, x);
           t.add(v.holds, v.margin);
         }
       }},
      {"lidskii_eigenvalue", 500,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 2, 8);
           const HermitianMatrix a = random_hermitian(d, rng);
           const HermitianMatrix b = random_hermitian(d, rng);
           const auto v = majorizes(eigenvalues(a - b).values(),
                                    eigenvalues(a).values() - eigenvalues(b).values(), 1e-8);
           t.add(v.holds, v.margin);
         }
       }},
      {"lidskii_singular", 500,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 8);
           const Matrix a = random_gaussian(d, d, rng);
           const Matrix b = random_gaussian(d, d, rng);
           const RealVector diff =
               (singular_values(a).values() - singular_values(b).values()).cwiseAbs();
           const auto v = submajorizes(singular_values(Matrix(a - b)).values(), diff, 1e-8);
           t.add(v.holds, v.margin);
         }
       }},
      {"norm_unitary_invariance", 50,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 2, 6);
           const Matrix a = random_gaussian(d, d, rng);
           const Matrix u = haar_unitary(d, rng).matrix();
           const Matrix v = haar_unitary(d, rng).matrix();
           for (const auto& norm : all_norms()) {
             const double base = evaluate(norm, a);
             t.add(1e-9 * (1.0 + base) - std::abs(evaluate(norm, Matrix(u * a * v)) - base));
           }
         }
       }},
      {"norm_triangle_homogeneity", 50,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 2, 6);
           const Matrix a = random_gaussian(d, d, rng);
           const Matrix b = random_gaussian(d, d, rng);
           const double c = pick_real(rng, -3.0, 3.0);
           for (const auto& norm : all_norms()) {
             const double na = evaluate(norm, a);
             const double nb = evaluate(norm, b);
             t.add(na + nb + 1e-9 * (1.0 + na + nb) - evaluate(norm, Matrix(a + b)));
             t.add(1e-9 * (1.0 + na) - std::abs(evaluate(norm, Matrix(c * a)) - std::abs(c) * na));
           }
         }
       }},
      {"orbit_global_optimality", 20,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 2, 5);
           const HermitianMatrix s = random_hermitian(d, rng);
           const SpectrumVector mu = samplers::random_spectrum(d, rng);
           const HermitianMatrix gop = global_minimizer_eig(s, mu);
           for (const auto& norm : all_norms()) {
             const double best = phi(norm, s, gop);
             double worst = std::numeric_limits<double>::infinity();
             for (int k = 0; k < 50; ++k) {
               worst = std::min(worst, phi(norm, s, samplers::orbit_sample(mu, rng)) - best);
             }
             t.add(worst + 1e-8);
           }
         }
       }},
      {"eig_certification", 20,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 2, 5);
           const auto aligned = samplers::commuting_pair(d, true, rng);
           const auto ok = certify_local_eig(NormSpec::frobenius(), aligned.s, aligned.g0);
           t.add(ok.verdict == Verdict::certified_global, -ok.lidskii_gap);

           const auto bad = samplers::commuting_pair(d, false, rng);
           const auto cert = certify_local_eig(NormSpec::schatten(3.0), bad.s, bad.g0);
           bool valid = cert.verdict == Verdict::not_local_min && cert.descent_witness &&
                        cert.descent_witness->strictly_decreasing();
           double orbit_err = 0.0;
           if (valid) {
             const SpectrumVector mu = eigenvalues(bad.g0);
             for (const auto& smp : cert.descent_witness->samples) {
               const HermitianMatrix g(cert.descent_witness->point(smp.t), 1e-8);
               orbit_err = std::max(orbit_err,
                                    (eigenvalues(g).values() - mu.values()).cwiseAbs().maxCoeff());
             }
           }
           t.add(valid && orbit_err <= 1e-8, 1e-8 - orbit_err);
         }
       }},
      {"joint_svd_constructed", 100,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 6);
           const auto pair = samplers::hypothesis_pair(d, i % 2 == 1, rng);
           const double scale = (1.0 + pair.a.norm()) * (1.0 + pair.b.norm());
           try {
             const JointSVD js = joint_svd(pair.a, pair.b);
             t.add(1e-8 * scale - std::max(js.residual_a, js.residual_b));
           } catch (const PreconditionError&) {
             t.add(false, -1.0);
           }
         }
       }},
      {"sv_equality_characterization", 100,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 5);
           const auto pos = samplers::aligned_svd_pair(d, rng);
           const auto rp = sv_equality_report(pos.a, pos.b);
           t.add(rp.spectral_equality && rp.joint_svd_feasible, -rp.gap);
           const Index dn = pick(rng, 2, 5);
           const Matrix a = random_gaussian(dn, dn, rng);
           const Matrix b = random_gaussian(dn, dn, rng);
           const auto rn = sv_equality_report(a, b);
           t.add(!rn.spectral_equality && !rn.joint_svd_feasible, rn.gap);
         }
       }},
      {"pi_submersion_hermitian_pairs", 50,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const auto pair = samplers::hypothesis_pair(pick(rng, 1, 4), i % 2 == 1, rng);
           const auto res = pi_submersion_test(pair.a, pair.b);
           t.add(!res.submersion, static_cast<double>(res.kernel_dim));
         }
       }},
      {"commutant_basis_invariance", 50,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 4);
           const HermitianMatrix s = random_hermitian(d, rng);
           const HermitianMatrix g = random_hermitian(d, rng);
           const UnitaryMatrix u = haar_unitary(d, rng);
           const auto base = commutant_is_trivial(s, g);
           const auto moved = commutant_is_trivial(s.conjugate_adjoint(u), g.conjugate_adjoint(u));
           t.add(!base.trivial || moved.trivial,
                 -std::abs(static_cast<double>(base.kernel_dim - moved.kernel_dim)));
         }
       }},
      {"water_fill_root", 200,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const SpectrumVector lam = samplers::random_spectrum(pick(rng, 1, 6), rng, 0.0, 3.0);
           const double tt = pick_real(rng, 0.01, 6.0);
           const WaterFill wf = water_fill(lam, tt);
           const double res =
               std::abs((lam.values().array() - wf.level).cwiseMax(0.0).sum() - tt);
           t.add(1e-10 * (1.0 + tt) - res);
         }
       }},
      {"naive_bound_below_theta", 30,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 5);
           const Index k = pick(rng, 1, 8);
           const RealVector a = positive_norms(k, rng);
           const HermitianMatrix s = samplers::random_psd_trace(d, pick_real(rng, 0.5, 6.0), rng);
           for (const auto& norm : all_norms()) {
             const double bound = naive_lower_bound(norm, s, a.sum()).value;
             for (int r = 0; r < 10; ++r) {
               const FrameSequence g = samplers::random_frame(d, a, rng);
               t.add(theta(norm, s, g) + 1e-8 - bound);
             }
           }
         }
       }},
      {"frame_trace_conservation", 200,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const RealVector a = positive_norms(pick(rng, 1, 8), rng);
           const FrameSequence g = samplers::random_frame(pick(rng, 1, 5), a, rng);
           const double tr = frame_operator(g).matrix().trace().real();
           t.add(1e-10 * (1.0 + a.sum()) - std::abs(tr - a.sum()));
         }
       }},
      {"fod_structure_frobenius", 10,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const Index d = pick(rng, 1, 4);
           const Index k = pick(rng, d, d + 2);
           const RealVector a = positive_norms(k, rng);
           const HermitianMatrix s = samplers::random_psd_trace(d, pick_real(rng, 1.0, 8.0), rng);
           const FodResult r = fod_descent(s, a, rng());
           if (!(r.grad_norm < 1e-9)) continue;
           const auto rep = structure_check_local(NormSpec::frobenius(), s, r.frame, 1e-6);
           t.add(rep.consistent(), rep.consistent() ? 0.0 : -rep.witness->value);
         }
       }},
      {"escape_move_validity", 20,
       [](Tally& t, Rng& rng, int n) {
         for (int i = 0; i < n; ++i) {
           const auto inst = samplers::dependent_cluster(pick(rng, 2, 5), rng);
           const auto curve = escape_move(inst.s, inst.g0, 0);
           if (!curve) {
             t.add(false, -1.0);
             continue;
           }
           double sphere = 0.0;
           for (const auto& smp : curve->samples) {
             const Matrix g = curve->point(smp.t);
             for (Index l = 0; l < g.cols(); ++l) {
               sphere = std::max(sphere,
                                 std::abs(g.col(l).squaredNorm() - inst.g0.norms()[l]) /
                                     inst.g0.norms()[l]);
             }
           }
           t.add(curve->verified_drop > 1e-12 && sphere <= 1e-10, 1e-10 - sphere);
         }
       }},
  };
}

nlohmann::json schatten4_findings(Rng& rng, int instances) {
  const NormSpec norm = NormSpec::schatten(4.0);
  FodOptions opts;
  opts.norm = norm;
  opts.max_iters = 20000;
  nlohmann::json runs = nlohmann::json::array();
  int converged = 0;
  int consistent = 0;
  for (int i = 0; i < instances; ++i) {
    const Index d = pick(rng, 2, 3);
    const Index k = pick(rng, d, d + 2);
    const RealVector a = positive_norms(k, rng);
    const HermitianMatrix s = samplers::random_psd_trace(d, pick_real(rng, 1.0, 6.0), rng);
    const FodResult r = fod_descent(s, a, rng(), opts);
    nlohmann::json run{{"d", d}, {"k", k}, {"grad_norm", r.grad_norm}, {"converged", r.converged}};
    if (r.grad_norm < 1e-8) {
      ++converged;
      const auto rep = structure_check_local(norm, s, r.frame, 1e-5);
      if (rep.consistent()) ++consistent;
      run["structure"] = rep.consistent() ? "consistent_with_local_min"
                                          : "violates:" + to_string(rep.witness->failed);
    }
    runs.push_back(run);
  }
  return {{"norm", norm.to_string()},
          {"runs", runs},
          {"converged", converged},
          {"consistent", consistent}};
}

}  // namespace

SuiteScale parse_suite_scale(std::string_view text) {
  if (text == "small") return SuiteScale::small;
  if (text == "medium") return SuiteScale::medium;
  throw PreconditionError("unknown scale '" + std::string(text) + "' (small|medium)");
}

std::string to_string(SuiteScale s) { return s == SuiteScale::small ? "small" : "medium"; }

bool SuiteSummary::all_passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyOutcome& p) { return p.passed == p.instances; });
}

SuiteSummary property_suite(std::uint64_t seed, SuiteScale scale) {
  const int factor = scale == SuiteScale::medium ? 10 : 1;
  SuiteSummary summary;
  summary.seed = seed;
  summary.scale = scale;
  std::uint64_t stream = 0;
  for (const auto& prop : properties()) {
    Rng rng(seed * 1000003ULL + stream++);
    Tally tally;
    tally.out.name = prop.name;
    prop.run(tally, rng, prop.base_count * factor);
    summary.properties.push_back(tally.out);
  }
  Rng rng(seed * 1000003ULL + stream);
  summary.findings = schatten4_findings(rng, 5 * factor);
  return summary;
}

nlohmann::json to_json(const SuiteSummary& s) {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : s.properties) {
    props.push_back({{"name", p.name},
                     {"instances", p.instances},
                     {"passed", p.passed},
                     {"worst_margin", p.worst_margin}});
  }
  return {{"schema", io::kSchemaVersion},
          {"seed", s.seed},
          {"scale", to_string(s.scale)},
          {"all_passed", s.all_passed()},
          {"properties", props},
          {"findings", s.findings}};
}

}  // namespace lidskii
