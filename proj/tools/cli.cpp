#include "cli.hpp"

#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lidskii/eig_orbit.hpp"
#include "lidskii/frames.hpp"
#include "lidskii/io.hpp"
#include "lidskii/property_suite.hpp"
#include "lidskii/sv_orbit.hpp"

namespace lidskii::cli {

namespace {

using io::Json;

RealVector parse_list(const std::string& text, const char* flag) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw io::FormatError(std::string(flag) + ": cannot parse '" + item + "' as a number");
    }
  }
  if (xs.empty()) throw io::FormatError(std::string(flag) + ": empty list");
  return Eigen::Map<RealVector>(xs.data(), static_cast<Index>(xs.size()));
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::certified_global:
      return kOk;
    case Verdict::not_local_min:
      return kNegative;
    case Verdict::inconclusive:
      return kInconclusive;
  }
  return kInconclusive;
}

Matrix load_matrix(const std::string& path, const std::string& name) {
  return io::matrix_from_json(io::read_json_file(path), name);
}

HermitianMatrix load_hermitian(const std::string& path, const std::string& name) {
  return io::hermitian_from_json(io::read_json_file(path), name);
}

struct Options {
  std::string s_path, g_path, a_path, b_path;
  std::string norm = "frobenius";
  std::string list_a, list_mu, list_s, list_lambda;
  std::string scale = "small";
  std::string out = "-";
  std::optional<double> tol;
  double t = 0.0;
  std::uint64_t seed = 0;
  int restarts = 8;
};

Json with_inputs(Json report, const Options& o, const NormSpec& n) {
  report["norm"] = io::to_json(n);
  report["tol"] = o.tol.value_or(tol::kNullSpace);
  report["seed"] = o.seed;
  return report;
}

int emit(const Options& o, const Json& report, int code) {
  io::write_json_file(o.out, report);
  return code;
}

}  // namespace

unsigned thread_budget() {
  if (const char* env = std::getenv("LIDSKII_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, const char* const* argv, std::ostream& err) {
  CLI::App app{"Lidskii-type inequalities: certification, joint SVD and frame design"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub, bool with_norm) {
    sub->add_option("--out", o.out, "Report path ('-' for stdout)");
    if (with_norm) sub->add_option("--norm", o.norm, "frobenius | schatten:P | kyfan:K | spectral");
  };

  auto* eig = app.add_subcommand("certify-eig", "Certify G0 on its unitary orbit");
  eig->add_option("--S", o.s_path, "Hermitian S (matrix JSON)")->required();
  eig->add_option("--G0", o.g_path, "Hermitian G0 (matrix JSON)")->required();
  eig->add_option("--mu", o.list_mu, "Expected spectrum of G0, comma separated");
  eig->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  eig->add_option("--seed", o.seed);
  common(eig, true);

  auto* sv = app.add_subcommand("certify-sv", "Certify B on its singular-value orbit");
  sv->add_option("--A", o.a_path)->required();
  sv->add_option("--B", o.b_path)->required();
  sv->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  sv->add_option("--seed", o.seed);
  common(sv, true);

  auto* jsvd = app.add_subcommand("joint-svd", "Simultaneous SVD of A and B");
  jsvd->add_option("--A", o.a_path)->required();
  jsvd->add_option("--B", o.b_path)->required();
  jsvd->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  common(jsvd, false);

  auto* opt = app.add_subcommand("fod-optimize", "Projected gradient descent for the G-FOD");
  opt->add_option("--S", o.s_path)->required();
  opt->add_option("--a", o.list_a, "Squared norms, comma separated")->required();
  opt->add_option("--restarts", o.restarts)->check(CLI::PositiveNumber);
  opt->add_option("--seed", o.seed);
  opt->add_option("--tol", o.tol, "Structure check tolerance")->check(CLI::PositiveNumber);
  common(opt, true);

  auto* check = app.add_subcommand("fod-check", "Local-minimizer structure of a frame");
  check->add_option("--S", o.s_path)->required();
  check->add_option("--G", o.g_path, "Frame JSON")->required();
  check->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  common(check, true);

  auto* wf = app.add_subcommand("water-fill", "Solve sum (lambda_i - c)^+ = t");
  wf->add_option("--lambda", o.list_lambda)->required();
  wf->add_option("--t", o.t)->required();
  common(wf, false);

  auto* suite = app.add_subcommand("property-suite", "Run the fuzzed invariants");
  suite->add_option("--seed", o.seed);
  suite->add_option("--scale", o.scale)->check(CLI::IsMember({"small", "medium"}));
  common(suite, false);

  auto* min_eig = app.add_subcommand("min-eig", "Global minimizer of N(S - G) on O_mu");
  min_eig->add_option("--S", o.s_path)->required();
  min_eig->add_option("--mu", o.list_mu)->required();
  common(min_eig, false);

  auto* min_sv = app.add_subcommand("min-sv", "Global minimizer of N(A - C) on V_s");
  min_sv->add_option("--A", o.a_path)->required();
  min_sv->add_option("--s", o.list_s)->required();
  common(min_sv, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*eig) {
      const NormSpec n = NormSpec::parse(o.norm);
      const HermitianMatrix s = load_hermitian(o.s_path, "S");
      const HermitianMatrix g0 = load_hermitian(o.g_path, "G0");
      if (!o.list_mu.empty()) {
        const RealVector mu = SpectrumVector::sorted(parse_list(o.list_mu, "--mu")).values();
        const RealVector got = eigenvalues(g0).values();
        if (mu.size() != got.size() ||
            (mu - got).cwiseAbs().maxCoeff() > tol::kEig * (1.0 + got.cwiseAbs().maxCoeff())) {
          throw io::FormatError("--mu: does not match the spectrum of G0");
        }
      }
      const EigCertificate cert = certify_local_eig(n, s, g0, o.tol.value_or(tol::kNullSpace), o.seed);
      return emit(o, with_inputs(io::to_json(cert), o, n), verdict_code(cert.verdict));
    }
    if (*sv) {
      const NormSpec n = NormSpec::parse(o.norm);
      const Matrix a = load_matrix(o.a_path, "A");
      const Matrix b = load_matrix(o.b_path, "B");
      const SvCertificate cert = certify_local_sv(n, a, b, o.tol.value_or(tol::kNullSpace), o.seed);
      return emit(o, with_inputs(io::to_json(cert), o, n), verdict_code(cert.verdict));
    }
    if (*jsvd) {
      const Matrix a = load_matrix(o.a_path, "A");
      const Matrix b = load_matrix(o.b_path, "B");
      try {
        Json report = io::to_json(joint_svd(a, b, o.tol.value_or(tol::kNullSpace)));
        report["status"] = "success";
        return emit(o, report, kOk);
      } catch (const PreconditionError& e) {
        return emit(o,
                    Json{{"schema", io::kSchemaVersion},
                         {"status", "hypothesis_failed"},
                         {"reason", e.what()}},
                    kNegative);
      }
    }
    if (*opt) {
      const NormSpec n = NormSpec::parse(o.norm);
      const HermitianMatrix s = load_hermitian(o.s_path, "S");
      const RealVector a = parse_list(o.list_a, "--a");
      FodOptions fo;
      fo.norm = n;
      fo.trace_stride = 100;
      const FodOptimizeResult r = fod_optimize(s, a, o.restarts, o.seed, fo, thread_budget());
      const double check_tol = o.tol.value_or(1e-6);
      const FodStructureReport rep = structure_check_local(n, s, r.best.frame, check_tol);
      Json report{{"schema", io::kSchemaVersion},
                  {"best", io::to_json(r.best)},
                  {"best_restart", r.best_restart},
                  {"restart_objectives", r.restart_objectives},
                  {"restart_converged", r.restart_converged},
                  {"structure", io::to_json(rep)},
                  {"naive_lower_bound", io::to_json(naive_lower_bound(n, s, a.sum()))}};
      report = with_inputs(report, o, n);
      report["tol"] = check_tol;
      report["restarts"] = o.restarts;
      return emit(o, report, rep.consistent() ? kOk : kNegative);
    }
    if (*check) {
      const NormSpec n = NormSpec::parse(o.norm);
      const HermitianMatrix s = load_hermitian(o.s_path, "S");
      const FrameSequence g = io::frame_from_json(io::read_json_file(o.g_path), "G");
      const double check_tol = o.tol.value_or(1e-6);
      const FodStructureReport rep = structure_check_local(n, s, g, check_tol);
      Json report = io::to_json(rep);
      report["norm"] = io::to_json(n);
      report["tol"] = check_tol;
      report["naive_lower_bound"] = naive_lower_bound(n, s, g.norms().sum()).value;
      if (g.size() >= g.dim() && n.strictly_convex()) {
        report["special_case"] = io::to_json(special_case_certify(n, s, g, check_tol));
      } else {
        report["special_case"] = nullptr;
      }
      return emit(o, report, rep.consistent() ? kOk : kNegative);
    }
    if (*wf) {
      const SpectrumVector lam = SpectrumVector::sorted(parse_list(o.list_lambda, "--lambda"));
      Json report = io::to_json(water_fill(lam, o.t));
      report["t"] = o.t;
      report["lambda"] = io::to_json(lam.values());
      return emit(o, report, kOk);
    }
    if (*suite) {
      const SuiteSummary summary = property_suite(o.seed, parse_suite_scale(o.scale));
      return emit(o, to_json(summary), summary.all_passed() ? kOk : kNegative);
    }
    if (*min_eig) {
      const HermitianMatrix s = load_hermitian(o.s_path, "S");
      const SpectrumVector mu = SpectrumVector::sorted(parse_list(o.list_mu, "--mu"));
      Json report{{"schema", io::kSchemaVersion},
                  {"minimizer", io::to_json(global_minimizer_eig(s, mu).matrix())}};
      return emit(o, report, kOk);
    }
    if (*min_sv) {
      const Matrix a = load_matrix(o.a_path, "A");
      const SpectrumVector s = SpectrumVector::sorted(parse_list(o.list_s, "--s"));
      Json report{{"schema", io::kSchemaVersion},
                  {"minimizer", io::to_json(global_minimizer_sv(a, s))}};
      return emit(o, report, kOk);
    }
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace lidskii::cli
