#include "lidskii/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

namespace lidskii::io {

namespace {

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) throw FormatError(field + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(field + ": missing \"" + key + "\"");
  return *it;
}

Index read_size(const Json& j, const char* key, const std::string& field) {
  const Json& v = require(j, key, field);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FormatError(field + "." + key + ": expected a non-negative integer");
  }
  return static_cast<Index>(v.get<long long>());
}

std::vector<double> read_numbers(const Json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw FormatError(field + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(j[i].get<double>());
  }
  return out;
}

Json optional_index(const std::optional<Index>& i) {
  return i ? Json(*i) : Json(nullptr);
}

Json samples_json(const std::vector<CurveSample>& samples) {
  Json arr = Json::array();
  for (const auto& s : samples) arr.push_back({s.t, s.value});
  return arr;
}

}  // namespace

Json to_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  const Index rows = read_size(j, "rows", field);
  const Index cols = read_size(j, "cols", field);
  const auto re = read_numbers(require(j, "re", field), field + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = read_numbers(j["im"], field + ".im");
  const auto n = static_cast<std::size_t>(rows * cols);
  if (re.size() != n) {
    throw FormatError(field + ".re: expected " + std::to_string(n) + " entries, got " +
                      std::to_string(re.size()));
  }
  if (im.size() != n) {
    throw FormatError(field + ".im: expected " + std::to_string(n) + " entries, got " +
                      std::to_string(im.size()));
  }
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(r * cols + c);
      if (!std::isfinite(re[k]) || !std::isfinite(im[k])) {
        throw FormatError(field + ": non-finite entry at (" + std::to_string(r) + ", " +
                          std::to_string(c) + ")");
      }
      m(r, c) = Complex(re[k], im[k]);
    }
  }
  return m;
}

HermitianMatrix hermitian_from_json(const Json& j, const std::string& field) {
  const Matrix m = matrix_from_json(j, field);
  try {
    return HermitianMatrix(m);
  } catch (const PreconditionError& e) {
    throw FormatError(field + ": " + e.what());
  }
}

Json to_json(const RealVector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

RealVector real_vector_from_json(const Json& j, const std::string& field) {
  const auto xs = read_numbers(j, field);
  RealVector v(static_cast<Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<Index>(i)] = xs[i];
  return v;
}

Json to_json(const FrameSequence& g) {
  Json vectors = Json::array();
  for (Index i = 0; i < g.size(); ++i) vectors.push_back(to_json(Matrix(g.vectors().col(i))));
  return {{"d", g.dim()}, {"a", to_json(g.norms())}, {"vectors", vectors}};
}

FrameSequence frame_from_json(const Json& j, const std::string& field) {
  const Index d = read_size(j, "d", field);
  const RealVector a = real_vector_from_json(require(j, "a", field), field + ".a");
  const Json& vs = require(j, "vectors", field);
  if (!vs.is_array()) throw FormatError(field + ".vectors: expected an array");
  if (static_cast<Index>(vs.size()) != a.size()) {
    throw FormatError(field + ": " + std::to_string(vs.size()) + " vectors but " +
                      std::to_string(a.size()) + " norms");
  }
  Matrix g(d, a.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string name = field + ".vectors[" + std::to_string(i) + "]";
    const Matrix col = matrix_from_json(vs[i], name);
    if (col.rows() != d || col.cols() != 1) {
      throw FormatError(name + ": expected a " + std::to_string(d) + "x1 column");
    }
    g.col(static_cast<Index>(i)) = col.col(0);
  }
  try {
    return FrameSequence(g, a);
  } catch (const PreconditionError& e) {
    throw FormatError(field + ": " + e.what());
  }
}

Json to_json(const NormSpec& n) {
  switch (n.kind()) {
    case NormSpec::Kind::schatten:
      return {{"kind", "schatten"}, {"p", n.p()}};
    case NormSpec::Kind::kyfan:
      return {{"kind", "kyfan"}, {"k", n.k()}};
    case NormSpec::Kind::spectral:
      return {{"kind", "spectral"}};
    case NormSpec::Kind::frobenius:
      return {{"kind", "frobenius"}};
  }
  return {};
}

NormSpec norm_from_json(const Json& j, const std::string& field) {
  try {
    if (j.is_string()) return NormSpec::parse(j.get<std::string>());
    const Json& kind = require(j, "kind", field);
    if (!kind.is_string()) throw FormatError(field + ".kind: expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "schatten") {
      const Json& p = require(j, "p", field);
      if (p.is_string()) return NormSpec::parse("schatten:" + p.get<std::string>());
      if (!p.is_number()) throw FormatError(field + ".p: expected a number");
      return NormSpec::schatten(p.get<double>());
    }
    if (k == "kyfan") {
      const Json& kk = require(j, "k", field);
      if (!kk.is_number_integer()) throw FormatError(field + ".k: expected an integer");
      return NormSpec::kyfan(kk.get<int>());
    }
    return NormSpec::parse(k);
  } catch (const PreconditionError& e) {
    throw FormatError(field + ": " + e.what());
  }
}

Json to_json(const MajorizationVerdict& v) {
  return {{"holds", v.holds},
          {"strict", v.strict},
          {"first_violation_index", optional_index(v.first_violation_index)},
          {"margin", v.margin}};
}

Json to_json(const DescentCurve& c) {
  Json j{{"kind", to_string(c.kind)},
         {"index", optional_index(c.index)},
         {"t_max", c.t_max},
         {"verified_drop", c.verified_drop},
         {"samples", samples_json(c.samples)}};
  if (c.point && !c.samples.empty()) {
    const auto best = std::min_element(c.samples.begin(), c.samples.end(),
                                       [](const auto& x, const auto& y) { return x.value < y.value; });
    j["best_t"] = best->t;
    j["best_point"] = to_json(c.point(best->t));
  }
  return j;
}

Json to_json(const EigCertificate& c) {
  Json j{{"schema", kSchemaVersion},
         {"verdict", to_string(c.verdict)},
         {"phi", c.phi_value},
         {"commutator_residual", c.commutator_residual},
         {"lidskii_gap", c.lidskii_gap},
         {"alignment_ok", c.alignment_ok}};
  if (c.joint_basis) {
    j["joint_basis"] = to_json(c.joint_basis->matrix());
    j["lambda"] = to_json(c.lambda);
    j["nu"] = to_json(c.nu);
  }
  j["descent_witness"] = c.descent_witness ? to_json(*c.descent_witness) : Json(nullptr);
  return j;
}

Json to_json(const JointSVD& js) {
  return {{"schema", kSchemaVersion},
          {"u", to_json(js.u.matrix())},
          {"v", to_json(js.v.matrix())},
          {"alpha", to_json(js.alpha.values())},
          {"beta", to_json(js.beta)},
          {"residual_a", js.residual_a},
          {"residual_b", js.residual_b}};
}

Json to_json(const SvCertificate& c) {
  Json j{{"schema", kSchemaVersion},
         {"verdict", to_string(c.verdict)},
         {"psi", c.psi_value},
         {"residual_adjoint_left", c.residual_adjoint_left},
         {"residual_adjoint_right", c.residual_adjoint_right}};
  j["joint"] = c.joint ? to_json(*c.joint) : Json(nullptr);
  j["descent_witness"] = c.descent_witness ? to_json(*c.descent_witness) : Json(nullptr);
  return j;
}

Json to_json(const SvEqualityReport& r) {
  return {{"spectral_equality", r.spectral_equality},
          {"joint_svd_feasible", r.joint_svd_feasible},
          {"gap", r.gap}};
}

Json to_json(const WaterFill& w) {
  return {{"schema", kSchemaVersion}, {"c", w.level}, {"spectrum", to_json(w.spectrum.values())}};
}

Json to_json(const NaiveBound& b) {
  return {{"value", b.value}, {"level", b.level}, {"minimizer", to_json(b.minimizer.matrix())}};
}

Json to_json(const FodStructureReport& r) {
  Json partition = Json::array();
  for (const auto& cl : r.partition) {
    partition.push_back({{"c", cl.value},
                         {"members", cl.members},
                         {"span_dim", cl.span_dim},
                         {"independence_required", cl.independence_required},
                         {"independent", cl.independent}});
  }
  Json j{{"schema", kSchemaVersion},
         {"verdict", r.consistent() ? "consistent_with_local_min" : "violates_structure"},
         {"theta", r.theta_value},
         {"eigvec_residuals", r.eigvec_residuals},
         {"fitted_eigenvalues", to_json(r.fitted_eigenvalues)},
         {"commute_residual", r.commute_residual},
         {"lidskii_aligned", r.lidskii_aligned},
         {"alignment_gap", r.alignment_gap},
         {"partition", partition}};
  if (r.witness) {
    j["witness"] = {{"failed", to_string(r.witness->failed)},
                    {"index", optional_index(r.witness->index)},
                    {"value", r.witness->value}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const SpecialCaseReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"common_eigenvalue", r.common_eigenvalue ? Json(*r.common_eigenvalue) : Json(nullptr)},
          {"spectrum_gap", r.spectrum_gap},
          {"theta", r.theta_value},
          {"naive_bound", r.naive_bound}};
}

Json to_json(const FodResult& r, bool include_trace) {
  Json j{{"frame", to_json(r.frame)},
         {"converged", r.converged},
         {"objective", r.objective},
         {"grad_norm", r.grad_norm},
         {"iterations", r.iterations}};
  if (include_trace) {
    Json trace = Json::array();
    for (const auto& it : r.trace) {
      trace.push_back({{"iter", it.iteration},
                       {"objective", it.objective},
                       {"grad_norm", it.grad_norm},
                       {"step", it.step}});
    }
    j["trace"] = trace;
  }
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw FormatError(path + ": cannot open file for writing");
  out << j.dump(2) << '\n';
  if (!out) throw FormatError(path + ": write failed");
}

}  // namespace lidskii::io
