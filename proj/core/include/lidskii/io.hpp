#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "lidskii/eig_orbit.hpp"
#include "lidskii/frames.hpp"
#include "lidskii/majorization.hpp"
#include "lidskii/sv_orbit.hpp"

namespace lidskii::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input; the message names the offending field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrices are {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& field = "matrix");
HermitianMatrix hermitian_from_json(const Json& j, const std::string& field = "matrix");

Json to_json(const RealVector& v);
RealVector real_vector_from_json(const Json& j, const std::string& field = "vector");

// {"d": d, "a": [...], "vectors": [matrix-format columns]}.
Json to_json(const FrameSequence& g);
FrameSequence frame_from_json(const Json& j, const std::string& field = "frame");

// {"kind": "schatten", "p": 3}; a bare string in NormSpec::parse syntax is
// also accepted on input.
Json to_json(const NormSpec& n);
NormSpec norm_from_json(const Json& j, const std::string& field = "norm");

Json to_json(const MajorizationVerdict& v);
Json to_json(const DescentCurve& c);
Json to_json(const EigCertificate& c);
Json to_json(const JointSVD& j);
Json to_json(const SvCertificate& c);
Json to_json(const SvEqualityReport& r);
Json to_json(const WaterFill& w);
Json to_json(const NaiveBound& b);
Json to_json(const FodStructureReport& r);
Json to_json(const SpecialCaseReport& r);
Json to_json(const FodResult& r, bool include_trace = true);

Json read_json_file(const std::string& path);
/// Writes `j` indented, followed by a newline. "-" means stdout.
void write_json_file(const std::string& path, const Json& j);

}  // namespace lidskii::io
