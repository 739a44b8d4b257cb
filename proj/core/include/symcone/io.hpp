#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "symcone/algebra.hpp"
#include "symcone/decompose.hpp"
#include "symcone/ipm.hpp"
#include "symcone/verification.hpp"

namespace symcone::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Descriptor tree: {"family": "orthant"|"lorentz"|"sympsd", "param": n},
/// {"family": "sum", "children": [...]} or {"family": "custom", "tensor": {...}}.
Json algebra_to_json(const Algebra& algebra);
Algebra algebra_from_json(const Json& j, const std::string& where = "cone");

/// Compact text form: "orthant:3", "lorentz:2", "sympsd:3",
/// "sum(orthant:2, lorentz:3)". Sums nest.
Algebra parse_cone_spec(const std::string& text);

/// {"schema": 1, "kind": "structure_tensor", "dim": n, "T": [[[...]]]}.
Json tensor_to_json(const StructureTensor& t);
/// Checks shape only; algebraic validity is left to StructureTensor::validate.
StructureTensor tensor_from_json(const Json& j);

struct ProblemFile {
  Algebra cone;
  std::vector<double> weights;
  double offset = 0.0;
  Eigen::MatrixXd l;  // columns span L
  Eigen::VectorXd x0;
  Eigen::VectorXd s0;

  SelfScaledBarrier barrier() const;
  /// Builds and validates the conic problem (InputError on bad x0/s0/L).
  ConicProblem problem() const;
};

Json problem_to_json(const ProblemFile& p);
ProblemFile problem_from_json(const Json& j);

Json solution_to_json(const Solution& s);
Solution solution_from_json(const Json& j);

Json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const Json& j);

/// Bases are stored as row-major nested arrays (n rows, dim columns).
Json decomposition_to_json(const DecompositionResult& d);
DecompositionResult decomposition_from_json(const Json& j);

/// Parses a file; InputError carries the path and the parser's line/column.
Json read_json_file(const std::string& path);

}  // namespace symcone::io
