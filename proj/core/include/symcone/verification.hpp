#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symcone/barrier.hpp"

namespace symcone {

struct IdentityRecord {
  std::string tag;          // short equation tag, e.g. "ss-2"
  std::string description;  // the identity in words
  int trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct VerificationReport {
  std::vector<IdentityRecord> records;
  bool passed = true;
  std::uint64_t seed = 0;

  const IdentityRecord* find(const std::string& tag) const;
  /// Recomputes `passed` from the records.
  void finalize();
  /// Fixed-width table, one identity per line.
  std::string render() const;
};

/// Callback view of a barrier, so the suite can audit functions that are not
/// members of the classified family. `scaling_point` is optional; when absent
/// the scaling-point record is skipped.
struct BarrierOracle {
  Algebra cone;
  double nu = 0.0;
  Element unit;  // F-unit e
  std::function<double(const Element&)> value;
  std::function<Element(const Element&)> gradient;
  std::function<LinearOperator(const Element&)> hessian;
  std::function<double(const Element&)> dual_value;
  std::function<Element(const Element&)> dual_gradient;
  std::function<LinearOperator(const Element&)> dual_hessian;
  std::function<Element(const Element&, const Element&)> scaling_point;
};

BarrierOracle as_oracle(const SelfScaledBarrier& barrier);

/// F(x) + eps <q, x>, with the conjugate shifted accordingly. Not logarithmically
/// homogeneous unless eps = 0.
BarrierOracle with_linear_term(const BarrierOracle& oracle, const Element& q, double eps);

struct VerifyOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  double gradient_fd_tol = 1e-6;
  double hessian_fd_tol = 1e-4;
};

VerificationReport verify_self_scaled(const BarrierOracle& oracle, const VerifyOptions& options = {});
VerificationReport verify_self_scaled(const SelfScaledBarrier& barrier,
                                      const VerifyOptions& options = {});

/// Relative Frobenius distance ||a - b|| / max(||a||, ||b||, tiny).
double relative_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace symcone
