#include "symcone/structure_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symcone/errors.hpp"

namespace symcone {

StructureTensor::StructureTensor(int dim) : dim_(dim) {
  if (dim < 1) throw InputError("structure tensor dimension must be >= 1");
  data_.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
}

Eigen::VectorXd StructureTensor::product(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw DimensionError("structure tensor product: operand length mismatch");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double xy = x(i) * y(j);
      if (xy == 0.0) continue;
      const double* row = &data_[index(i, j, 0)];
      for (int k = 0; k < dim_; ++k) out(k) += row[k] * xy;
    }
  }
  return out;
}

Eigen::MatrixXd StructureTensor::multiplication_operator(
    const Eigen::VectorXd& x) const {
  if (x.size() != dim_) {
    throw DimensionError("multiplication operator: operand length mismatch");
  }
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double* row = &data_[index(i, j, 0)];
      for (int k = 0; k < dim_; ++k) op(k, j) += row[k] * x(i);
    }
  }
  return op;
}

double StructureTensor::commutativity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        worst = std::max(worst, std::abs((*this)(i, j, k) - (*this)(j, i, k)));
  return worst;
}

double StructureTensor::associativity_defect() const {
  // <b_i o b_j, b_k> = <b_j, b_i o b_k>  <=>  T(i,j,k) = T(i,k,j)
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k)
        worst = std::max(worst, std::abs((*this)(i, j, k) - (*this)(i, k, j)));
  return worst;
}

double StructureTensor::max_abs() const {
  double worst = 0.0;
  for (double v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

Eigen::VectorXd StructureTensor::identity(double* residual) const {
  const int n = dim_;
  Eigen::MatrixXd a(n * n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) a(j * n + k, i) = (*this)(i, j, k);
      if (j == k) b(j * n + k) = 1.0;
    }
  }
  Eigen::VectorXd e = a.colPivHouseholderQr().solve(b);
  if (residual != nullptr) *residual = (a * e - b).norm() / b.norm();
  return e;
}

void StructureTensor::validate(double tol) const {
  if (dim_ < 1) throw InputError("structure tensor is empty");
  for (double v : data_) {
    if (!std::isfinite(v)) throw InputError("structure tensor has non-finite entries");
  }
  const double scale = std::max(1.0, max_abs());
  if (commutativity_defect() > tol * scale) {
    std::ostringstream msg;
    msg << "structure tensor is not commutative (defect " << commutativity_defect() << ")";
    throw InputError(msg.str());
  }
  if (associativity_defect() > tol * scale) {
    std::ostringstream msg;
    msg << "trace form is not associative in this basis (defect "
        << associativity_defect() << ")";
    throw InputError(msg.str());
  }
  double residual = 0.0;
  identity(&residual);
  if (!(residual <= std::max(tol, 1e-9) * 10.0)) {
    std::ostringstream msg;
    msg << "algebra has no identity element (residual " << residual << ")";
    throw InputError(msg.str());
  }
}

}  // namespace symcone
