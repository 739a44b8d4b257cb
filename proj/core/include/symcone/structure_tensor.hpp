#pragma once

#include <Eigen/Dense>

#include <vector>

namespace symcone {

/// Multiplication table of a finite dimensional commutative algebra:
/// (x o y)_k = sum_ij T(i, j, k) x_i y_j.
///
/// The basis is assumed orthonormal for the algebra's trace form, so the
/// Euclidean dot product of coordinates is the inner product.
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(int dim);

  int dim() const { return dim_; }

  double operator()(int i, int j, int k) const {
    return data_[index(i, j, k)];
  }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }

  Eigen::VectorXd product(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) const;

  /// Matrix of y -> x o y.
  Eigen::MatrixXd multiplication_operator(const Eigen::VectorXd& x) const;

  /// max |T(i,j,k) - T(j,i,k)|.
  double commutativity_defect() const;
  /// max |<x o y, z> - <y, x o z>| over basis vectors, i.e. how far every
  /// multiplication operator is from being symmetric.
  double associativity_defect() const;
  double max_abs() const;

  /// Solves e o x = x for all x in the least-squares sense; returns the
  /// identity and writes the relative residual.
  Eigen::VectorXd identity(double* residual = nullptr) const;

  /// Throws InputError when the commutativity, form-associativity or identity
  /// invariants fail at relative tolerance `tol`.
  void validate(double tol = 1e-10) const;

  bool operator==(const StructureTensor& other) const = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }

  int dim_ = 0;
  std::vector<double> data_;
};

}  // namespace symcone
