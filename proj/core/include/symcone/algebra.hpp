#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

#include "symcone/structure_tensor.hpp"

namespace symcone {

enum class Family { Orthant, Lorentz, SymPSD, DirectSum, Custom };

std::string to_string(Family family);

/// A summand of the algebra that is not itself a direct sum, with its
/// position inside the carrier coordinates.
struct LeafInfo {
  Family family = Family::Orthant;
  int param = 0;        // n for Orthant/Lorentz, k for SymPSD, 0 for Custom
  int offset = 0;       // first carrier coordinate
  int dim = 0;
  int rank = 0;
  int first_block = 0;  // index of the first irreducible block it owns
  std::shared_ptr<const StructureTensor> tensor;  // Custom only
  std::shared_ptr<const Eigen::VectorXd> unit;    // Custom only
};

/// An irreducible summand as used for barrier weights. An Orthant(n) leaf owns
/// n one-dimensional blocks; every other leaf owns exactly one block.
struct IrreducibleBlock {
  int leaf = 0;
  int offset = 0;
  int dim = 0;
  int rank = 0;
};

/// A Euclidean Jordan algebra: one of the supported families or a finite
/// direct sum of them. Immutable and cheap to copy.
///
/// Coordinates:
///  - Orthant(n): the n components.
///  - Lorentz(n): (tau, xbar) with xbar in R^n; trace form is 2 * dot.
///  - SymPSD(k): svec, the upper triangle taken row by row with off-diagonal
///    entries scaled by sqrt(2); trace form is the dot product.
///  - Custom: coordinates of a trace-orthonormal basis.
class Algebra {
 public:
  static Algebra orthant(int n);
  /// Carrier dimension n + 1, rank 2.
  static Algebra lorentz(int n);
  /// Carrier dimension k(k+1)/2, rank k.
  static Algebra sym_psd(int k);
  static Algebra direct_sum(std::vector<Algebra> summands);
  static Algebra custom(StructureTensor tensor);

  Family family() const;
  int param() const;
  int dim() const;
  int rank() const;

  const std::vector<Algebra>& summands() const;
  const StructureTensor& tensor() const;

  const std::vector<LeafInfo>& leaves() const;
  const std::vector<IrreducibleBlock>& irreducible_blocks() const;
  /// Algebra consisting of the single leaf `i`.
  Algebra leaf_algebra(int i) const;

  /// Per-coordinate weights g with <x, y> = sum_i g_i x_i y_i.
  const Eigen::VectorXd& metric() const;

  std::vector<std::string> basis_labels() const;
  /// Compact descriptor, e.g. "sum(lorentz:3,orthant:2)".
  std::string to_string() const;

  bool operator==(const Algebra& other) const;
  bool operator!=(const Algebra& other) const { return !(*this == other); }

 private:
  struct Node;
  explicit Algebra(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// A point of the carrier space of `algebra`.
struct Element {
  Algebra algebra;
  Eigen::VectorXd coords;

  Element(Algebra alg, Eigen::VectorXd c);

  int dim() const { return static_cast<int>(coords.size()); }
};

Element operator+(const Element& a, const Element& b);
Element operator-(const Element& a, const Element& b);
Element operator-(const Element& a);
Element operator*(double t, const Element& a);
Element operator*(const Element& a, double t);

Element zero(const Algebra& algebra);
Element identity(const Algebra& algebra);
Element make_element(const Algebra& algebra, const std::vector<double>& coords);

/// Throws DimensionError when a and b are not in the same algebra.
void require_same_algebra(const Element& a, const Element& b);

}  // namespace symcone
