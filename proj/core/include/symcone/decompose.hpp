#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symcone/algebra.hpp"
#include "symcone/structure_tensor.hpp"

namespace symcone {

/// Structure constants of `algebra` in its canonical trace-orthonormal basis:
/// natural coordinates scaled by sqrt(metric).
StructureTensor structure_constants(const Algebra& algebra);

Eigen::VectorXd to_orthonormal(const Element& x);
Element from_orthonormal(const Algebra& algebra, const Eigen::VectorXd& y);

/// The tensor of the same algebra in coordinates y = q x, q orthogonal.
StructureTensor conjugate(const StructureTensor& t, const Eigen::MatrixXd& q);

struct Scrambled {
  StructureTensor tensor;
  Eigen::MatrixXd rotation;  // new coordinates = rotation * old coordinates
};

Scrambled scramble(const StructureTensor& t, std::uint64_t seed);

enum class FamilyGuess { RankOne, Lorentz, SymPSD, Unknown };

std::string to_string(FamilyGuess guess);
FamilyGuess family_guess_from_string(const std::string& text);

struct DecomposedBlock {
  Eigen::MatrixXd basis;  // n x dim, orthonormal columns spanning the ideal
  int dim = 0;
  int rank = 0;
  FamilyGuess guess = FamilyGuess::Unknown;
};

struct DecompositionResult {
  int dim = 0;
  std::vector<DecomposedBlock> blocks;
  double closure_residual = 0.0;        // product leakage out of each block
  double orthogonality_residual = 0.0;  // ||B^T B - I|| for the stacked bases
  int attempts = 0;                     // random commutant draws used
};

struct SplitOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int retry_budget = 8;
  double null_tol = 1e-9;   // singular values below null_tol * sigma_max span the commutant
  double ambiguous = 1e-6;  // singular values in (null_tol, ambiguous] * sigma_max are an error
  double gap_tol = 1e-6;    // eigenvalue clustering gap relative to ||M||
};

/// Minimal ideals of the algebra: eigenspaces of a random symmetric element of
/// the commutant of all multiplication operators, merged until product-closed.
/// Blocks are sorted by (dim, rank) descending, then by leading coordinate.
DecompositionResult split_irreducible(const StructureTensor& t, const SplitOptions& options = {});

/// Structure tensor of block `i` in the coordinates of its basis.
StructureTensor block_tensor(const StructureTensor& t, const DecomposedBlock& block);

/// One custom algebra per block.
std::vector<Algebra> block_algebras(const StructureTensor& t, const DecompositionResult& d);

/// Largest ||pi_j(a o b)|| over block basis vectors a, b of block i and j != i,
/// including the complement of all blocks.
double block_closure_residual(const StructureTensor& t, const DecompositionResult& d);

using BarrierFunction = std::function<double(const Eigen::VectorXd&)>;

struct IdentifiedBarrier {
  double offset = 0.0;
  std::vector<double> weights;
  std::vector<int> ranks;
  double nu_fitted = 0.0;    // sum c_i r_i
  double nu_measured = 0.0;  // <e, -F'(e)> by central differences
  double fit_residual = 0.0;
};

/// Fits F(e + (t - 1) f_i) = a - c_i r_i ln t at five log-spaced t per block.
/// Throws InputError if the oracle is not finite on the sampled rays.
IdentifiedBarrier identify_barrier_weights(const BarrierFunction& oracle,
                                           const DecompositionResult& d,
                                           const StructureTensor& t);

/// c0 - sum_i c_i ln det_i(B_i^T y) with the recovered blocks.
double recovered_barrier_value(const std::vector<Algebra>& blocks, const DecompositionResult& d,
                               const IdentifiedBarrier& barrier, const Eigen::VectorXd& y);

}  // namespace symcone
