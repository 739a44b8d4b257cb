#pragma once

#include <Eigen/Dense>

#include <vector>

#include "symcone/algebra.hpp"
#include "symcone/structure_tensor.hpp"

namespace symcone::detail {

struct LeafSpectrum {
  Eigen::VectorXd values;              // descending
  std::vector<Eigen::VectorXd> frame;  // leaf coordinates
};

Eigen::VectorXd leaf_product(const LeafInfo& leaf, const Eigen::VectorXd& a,
                             const Eigen::VectorXd& b);
Eigen::MatrixXd leaf_multiplication(const LeafInfo& leaf, const Eigen::VectorXd& x);
Eigen::MatrixXd leaf_quadratic(const LeafInfo& leaf, const Eigen::VectorXd& x);
LeafSpectrum leaf_spectrum(const LeafInfo& leaf, const Eigen::VectorXd& x);

/// Spectral decomposition inside the subalgebra with identity `unit` (an
/// idempotent) of an element z of that subalgebra, for an algebra given by
/// structure constants in a trace-orthonormal basis. Distinct eigenvalues are
/// separated by a Krylov (Lanczos) sweep of L(z); idempotents of higher rank
/// are refined through their Peirce-1 subalgebras until primitive.
LeafSpectrum tensor_spectrum(const StructureTensor& t, const Eigen::VectorXd& unit,
                             const Eigen::VectorXd& z);

/// Number of primitive idempotents in a frame, found from a pseudo-random element.
int custom_rank(const StructureTensor& t, const Eigen::VectorXd& unit);

}  // namespace symcone::detail
