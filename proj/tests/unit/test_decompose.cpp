#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "symcone/barrier.hpp"
#include "symcone/decompose.hpp"
#include "symcone/errors.hpp"
#include "symcone/sampling.hpp"
#include "test_util.hpp"

namespace symcone {
namespace {

using testing::near;
using testing::vec;

using Signature = std::vector<std::pair<int, int>>;

Signature signature(const DecompositionResult& d) {
  Signature out;
  for (const DecomposedBlock& b : d.blocks) out.emplace_back(b.dim, b.rank);
  return out;
}

void expect_valid(const StructureTensor& t, const DecompositionResult& d) {
  int total = 0;
  Eigen::MatrixXd stacked(t.dim(), 0);
  for (const DecomposedBlock& b : d.blocks) {
    total += b.dim;
    Eigen::MatrixXd next(t.dim(), stacked.cols() + b.dim);
    next << stacked, b.basis;
    stacked = next;
  }
  EXPECT_EQ(total, t.dim());
  EXPECT_TRUE(near(stacked.transpose() * stacked, Eigen::MatrixXd::Identity(total, total), 1e-9));
  EXPECT_LE(d.closure_residual, 1e-8);
  EXPECT_LE(block_closure_residual(t, d), 1e-8);
}

/// Barrier of `b` viewed in the scrambled coordinates y = rotation * x_orthonormal.
BarrierFunction scrambled_oracle(const SelfScaledBarrier& b, const Eigen::MatrixXd& rotation) {
  return [b, rotation](const Eigen::VectorXd& y) {
    const Element x = from_orthonormal(b.cone(), rotation.transpose() * y);
    if (!is_interior(x)) return std::numeric_limits<double>::infinity();
    return b.value(x);
  };
}

TEST(StructureConstants, OrthantIsDiagonal) {
  const StructureTensor t = structure_constants(Algebra::orthant(2));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) EXPECT_EQ(t(i, j, k), i == j && j == k ? 1.0 : 0.0);
    }
  }
  EXPECT_EQ(structure_constants(Algebra::direct_sum({Algebra::orthant(1), Algebra::orthant(1)})), t);
}

TEST(StructureConstants, ProductMatchesAlgebra) {
  Rng rng(1);
  for (const auto& [name, a] : testing::property_algebras()) {
    const StructureTensor t = structure_constants(a);
    EXPECT_NO_THROW(t.validate()) << name;
    for (int trial = 0; trial < 10; ++trial) {
      const Element x = random_element(a, rng), y = random_element(a, rng);
      ASSERT_TRUE(near(t.product(to_orthonormal(x), to_orthonormal(y)), to_orthonormal(jordan_product(x, y)),
                       1e-12 * (1.0 + x.coords.norm() * y.coords.norm())))
          << name;
    }
  }
}

TEST(StructureConstants, OrthonormalRoundTrip) {
  Rng rng(2);
  const Algebra a = Algebra::lorentz(3);
  const Element x = random_element(a, rng);
  EXPECT_TRUE(near(from_orthonormal(a, to_orthonormal(x)).coords, x.coords, 1e-15));
  EXPECT_NEAR(to_orthonormal(x).squaredNorm(), inner(x, x), 1e-12);
}

TEST(Scramble, IdentityAndPermutation) {
  const StructureTensor t = structure_constants(Algebra::direct_sum({Algebra::lorentz(2), Algebra::orthant(1)}));
  EXPECT_TRUE(conjugate(t, Eigen::MatrixXd::Identity(4, 4)) == t);
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(4, 4);
  const int sigma[4] = {2, 0, 3, 1};  // new index sigma[i] holds old index i
  for (int i = 0; i < 4; ++i) perm(sigma[i], i) = 1.0;
  const StructureTensor p = conjugate(t, perm);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) ASSERT_NEAR(p(sigma[i], sigma[j], sigma[k]), t(i, j, k), 1e-15);
    }
  }
}

TEST(Scramble, PreservesOperatorSpectra) {
  const StructureTensor t = structure_constants(Algebra::direct_sum({Algebra::lorentz(2), Algebra::orthant(1)}));
  const Scrambled s = scramble(t, 7);
  EXPECT_TRUE(near(s.rotation.transpose() * s.rotation, Eigen::MatrixXd::Identity(4, 4), 1e-13));
  EXPECT_NO_THROW(s.tensor.validate());
  Rng rng(3);
  const Eigen::VectorXd x = random_gaussian(4, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> before(t.multiplication_operator(x));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> after(s.tensor.multiplication_operator(s.rotation * x));
  EXPECT_TRUE(near(before.eigenvalues(), after.eigenvalues(), 1e-12));
  EXPECT_GT(s.tensor.multiplication_operator(Eigen::VectorXd::Unit(4, 0)).cwiseAbs().minCoeff(), 0.0);
}

TEST(FamilyGuessNames, RoundTrip) {
  for (FamilyGuess g : {FamilyGuess::RankOne, FamilyGuess::Lorentz, FamilyGuess::SymPSD, FamilyGuess::Unknown}) {
    EXPECT_EQ(family_guess_from_string(to_string(g)), g);
  }
  EXPECT_EQ(to_string(FamilyGuess::RankOne), "rank-1");
  EXPECT_THROW(family_guess_from_string("octonion"), InputError);
}

TEST(Split, SymPsd2IsOneBlock) {
  const StructureTensor t = structure_constants(Algebra::sym_psd(2));
  const DecompositionResult d = split_irreducible(t);
  EXPECT_EQ(signature(d), (Signature{{3, 2}}));
  EXPECT_TRUE(d.blocks[0].guess == FamilyGuess::Lorentz || d.blocks[0].guess == FamilyGuess::SymPSD);
  expect_valid(t, d);
}

TEST(Split, ScrambledLorentzPlusOrthant) {
  const StructureTensor t = structure_constants(Algebra::direct_sum({Algebra::lorentz(3), Algebra::orthant(2)}));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Scrambled s = scramble(t, seed);
    const DecompositionResult d = split_irreducible(s.tensor, SplitOptions{.seed = seed});
    EXPECT_EQ(signature(d), (Signature{{4, 2}, {1, 1}, {1, 1}}));
    EXPECT_EQ(d.blocks[0].guess, FamilyGuess::Lorentz);
    EXPECT_EQ(d.blocks[1].guess, FamilyGuess::RankOne);
    expect_valid(s.tensor, d);
  }
}

TEST(Split, OrthantSplitsIntoAxes) {
  const StructureTensor t = structure_constants(Algebra::orthant(3));
  const DecompositionResult d = split_irreducible(t);
  EXPECT_EQ(signature(d), (Signature{{1, 1}, {1, 1}, {1, 1}}));
  // Sorted by leading coordinate once dim and rank tie.
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(near(d.blocks[i].basis, Eigen::VectorXd::Unit(3, i), 1e-12));
}

TEST(Split, SymPsd3GuessedAsSymPsd) {
  const Scrambled s = scramble(structure_constants(Algebra::sym_psd(3)), 4);
  const DecompositionResult d = split_irreducible(s.tensor);
  EXPECT_EQ(signature(d), (Signature{{6, 3}}));
  EXPECT_EQ(d.blocks[0].guess, FamilyGuess::SymPSD);
}

TEST(Split, UniqueAcrossScramblings) {
  const StructureTensor t =
      structure_constants(Algebra::direct_sum({Algebra::lorentz(3), Algebra::sym_psd(2), Algebra::orthant(2)}));
  const Signature expected{{4, 2}, {3, 2}, {1, 1}, {1, 1}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scrambled s = scramble(t, 1000 + seed);
    const DecompositionResult d = split_irreducible(s.tensor, SplitOptions{.seed = seed});
    ASSERT_EQ(signature(d), expected) << seed;
    ASSERT_LE(d.closure_residual, 1e-8) << seed;
  }
}

TEST(Split, DeterministicForFixedSeed) {
  const Scrambled s = scramble(structure_constants(Algebra::direct_sum({Algebra::lorentz(2), Algebra::orthant(2)})), 5);
  const DecompositionResult a = split_irreducible(s.tensor, SplitOptions{.seed = 9});
  const DecompositionResult b = split_irreducible(s.tensor, SplitOptions{.seed = 9});
  ASSERT_EQ(a.blocks.size(), b.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) EXPECT_TRUE(near(a.blocks[i].basis, b.blocks[i].basis, 0.0));
}

TEST(Split, RejectsInvalidTensor) {
  StructureTensor t(2);
  t(0, 0, 0) = 1.0;
  t(0, 1, 1) = 1.0;
  t(1, 1, 1) = 1.0;  // T(1,0,1) missing: not commutative
  EXPECT_THROW(split_irreducible(t), InputError);
}

TEST(Split, FrameVectorsLieInSingleBlocks) {
  const Algebra original = Algebra::direct_sum({Algebra::lorentz(2), Algebra::sym_psd(2), Algebra::orthant(1)});
  const Scrambled s = scramble(structure_constants(original), 12);
  const DecompositionResult d = split_irreducible(s.tensor);
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Element x = random_interior(original, rng);
    const Element scrambled(Algebra::custom(s.tensor), s.rotation * to_orthonormal(x));
    for (const Element& f : spectral_decompose(scrambled).frame) {
      double best = 0.0;
      for (const DecomposedBlock& b : d.blocks) best = std::max(best, (b.basis.transpose() * f.coords).norm());
      ASSERT_NEAR(best, f.coords.norm(), 1e-7);
    }
  }
}

TEST(Split, BlockAlgebrasHaveRecoveredRanks) {
  const Scrambled s = scramble(structure_constants(Algebra::direct_sum({Algebra::sym_psd(3), Algebra::lorentz(1)})), 3);
  const DecompositionResult d = split_irreducible(s.tensor);
  const std::vector<Algebra> algebras = block_algebras(s.tensor, d);
  ASSERT_EQ(algebras.size(), d.blocks.size());
  for (std::size_t i = 0; i < algebras.size(); ++i) {
    EXPECT_EQ(algebras[i].rank(), d.blocks[i].rank);
    EXPECT_EQ(algebras[i].dim(), d.blocks[i].dim);
    EXPECT_NO_THROW(block_tensor(s.tensor, d.blocks[i]).validate());
  }
}

TEST(Identify, StandardOrthant) {
  const SelfScaledBarrier b = SelfScaledBarrier::standard(Algebra::orthant(3));
  const StructureTensor t = structure_constants(b.cone());
  const DecompositionResult d = split_irreducible(t);
  const IdentifiedBarrier id = identify_barrier_weights(scrambled_oracle(b, Eigen::MatrixXd::Identity(3, 3)), d, t);
  EXPECT_NEAR(id.offset, 0.0, 1e-9);
  ASSERT_EQ(id.weights.size(), 3u);
  for (double c : id.weights) EXPECT_NEAR(c, 1.0, 1e-9);
}

TEST(Identify, WeightedScrambled) {
  const SelfScaledBarrier b(Algebra::direct_sum({Algebra::lorentz(3), Algebra::orthant(1)}), {2.0, 1.0}, 0.75);
  const Scrambled s = scramble(structure_constants(b.cone()), 21);
  const DecompositionResult d = split_irreducible(s.tensor);
  const IdentifiedBarrier id = identify_barrier_weights(scrambled_oracle(b, s.rotation), d, s.tensor);
  ASSERT_EQ(id.weights.size(), 2u);
  EXPECT_NEAR(id.weights[0], 2.0, 1e-6);
  EXPECT_NEAR(id.weights[1], 1.0, 1e-6);
  EXPECT_NEAR(id.offset, 0.75, 1e-6);
  EXPECT_NEAR(id.nu_fitted, b.nu(), 1e-6);
  EXPECT_NEAR(id.nu_measured, id.nu_fitted, 1e-4);
}

TEST(Identify, RoundTripAndBarrierDecomposition) {
  const Algebra cone = Algebra::direct_sum({Algebra::sym_psd(2), Algebra::lorentz(3), Algebra::orthant(2)});
  const SelfScaledBarrier b(cone, {3.0, 1.25, 1.0, 2.0}, -0.4);
  const Scrambled s = scramble(structure_constants(cone), 8);
  const DecompositionResult d = split_irreducible(s.tensor);
  const BarrierFunction f = scrambled_oracle(b, s.rotation);
  const IdentifiedBarrier id = identify_barrier_weights(f, d, s.tensor);
  EXPECT_NEAR(id.offset, -0.4, 1e-6);
  std::vector<double> got = id.weights, want = b.weights();
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-6);

  const std::vector<Algebra> algebras = block_algebras(s.tensor, d);
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd y = s.rotation * to_orthonormal(random_interior(cone, rng));
    ASSERT_NEAR(recovered_barrier_value(algebras, d, id, y), f(y), 1e-7 * (1.0 + std::abs(f(y))));
  }
}

TEST(Identify, GradientHasBlockStructure) {
  const Algebra cone = Algebra::direct_sum({Algebra::lorentz(2), Algebra::orthant(1)});
  const SelfScaledBarrier b(cone, {2.0, 1.0});
  const Scrambled s = scramble(structure_constants(cone), 5);
  const DecompositionResult d = split_irreducible(s.tensor);
  const BarrierFunction f = scrambled_oracle(b, s.rotation);
  auto fd_gradient = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd g(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const Eigen::VectorXd h = 1e-6 * Eigen::VectorXd::Unit(y.size(), i);
      g(i) = (f(y + h) - f(y - h)) / 2e-6;
    }
    return g;
  };
  Rng rng(6);
  const Eigen::VectorXd y = s.rotation * to_orthonormal(random_interior(cone, rng));
  const Eigen::MatrixXd& b0 = d.blocks[0].basis;
  const Eigen::MatrixXd& b1 = d.blocks[1].basis;
  const Eigen::VectorXd before = b0.transpose() * fd_gradient(y);
  // Move only the second block's component.
  const Eigen::VectorXd moved = y + b1 * (0.3 * (b1.transpose() * y));
  const Eigen::VectorXd after = b0.transpose() * fd_gradient(moved);
  EXPECT_LE((after - before).norm(), 1e-6 * before.norm());
}

TEST(Identify, NonFiniteOracleRejected) {
  const StructureTensor t = structure_constants(Algebra::orthant(2));
  const DecompositionResult d = split_irreducible(t);
  EXPECT_THROW(identify_barrier_weights([](const Eigen::VectorXd&) { return std::nan(""); }, d, t), InputError);
}

}  // namespace
}  // namespace symcone
