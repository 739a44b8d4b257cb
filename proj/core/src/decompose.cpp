#include "symcone/decompose.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "symcone/errors.hpp"
#include "symcone/jordan.hpp"
#include "symcone/sampling.hpp"

namespace symcone {

StructureTensor structure_constants(const Algebra& algebra) {
  const int n = algebra.dim();
  const Eigen::VectorXd scale = algebra.metric().cwiseSqrt();
  StructureTensor t(n);
  for (int i = 0; i < n; ++i) {
    const Element bi(algebra, Eigen::VectorXd::Unit(n, i) / scale(i));
    for (int j = i; j < n; ++j) {
      const Element bj(algebra, Eigen::VectorXd::Unit(n, j) / scale(j));
      const Eigen::VectorXd prod = jordan_product(bi, bj).coords.cwiseProduct(scale);
      for (int k = 0; k < n; ++k) {
        t(i, j, k) = prod(k);
        t(j, i, k) = prod(k);
      }
    }
  }
  return t;
}

Eigen::VectorXd to_orthonormal(const Element& x) {
  return x.coords.cwiseProduct(x.algebra.metric().cwiseSqrt());
}

Element from_orthonormal(const Algebra& algebra, const Eigen::VectorXd& y) {
  return Element(algebra, y.cwiseQuotient(algebra.metric().cwiseSqrt()));
}

StructureTensor conjugate(const StructureTensor& t, const Eigen::MatrixXd& q) {
  const int n = t.dim();
  if (q.rows() != n || q.cols() != n) throw DimensionError("conjugate: rotation size mismatch");
  // Three successive mode products, each O(n^4).
  std::vector<double> a(static_cast<std::size_t>(n) * n * n, 0.0);
  std::vector<double> b(a.size(), 0.0);
  auto at = [n](std::vector<double>& v, int i, int j, int k) -> double& {
    return v[(static_cast<std::size_t>(i) * n + j) * n + k];
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += q(c, k) * t(i, j, k);
        at(a, i, j, c) = sum;
      }
  for (int i = 0; i < n; ++i)
    for (int bb = 0; bb < n; ++bb)
      for (int c = 0; c < n; ++c) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += q(bb, j) * at(a, i, j, c);
        at(b, i, bb, c) = sum;
      }
  StructureTensor out(n);
  for (int aa = 0; aa < n; ++aa)
    for (int bb = 0; bb < n; ++bb)
      for (int c = 0; c < n; ++c) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += q(aa, i) * at(b, i, bb, c);
        out(aa, bb, c) = sum;
      }
  return out;
}

Scrambled scramble(const StructureTensor& t, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd q = random_orthogonal(t.dim(), rng, false);
  return {conjugate(t, q), std::move(q)};
}

std::string to_string(FamilyGuess guess) {
  switch (guess) {
    case FamilyGuess::RankOne: return "rank-1";
    case FamilyGuess::Lorentz: return "lorentz";
    case FamilyGuess::SymPSD: return "sympsd";
    case FamilyGuess::Unknown: return "unknown";
  }
  return "unknown";
}

FamilyGuess family_guess_from_string(const std::string& text) {
  if (text == "rank-1") return FamilyGuess::RankOne;
  if (text == "lorentz") return FamilyGuess::Lorentz;
  if (text == "sympsd") return FamilyGuess::SymPSD;
  if (text == "unknown") return FamilyGuess::Unknown;
  throw InputError("unknown family guess '" + text + "'");
}

namespace {

FamilyGuess guess_family(int dim, int rank) {
  if (rank == 1) return FamilyGuess::RankOne;
  if (rank == 2) return FamilyGuess::Lorentz;
  if (dim == rank * (rank + 1) / 2) return FamilyGuess::SymPSD;
  return FamilyGuess::Unknown;
}

/// Null-space basis of the symmetric commutant, each column an upper-triangle
/// parameter vector.
Eigen::MatrixXd commutant_basis(const StructureTensor& t, const SplitOptions& options) {
  const int n = t.dim();
  std::vector<Eigen::MatrixXd> ops;
  ops.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ops.push_back(t.multiplication_operator(Eigen::VectorXd::Unit(n, i)));

  const int params = n * (n + 1) / 2;
  Eigen::MatrixXd system(static_cast<Eigen::Index>(n) * n * n, params);
  int p = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b, ++p) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
      e(a, b) = 1.0;
      e(b, a) = 1.0;
      for (int i = 0; i < n; ++i) {
        const Eigen::MatrixXd comm = e * ops[static_cast<std::size_t>(i)] -
                                     ops[static_cast<std::size_t>(i)] * e;
        system.col(p).segment(static_cast<Eigen::Index>(i) * n * n, n * n) =
            Eigen::Map<const Eigen::VectorXd>(comm.data(), n * n);
      }
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma(0);
  int nullity = 0;
  for (Eigen::Index i = sigma.size() - 1; i >= 0; --i) {
    const double rel = smax > 0.0 ? sigma(i) / smax : 0.0;
    if (rel <= options.null_tol) {
      ++nullity;
    } else if (rel <= options.ambiguous) {
      std::ostringstream msg;
      msg << "commutant rank is ambiguous: singular value ratio " << rel << " lies between "
          << options.null_tol << " and " << options.ambiguous;
      throw NumericalError(msg.str());
    } else {
      break;
    }
  }
  if (smax == 0.0) nullity = params;  // every operator is zero; cannot happen for a unital algebra
  if (nullity == 0) throw NumericalError("commutant is trivial; the identity was not recovered");
  return svd.matrixV().rightCols(nullity);
}

Eigen::MatrixXd unpack_symmetric(const Eigen::VectorXd& v, int n) {
  Eigen::MatrixXd m(n, n);
  int p = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b, ++p) {
      m(a, b) = v(p);
      m(b, a) = v(p);
    }
  }
  return m;
}

double leakage(const StructureTensor& t, const Eigen::MatrixXd& bi, const Eigen::MatrixXd& bj) {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < bi.cols(); ++a) {
    for (Eigen::Index b = a; b < bi.cols(); ++b) {
      const Eigen::VectorXd prod = t.product(bi.col(a), bi.col(b));
      worst = std::max(worst, (bj.transpose() * prod).norm());
    }
    for (Eigen::Index b = 0; b < bj.cols(); ++b) {
      worst = std::max(worst, t.product(bi.col(a), bj.col(b)).norm());
    }
  }
  return worst;
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

Eigen::Index leading_coordinate(const Eigen::MatrixXd& basis) {
  Eigen::Index best = 0;
  (basis.rowwise().squaredNorm()).maxCoeff(&best);
  return best;
}

}  // namespace

StructureTensor block_tensor(const StructureTensor& t, const DecomposedBlock& block) {
  const Eigen::MatrixXd& b = block.basis;
  const int m = static_cast<int>(b.cols());
  StructureTensor out(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const Eigen::VectorXd prod = b.transpose() * t.product(b.col(i), b.col(j));
      for (int k = 0; k < m; ++k) {
        out(i, j, k) = prod(k);
        out(j, i, k) = prod(k);
      }
    }
  }
  return out;
}

std::vector<Algebra> block_algebras(const StructureTensor& t, const DecompositionResult& d) {
  std::vector<Algebra> out;
  out.reserve(d.blocks.size());
  for (const auto& block : d.blocks) out.push_back(Algebra::custom(block_tensor(t, block)));
  return out;
}

double block_closure_residual(const StructureTensor& t, const DecompositionResult& d) {
  const int n = t.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const Eigen::MatrixXd& bi = d.blocks[i].basis;
    const Eigen::MatrixXd outside =
        Eigen::MatrixXd::Identity(n, n) - bi * bi.transpose();
    for (Eigen::Index a = 0; a < bi.cols(); ++a) {
      for (Eigen::Index b = a; b < bi.cols(); ++b) {
        worst = std::max(worst, (outside * t.product(bi.col(a), bi.col(b))).norm());
      }
    }
  }
  return worst;
}

DecompositionResult split_irreducible(const StructureTensor& t, const SplitOptions& options) {
  t.validate();
  const int n = t.dim();
  const Eigen::MatrixXd null_basis = commutant_basis(t, options);
  const int ideals = static_cast<int>(null_basis.cols());
  const double scale = std::max(1.0, t.max_abs());

  Rng rng(options.seed);
  std::vector<Eigen::MatrixXd> clusters;
  int attempts = 0;
  while (true) {
    if (attempts >= options.retry_budget) {
      std::ostringstream msg;
      msg << "could not separate " << ideals << " ideals after " << attempts
          << " random commutant draws";
      throw NumericalError(msg.str());
    }
    ++attempts;
    const Eigen::VectorXd coeffs = random_gaussian(ideals, rng);
    const Eigen::MatrixXd m = unpack_symmetric(null_basis * coeffs, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double norm = values.cwiseAbs().maxCoeff();
    const double gap = options.gap_tol * std::max(norm, 1e-300);

    clusters.clear();
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      if (i == n || values(i) - values(i - 1) > gap) {
        clusters.push_back(eig.eigenvectors().middleCols(start, i - start));
        start = i;
      }
    }
    if (static_cast<int>(clusters.size()) == ideals) break;
  }

  // Merge clusters whose products leak into each other; with an exact
  // commutant this is a no-op.
  const std::size_t k = clusters.size();
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (leakage(t, clusters[i], clusters[j]) > options.tol * scale) {
        parent[static_cast<std::size_t>(find_root(parent, static_cast<int>(i)))] =
            find_root(parent, static_cast<int>(j));
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups(k);
  for (std::size_t i = 0; i < k; ++i) {
    groups[static_cast<std::size_t>(find_root(parent, static_cast<int>(i)))].push_back(i);
  }

  DecompositionResult result;
  result.dim = n;
  result.attempts = attempts;
  for (const auto& group : groups) {
    if (group.empty()) continue;
    int cols = 0;
    for (auto g : group) cols += static_cast<int>(clusters[g].cols());
    DecomposedBlock block;
    block.basis.resize(n, cols);
    int at = 0;
    for (auto g : group) {
      block.basis.middleCols(at, clusters[g].cols()) = clusters[g];
      at += static_cast<int>(clusters[g].cols());
    }
    for (Eigen::Index c = 0; c < block.basis.cols(); ++c) {
      Eigen::Index arg = 0;
      block.basis.col(c).cwiseAbs().maxCoeff(&arg);
      if (block.basis(arg, c) < 0.0) block.basis.col(c) *= -1.0;
    }
    block.dim = cols;
    result.blocks.push_back(std::move(block));
  }

  for (auto& block : result.blocks) {
    block.rank = Algebra::custom(block_tensor(t, block)).rank();
    block.guess = guess_family(block.dim, block.rank);
  }
  std::sort(result.blocks.begin(), result.blocks.end(),
            [](const DecomposedBlock& a, const DecomposedBlock& b) {
              if (a.dim != b.dim) return a.dim > b.dim;
              if (a.rank != b.rank) return a.rank > b.rank;
              return leading_coordinate(a.basis) < leading_coordinate(b.basis);
            });

  Eigen::MatrixXd stacked(n, n);
  int at = 0;
  for (const auto& block : result.blocks) {
    stacked.middleCols(at, block.dim) = block.basis;
    at += block.dim;
  }
  result.orthogonality_residual =
      (stacked.transpose() * stacked - Eigen::MatrixXd::Identity(n, n)).norm();
  result.closure_residual = block_closure_residual(t, result) / scale;
  return result;
}

IdentifiedBarrier identify_barrier_weights(const BarrierFunction& oracle,
                                           const DecompositionResult& d,
                                           const StructureTensor& t) {
  if (d.dim != t.dim()) throw DimensionError("decomposition and tensor dimensions differ");
  const Eigen::VectorXd e = t.identity();
  auto evaluate = [&oracle](const Eigen::VectorXd& y, const char* where) {
    const double v = oracle(y);
    if (!std::isfinite(v)) {
      throw InputError(std::string("barrier oracle returned a non-finite value ") + where);
    }
    return v;
  };

  IdentifiedBarrier out;
  out.offset = evaluate(e, "at the identity");
  constexpr std::array<double, 5> kSteps{0.25, 0.5, 1.0, 2.0, 4.0};
  for (const auto& block : d.blocks) {
    const Eigen::VectorXd f = block.basis * (block.basis.transpose() * e);
    Eigen::MatrixXd design(kSteps.size(), 2);
    Eigen::VectorXd values(kSteps.size());
    for (std::size_t i = 0; i < kSteps.size(); ++i) {
      const double s = kSteps[i];
      design(static_cast<Eigen::Index>(i), 0) = 1.0;
      design(static_cast<Eigen::Index>(i), 1) = std::log(s);
      values(static_cast<Eigen::Index>(i)) = evaluate(e + (s - 1.0) * f, "along a block ray");
    }
    const Eigen::Vector2d fit = design.colPivHouseholderQr().solve(values);
    out.fit_residual =
        std::max(out.fit_residual, (design * fit - values).cwiseAbs().maxCoeff());
    out.weights.push_back(-fit(1) / block.rank);
    out.ranks.push_back(block.rank);
    out.nu_fitted += out.weights.back() * block.rank;
  }
  constexpr double h = 1e-5;
  out.nu_measured =
      -(evaluate((1.0 + h) * e, "near the identity") - evaluate((1.0 - h) * e, "near the identity")) /
      (2.0 * h);
  return out;
}

double recovered_barrier_value(const std::vector<Algebra>& blocks, const DecompositionResult& d,
                               const IdentifiedBarrier& barrier, const Eigen::VectorXd& y) {
  if (blocks.size() != d.blocks.size() || barrier.weights.size() != d.blocks.size()) {
    throw DimensionError("recovered barrier: block count mismatch");
  }
  double total = barrier.offset;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Element part(blocks[i], d.blocks[i].basis.transpose() * y);
    total -= barrier.weights[i] * log_determinant(part);
  }
  return total;
}

}  // namespace symcone
