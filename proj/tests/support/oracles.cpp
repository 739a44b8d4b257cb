#include "oracles.hpp"

#include <cmath>
#include <random>

#include "symcone/jordan.hpp"

namespace symcone::oracle {

Eigen::MatrixXd unpack_matrix(const Eigen::VectorXd& v, int k) {
  Eigen::MatrixXd m(k, k);
  int p = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j, ++p) {
      const double value = i == j ? v(p) : v(p) / std::sqrt(2.0);
      m(i, j) = value;
      m(j, i) = value;
    }
  }
  return m;
}

Eigen::VectorXd pack_matrix(const Eigen::MatrixXd& m) {
  const auto k = m.rows();
  Eigen::VectorXd v(k * (k + 1) / 2);
  int p = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j, ++p) {
      v(p) = i == j ? m(i, j) : std::sqrt(2.0) * m(i, j);
    }
  }
  return v;
}

std::vector<double> block_log_dets(const Algebra& algebra, const Eigen::VectorXd& x) {
  std::vector<double> out;
  for (const LeafInfo& leaf : algebra.leaves()) {
    const Eigen::VectorXd xs = x.segment(leaf.offset, leaf.dim);
    switch (leaf.family) {
      case Family::Orthant:
        for (Eigen::Index i = 0; i < xs.size(); ++i) out.push_back(std::log(xs(i)));
        break;
      case Family::Lorentz:
        out.push_back(std::log(xs(0) * xs(0) - xs.tail(xs.size() - 1).squaredNorm()));
        break;
      case Family::SymPSD: {
        const Eigen::LLT<Eigen::MatrixXd> llt(unpack_matrix(xs, leaf.param));
        out.push_back(2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum());
        break;
      }
      default:
        throw std::invalid_argument("oracle: unsupported leaf family");
    }
  }
  return out;
}

double barrier_value(const SelfScaledBarrier& barrier, const Eigen::VectorXd& x) {
  const std::vector<double> logs = block_log_dets(barrier.cone(), x);
  double total = barrier.offset();
  for (std::size_t i = 0; i < logs.size(); ++i) total -= barrier.weights()[i] * logs[i];
  return total;
}

Eigen::VectorXd barrier_gradient(const SelfScaledBarrier& barrier, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  const auto& weights = barrier.weights();
  for (const LeafInfo& leaf : barrier.cone().leaves()) {
    const Eigen::VectorXd xs = x.segment(leaf.offset, leaf.dim);
    auto out = g.segment(leaf.offset, leaf.dim);
    const double c = weights[static_cast<std::size_t>(leaf.first_block)];
    switch (leaf.family) {
      case Family::Orthant:
        for (Eigen::Index i = 0; i < xs.size(); ++i) {
          out(i) = -weights[static_cast<std::size_t>(leaf.first_block + i)] / xs(i);
        }
        break;
      case Family::Lorentz: {
        const double det = xs(0) * xs(0) - xs.tail(xs.size() - 1).squaredNorm();
        out(0) = -c * xs(0) / det;
        out.tail(xs.size() - 1) = c * xs.tail(xs.size() - 1) / det;
        break;
      }
      case Family::SymPSD:
        out = -c * pack_matrix(unpack_matrix(xs, leaf.param).inverse());
        break;
      default:
        throw std::invalid_argument("oracle: unsupported leaf family");
    }
  }
  return g;
}

double min_eigenvalue(const Algebra& algebra, const Eigen::VectorXd& x) {
  double lo = std::numeric_limits<double>::infinity();
  for (const LeafInfo& leaf : algebra.leaves()) {
    const Eigen::VectorXd xs = x.segment(leaf.offset, leaf.dim);
    switch (leaf.family) {
      case Family::Orthant:
        lo = std::min(lo, xs.minCoeff());
        break;
      case Family::Lorentz:
        lo = std::min(lo, xs(0) - xs.tail(xs.size() - 1).norm());
        break;
      case Family::SymPSD: {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(unpack_matrix(xs, leaf.param),
                                                           Eigen::EigenvaluesOnly);
        lo = std::min(lo, eig.eigenvalues()(0));
        break;
      }
      default:
        throw std::invalid_argument("oracle: unsupported leaf family");
    }
  }
  return lo;
}

Element newton_scaling_point(const SelfScaledBarrier& barrier, const Element& x, const Element& s,
                             const Element& start, int* iterations) {
  const Algebra& cone = barrier.cone();
  Eigen::VectorXd target = s.coords;
  const auto& blocks = cone.irreducible_blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    target.segment(blocks[b].offset, blocks[b].dim) /= barrier.weights()[b];
  }
  auto residual = [&](const Element& y) {
    return Eigen::VectorXd(quadratic_representation(y) * x.coords - target);
  };
  Element y = inverse(start);
  Eigen::VectorXd r = residual(y);
  int it = 0;
  for (; it < 100 && r.norm() > 1e-15 * target.norm(); ++it) {
    const LinearOperator jac =
        2.0 * (multiplication_operator(jordan_product(y, x)) +
               multiplication_operator(y) * multiplication_operator(x) -
               multiplication_operator(x) * multiplication_operator(y));
    const Eigen::VectorXd step = jac.fullPivLu().solve(-r);
    double alpha = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      const Element trial(cone, y.coords + alpha * step);
      if (min_eigenvalue(cone, trial.coords) <= 0.0) continue;
      const Eigen::VectorXd rt = residual(trial);
      if (rt.norm() < r.norm()) {
        y = trial;
        r = rt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (iterations) *iterations = it;
  return inverse(y);
}

double orthant2_log_characteristic_mc(const Eigen::Vector2d& x, int strata_per_axis,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double b1 = 12.0 / x(0), b2 = 12.0 / x(1);
  const double h1 = b1 / strata_per_axis, h2 = b2 / strata_per_axis;
  double sum = 0.0;
  for (int i = 0; i < strata_per_axis; ++i) {
    for (int j = 0; j < strata_per_axis; ++j) {
      const double y1 = (i + unit(rng)) * h1;
      const double y2 = (j + unit(rng)) * h2;
      sum += std::exp(-x(0) * y1 - x(1) * y2);
    }
  }
  return std::log(sum * h1 * h2);
}

}  // namespace symcone::oracle
