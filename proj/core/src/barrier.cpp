#include "symcone/barrier.hpp"

#include <cmath>
#include <sstream>

#include "symcone/errors.hpp"

namespace symcone {

SelfScaledBarrier::SelfScaledBarrier(Algebra cone, std::vector<double> weights, double offset)
    : cone_(std::move(cone)), offset_(offset) {
  const auto& blocks = cone_.irreducible_blocks();
  const auto& leaves = cone_.leaves();
  if (weights.size() == blocks.size()) {
    weights_ = std::move(weights);
  } else if (weights.size() == 1) {
    weights_.assign(blocks.size(), weights.front());
  } else if (weights.size() == leaves.size()) {
    for (const auto& block : blocks) weights_.push_back(weights[static_cast<std::size_t>(block.leaf)]);
  } else {
    std::ostringstream msg;
    msg << "expected 1, " << leaves.size() << " (per summand) or " << blocks.size()
        << " (per irreducible block) weights, got " << weights.size();
    throw InputError(msg.str());
  }
  for (double c : weights_) {
    if (!std::isfinite(c) || c < 1.0) {
      std::ostringstream msg;
      msg << "barrier weight " << c
          << " violates the classification constraint: every weight must be >= 1";
      throw InputError(msg.str());
    }
  }
  if (!std::isfinite(offset_)) throw InputError("barrier offset must be finite");

  for (std::size_t b = 0; b < blocks.size(); ++b) nu_ += weights_[b] * blocks[b].rank;
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    const LeafInfo& leaf = leaves[l];
    const int count = leaf.family == Family::Orthant ? leaf.dim : 1;
    Eigen::VectorXd w(count);
    for (int i = 0; i < count; ++i) w(i) = weights_[static_cast<std::size_t>(leaf.first_block + i)];
    terms_.push_back({cone_.leaf_algebra(static_cast<int>(l)), leaf, std::move(w)});
  }
}

SelfScaledBarrier SelfScaledBarrier::standard(Algebra cone) {
  return SelfScaledBarrier(std::move(cone), {1.0}, 0.0);
}

void SelfScaledBarrier::require_interior(const Element& x, const char* what) const {
  if (x.algebra != cone_) {
    throw DimensionError(std::string(what) + ": element algebra " + x.algebra.to_string() +
                         " does not match barrier cone " + cone_.to_string());
  }
  if (!is_interior(x)) {
    throw DomainError(std::string(what) + ": point is not interior to the cone");
  }
}

Eigen::VectorXd SelfScaledBarrier::leaf_segment(const Element& x, const LeafTerm& term) const {
  return x.coords.segment(term.info.offset, term.info.dim);
}

double SelfScaledBarrier::value(const Element& x) const {
  require_interior(x, "barrier value");
  double total = offset_;
  for (const auto& term : terms_) {
    const Eigen::VectorXd xs = leaf_segment(x, term);
    if (term.info.family == Family::Orthant) {
      total -= term.weights.dot(xs.array().log().matrix());
    } else {
      total -= term.weights(0) * log_determinant(Element(term.algebra, xs));
    }
  }
  return total;
}

Element SelfScaledBarrier::gradient(const Element& x) const {
  require_interior(x, "barrier gradient");
  Eigen::VectorXd g(x.dim());
  for (const auto& term : terms_) {
    const Eigen::VectorXd xs = leaf_segment(x, term);
    if (term.info.family == Family::Orthant) {
      g.segment(term.info.offset, term.info.dim) = -term.weights.cwiseQuotient(xs);
    } else {
      g.segment(term.info.offset, term.info.dim) =
          -term.weights(0) * inverse(Element(term.algebra, xs)).coords;
    }
  }
  return Element(cone_, std::move(g));
}

LinearOperator SelfScaledBarrier::hessian(const Element& x) const {
  require_interior(x, "barrier hessian");
  LinearOperator h = LinearOperator::Zero(x.dim(), x.dim());
  for (const auto& term : terms_) {
    const Eigen::VectorXd xs = leaf_segment(x, term);
    auto block = h.block(term.info.offset, term.info.offset, term.info.dim, term.info.dim);
    if (term.info.family == Family::Orthant) {
      block = term.weights.cwiseQuotient(xs.cwiseAbs2()).asDiagonal();
    } else {
      block = term.weights(0) * quadratic_representation(inverse(Element(term.algebra, xs)));
    }
  }
  return h;
}

LinearOperator SelfScaledBarrier::hessian_inverse(const Element& x) const {
  require_interior(x, "barrier hessian inverse");
  LinearOperator h = LinearOperator::Zero(x.dim(), x.dim());
  for (const auto& term : terms_) {
    const Eigen::VectorXd xs = leaf_segment(x, term);
    auto block = h.block(term.info.offset, term.info.offset, term.info.dim, term.info.dim);
    if (term.info.family == Family::Orthant) {
      block = xs.cwiseAbs2().cwiseQuotient(term.weights).asDiagonal();
    } else {
      block = quadratic_representation(Element(term.algebra, xs)) / term.weights(0);
    }
  }
  return h;
}

double SelfScaledBarrier::dual_value(const Element& s) const {
  require_interior(s, "dual barrier value");
  double total = -offset_;
  for (const auto& term : terms_) {
    const Eigen::VectorXd ss = leaf_segment(s, term);
    if (term.info.family == Family::Orthant) {
      for (Eigen::Index i = 0; i < ss.size(); ++i) {
        const double c = term.weights(i);
        total += -c * std::log(ss(i)) + c * (std::log(c) - 1.0);
      }
    } else {
      const double c = term.weights(0);
      total += -c * log_determinant(Element(term.algebra, ss)) +
               c * term.info.rank * (std::log(c) - 1.0);
    }
  }
  return total;
}

Element SelfScaledBarrier::dual_gradient(const Element& s) const {
  require_interior(s, "dual barrier gradient");
  Eigen::VectorXd g(s.dim());
  for (const auto& term : terms_) {
    const Eigen::VectorXd ss = leaf_segment(s, term);
    if (term.info.family == Family::Orthant) {
      g.segment(term.info.offset, term.info.dim) = -term.weights.cwiseQuotient(ss);
    } else {
      g.segment(term.info.offset, term.info.dim) =
          -term.weights(0) * inverse(Element(term.algebra, ss)).coords;
    }
  }
  return Element(cone_, std::move(g));
}

LinearOperator SelfScaledBarrier::dual_hessian(const Element& s) const {
  require_interior(s, "dual barrier hessian");
  // Same closed form as the primal Hessian: F_* differs from F by a constant.
  LinearOperator h = LinearOperator::Zero(s.dim(), s.dim());
  for (const auto& term : terms_) {
    const Eigen::VectorXd ss = leaf_segment(s, term);
    auto block = h.block(term.info.offset, term.info.offset, term.info.dim, term.info.dim);
    if (term.info.family == Family::Orthant) {
      block = term.weights.cwiseQuotient(ss.cwiseAbs2()).asDiagonal();
    } else {
      block = term.weights(0) * quadratic_representation(inverse(Element(term.algebra, ss)));
    }
  }
  return h;
}

Element SelfScaledBarrier::scaling_point(const Element& x, const Element& s) const {
  require_interior(x, "scaling point (x)");
  require_interior(s, "scaling point (s)");
  Eigen::VectorXd w(x.dim());
  for (const auto& term : terms_) {
    const Eigen::VectorXd xs = leaf_segment(x, term);
    const Eigen::VectorXd ss = leaf_segment(s, term);
    if (term.info.family == Family::Orthant) {
      w.segment(term.info.offset, term.info.dim) =
          (term.weights.array() * xs.array() / ss.array()).sqrt().matrix();
      continue;
    }
    // c P(w)^{-1} x = s  <=>  P(w)(s / c) = x, solved by
    // w = P(x^{1/2}) [P(x^{1/2}) (s / c)]^{-1/2}.
    const Element xe(term.algebra, xs);
    const LinearOperator root = quadratic_representation(sqrt(xe));
    const Element inner_point(term.algebra, root * (ss / term.weights(0)));
    const Element inv_root = scale_power(inner_point, -0.5);
    w.segment(term.info.offset, term.info.dim) = root * inv_root.coords;
  }
  return Element(cone_, std::move(w));
}

FUnitPair SelfScaledBarrier::f_unit() const {
  Element f = identity(cone_);
  Eigen::VectorXd scale(cone_.dim());
  for (const auto& block : cone_.irreducible_blocks()) {
    scale.segment(block.offset, block.dim)
        .setConstant(std::sqrt(weights_[static_cast<std::size_t>(&block - cone_.irreducible_blocks().data())]));
  }
  Element e(cone_, f.coords.cwiseProduct(scale));
  // -F'(e) = c e^{-1} = sqrt(c) f on every block, i.e. e itself.
  Element e_inv = e;
  return {std::move(e), std::move(e_inv)};
}

double characteristic_function_log(const Algebra& cone, const Element& x) {
  if (x.algebra != cone) throw DimensionError("characteristic function: algebra mismatch");
  if (!is_interior(x)) throw DomainError("characteristic function: point is not interior");
  double total = 0.0;
  for (std::size_t l = 0; l < cone.leaves().size(); ++l) {
    const LeafInfo& leaf = cone.leaves()[l];
    const Eigen::VectorXd xs = x.coords.segment(leaf.offset, leaf.dim);
    switch (leaf.family) {
      case Family::Orthant:
        total -= xs.array().log().sum();
        break;
      case Family::Lorentz:
      case Family::SymPSD: {
        const double ratio = static_cast<double>(leaf.dim) / leaf.rank;
        total -= ratio * log_determinant(Element(cone.leaf_algebra(static_cast<int>(l)), xs));
        break;
      }
      default:
        throw InputError("characteristic function is only available for orthant, lorentz and "
                         "sympsd summands");
    }
  }
  return total;
}

}  // namespace symcone
