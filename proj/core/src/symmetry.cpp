#include "symcone/symmetry.hpp"

#include <cmath>
#include <sstream>

#include "symcone/errors.hpp"
#include "symcone/sampling.hpp"

namespace symcone {

LinearOperator quad_automorphism(const Element& u) {
  if (!is_interior(u)) throw DomainError("quad_automorphism: u is not interior");
  return quadratic_representation(u);
}

LinearOperator lorentz_rotation_operator(const Eigen::MatrixXd& r) {
  const auto n = r.rows();
  LinearOperator h = LinearOperator::Zero(n + 1, n + 1);
  h(0, 0) = 1.0;
  h.bottomRightCorner(n, n) = r;
  return h;
}

LinearOperator congruence_operator(const Eigen::MatrixXd& o) {
  const int k = static_cast<int>(o.rows());
  const int m = svec::size(k);
  LinearOperator h(m, m);
  for (int j = 0; j < m; ++j) {
    const Eigen::MatrixXd basis = svec::unpack(Eigen::VectorXd::Unit(m, j), k);
    h.col(j) = svec::pack(o * basis * o.transpose());
  }
  return h;
}

LinearOperator orthogonal_automorphism_sample(const Algebra& cone, std::uint64_t seed) {
  Rng rng(seed);
  LinearOperator h = LinearOperator::Identity(cone.dim(), cone.dim());
  for (const LeafInfo& leaf : cone.leaves()) {
    auto block = h.block(leaf.offset, leaf.offset, leaf.dim, leaf.dim);
    switch (leaf.family) {
      case Family::Lorentz:
        block = lorentz_rotation_operator(random_orthogonal(leaf.param, rng, true));
        break;
      case Family::SymPSD:
        block = congruence_operator(random_orthogonal(leaf.param, rng, true));
        break;
      default:
        break;
    }
  }
  return h;
}

bool maps_cone_into_itself(const Algebra& cone, const LinearOperator& a, int samples,
                           std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Element x = random_interior(cone, rng, 1.0);
    if (membership(Element(cone, a * x.coords)) == Membership::Exterior) return false;
  }
  return true;
}

PolarDecomposition polar_decompose(const LinearOperator& a, const Algebra& cone,
                                   std::uint64_t seed) {
  if (a.rows() != cone.dim() || a.cols() != cone.dim()) {
    std::ostringstream msg;
    msg << "polar_decompose: operator is " << a.rows() << "x" << a.cols() << ", cone has dimension "
        << cone.dim();
    throw DimensionError(msg.str());
  }
  if (!maps_cone_into_itself(cone, a, 200, seed)) {
    throw InputError("polar_decompose: operator maps a sampled cone point outside the cone");
  }
  const Element af(cone, a * identity(cone).coords);
  if (!is_interior(af)) throw InputError("polar_decompose: A f is not interior");
  Element u = sqrt(af);
  LinearOperator h = quadratic_representation(inverse(u)) * a;
  const double residual = relative_difference(quadratic_representation(u) * h, a);
  return {std::move(u), std::move(h), residual};
}

VerificationReport isotropy_check(const SelfScaledBarrier& barrier, const LinearOperator& h,
                                  int trials, std::uint64_t seed, double tol) {
  IdentityRecord record{"isotropy", "F(Hx) = F(x)", 0, 0.0, tol, true};
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    const Element x = random_interior(barrier.cone(), rng);
    double residual;
    try {
      const double fx = barrier.value(x);
      const double fhx = barrier.value(Element(barrier.cone(), h * x.coords));
      residual = std::abs(fhx - fx) / (1.0 + std::abs(fx));
    } catch (const std::exception&) {
      residual = std::numeric_limits<double>::infinity();
    }
    ++record.trials;
    record.max_residual = std::max(record.max_residual, residual);
    if (!(residual <= tol)) record.passed = false;
  }
  VerificationReport report;
  report.seed = seed;
  report.records.push_back(record);
  report.finalize();
  return report;
}

FrameRestriction frame_restriction_check(const SelfScaledBarrier& barrier,
                                         const std::vector<double>& alphas,
                                         std::uint64_t frame_seed) {
  const Algebra& cone = barrier.cone();
  if (cone.irreducible_blocks().size() != 1) {
    throw InputError("frame restriction needs an irreducible cone, got " + cone.to_string());
  }
  if (static_cast<int>(alphas.size()) != cone.rank()) {
    std::ostringstream msg;
    msg << "frame restriction needs " << cone.rank() << " coefficients, got " << alphas.size();
    throw DimensionError(msg.str());
  }
  for (double a : alphas) {
    if (!(a > 0.0)) throw DomainError("frame restriction coefficients must be positive");
  }
  Rng rng(frame_seed);
  const SpectralDecomposition sd = spectral_decompose(random_interior(cone, rng));
  Element x = zero(cone);
  double log_sum = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    x = x + alphas[i] * sd.frame[i];
    log_sum += std::log(alphas[i]);
  }
  return {barrier.value(x) - barrier.offset(), -(barrier.nu() / cone.rank()) * log_sum};
}

QuadraticProduct orthogonal_from_quadratic_product(const Element& u, const Element& v) {
  require_same_algebra(u, v);
  if (!is_interior(u) || !is_interior(v)) {
    throw DomainError("orthogonal_from_quadratic_product: factors must be interior");
  }
  const LinearOperator puv = quadratic_representation(u) * quadratic_representation(v);
  const Element p = sqrt(Element(u.algebra, puv * identity(u.algebra).coords));
  const Element p_inv = inverse(p);
  return {quadratic_representation(p_inv) * puv, {p_inv, u, v}};
}

}  // namespace symcone
