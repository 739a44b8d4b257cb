#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "symcone/barrier.hpp"
#include "symcone/errors.hpp"
#include "symcone/sampling.hpp"
#include "test_util.hpp"

namespace symcone {
namespace {

using testing::near;
using testing::vec;

struct NamedBarrier {
  std::string name;
  SelfScaledBarrier barrier;
};

std::vector<NamedBarrier> property_barriers() {
  std::vector<NamedBarrier> out;
  for (const auto& [name, a] : testing::property_algebras()) {
    out.push_back({name, SelfScaledBarrier::standard(a)});
  }
  out.push_back({"weighted_l3_o1", SelfScaledBarrier(Algebra::direct_sum({Algebra::lorentz(3), Algebra::orthant(1)}),
                                                     {2.0, 1.0}, 0.3)});
  out.push_back({"weighted_s3", SelfScaledBarrier(Algebra::sym_psd(3), {1.7}, -1.0)});
  out.push_back({"weighted_o3", SelfScaledBarrier(Algebra::orthant(3), {1.0, 2.5, 4.0})});
  out.push_back({"weighted_s2_l2_o2",
                 SelfScaledBarrier(Algebra::direct_sum({Algebra::sym_psd(2), Algebra::lorentz(2), Algebra::orthant(2)}),
                                   {3.0, 1.5, 1.0, 2.0}, 0.5)});
  return out;
}

// ---- construction ---------------------------------------------------------

TEST(BarrierConstruction, NuIsWeightedRankSum) {
  EXPECT_DOUBLE_EQ(SelfScaledBarrier::standard(Algebra::sym_psd(4)).nu(), 4.0);
  const SelfScaledBarrier b(Algebra::direct_sum({Algebra::lorentz(3), Algebra::orthant(2)}), {2.0, 1.0, 3.0});
  EXPECT_DOUBLE_EQ(b.nu(), 2.0 * 2 + 1.0 + 3.0);
}

TEST(BarrierConstruction, WeightsBroadcastPerLeafAndScalar) {
  const Algebra a = Algebra::direct_sum({Algebra::orthant(2), Algebra::lorentz(2)});
  EXPECT_EQ(SelfScaledBarrier(a, {2.0}).weights(), (std::vector<double>{2.0, 2.0, 2.0}));
  EXPECT_EQ(SelfScaledBarrier(a, {3.0, 1.5}).weights(), (std::vector<double>{3.0, 3.0, 1.5}));
  EXPECT_EQ(SelfScaledBarrier(a, {1.0, 2.0, 4.0}).weights(), (std::vector<double>{1.0, 2.0, 4.0}));
  EXPECT_THROW(SelfScaledBarrier(a, {1.0, 1.0, 1.0, 1.0}), InputError);
}

TEST(BarrierConstruction, WeightBelowOneRejected) {
  try {
    SelfScaledBarrier(Algebra::orthant(2), {1.0, 0.5});
    FAIL() << "expected InputError";
  } catch (const InputError& err) {
    EXPECT_NE(std::string(err.what()).find("classification"), std::string::npos);
  }
  EXPECT_THROW(SelfScaledBarrier(Algebra::orthant(1), {std::nan("")}), InputError);
}

// ---- examples -------------------------------------------------------------

TEST(BarrierValue, Examples) {
  const SelfScaledBarrier standard = SelfScaledBarrier::standard(Algebra::orthant(2));
  EXPECT_DOUBLE_EQ(standard.value(Element(Algebra::orthant(2), vec({1, 1}))), 0.0);
  const SelfScaledBarrier weighted(Algebra::orthant(2), {2.0, 1.0});
  EXPECT_NEAR(weighted.value(Element(Algebra::orthant(2), vec({1, 3}))), -std::log(3.0), 1e-15);
  EXPECT_NEAR(weighted.value(Element(Algebra::orthant(2), vec({2, 3}))), -2 * std::log(2.0) - std::log(3.0),
              1e-15);
}

TEST(BarrierValue, LogHomogeneityAtIdentity) {
  for (const auto& [name, b] : property_barriers()) {
    const Element e = identity(b.cone());
    EXPECT_NEAR(b.value(2.0 * e), b.value(e) - b.nu() * std::log(2.0), 1e-12) << name;
  }
}

TEST(BarrierValue, NonInteriorThrows) {
  const SelfScaledBarrier b = SelfScaledBarrier::standard(Algebra::lorentz(2));
  EXPECT_THROW(b.value(Element(Algebra::lorentz(2), vec({1, 1, 0}))), DomainError);
  EXPECT_THROW(b.gradient(Element(Algebra::lorentz(2), vec({1, 2, 0}))), DomainError);
  EXPECT_THROW(b.hessian(Element(Algebra::lorentz(2), vec({-1, 0, 0}))), DomainError);
  EXPECT_THROW(b.dual_value(Element(Algebra::lorentz(2), vec({0, 0, 0}))), DomainError);
  EXPECT_THROW(b.value(identity(Algebra::orthant(3))), DimensionError);
}

TEST(BarrierGradient, Examples) {
  const SelfScaledBarrier b = SelfScaledBarrier::standard(Algebra::orthant(2));
  EXPECT_TRUE(near(b.gradient(Element(Algebra::orthant(2), vec({2, 4}))).coords, vec({-0.5, -0.25}), 1e-15));
}

TEST(BarrierDual, Examples) {
  const SelfScaledBarrier b = SelfScaledBarrier::standard(Algebra::orthant(1));
  EXPECT_NEAR(b.dual_value(Element(Algebra::orthant(1), vec({1}))), -1.0, 1e-15);
}

TEST(BarrierDual, MatchesNumericalSupremum) {
  // sup_x { -x s - c ln x } = -c ln s + c (ln c - 1) at x = c / s, brute forced on a grid.
  for (double c : {1.0, 2.5}) {
    const SelfScaledBarrier b(Algebra::orthant(1), {c});
    for (double s : {0.3, 1.0, 4.0}) {
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 200000; ++i) {
        const double x = 1e-4 * i;
        best = std::max(best, -x * s + c * std::log(x));
      }
      EXPECT_NEAR(b.dual_value(Element(Algebra::orthant(1), vec({s}))), best, 1e-6) << c << " " << s;
    }
  }
}

TEST(ScalingPoint, Examples) {
  const SelfScaledBarrier o = SelfScaledBarrier::standard(Algebra::orthant(2));
  EXPECT_TRUE(near(o.scaling_point(Element(Algebra::orthant(2), vec({4, 1})), Element(Algebra::orthant(2), vec({1, 4})))
                       .coords,
                   vec({2, 0.5}), 1e-14));
  const Algebra s2 = Algebra::sym_psd(2);
  const SelfScaledBarrier s = SelfScaledBarrier::standard(s2);
  EXPECT_TRUE(near(s.scaling_point(Element(s2, vec({4, 0, 1})), Element(s2, vec({1, 0, 4}))).coords,
                   vec({2, 0, 0.5}), 1e-14));
  Rng rng(4);
  for (const auto& [name, b] : property_barriers()) {
    bool standard = true;
    for (double c : b.weights()) standard = standard && c == 1.0;
    if (!standard) continue;
    const Element x = random_interior(b.cone(), rng);
    EXPECT_TRUE(near(b.scaling_point(x, x).coords, identity(b.cone()).coords, 1e-12)) << name;
  }
}

TEST(FUnit, HessianIsIdentity) {
  for (const auto& [name, b] : property_barriers()) {
    const FUnitPair unit = b.f_unit();
    const int n = b.cone().dim();
    EXPECT_TRUE(near(b.hessian(unit.e), Eigen::MatrixXd::Identity(n, n), 1e-13)) << name;
    EXPECT_TRUE(near((-b.gradient(unit.e)).coords, unit.e_inv.coords, 1e-13)) << name;
  }
}

TEST(CharacteristicFunction, Examples) {
  EXPECT_NEAR(characteristic_function_log(Algebra::orthant(2), Element(Algebra::orthant(2), vec({1, 2}))),
              -std::log(2.0), 1e-15);
  EXPECT_NEAR(characteristic_function_log(Algebra::lorentz(2), Element(Algebra::lorentz(2), vec({2, 1, 0}))),
              -1.5 * std::log(3.0), 1e-14);
  for (const auto& [name, a] : testing::property_algebras()) {
    EXPECT_NEAR(characteristic_function_log(a, identity(a)), 0.0, 1e-14) << name;
  }
  EXPECT_THROW(characteristic_function_log(Algebra::orthant(2), Element(Algebra::orthant(2), vec({1, 0}))),
               DomainError);
}

// ---- properties against the dense oracles ---------------------------------

TEST(BarrierProperties, ValueAndGradientMatchOracle) {
  Rng rng(201);
  for (const auto& [name, b] : property_barriers()) {
    for (int trial = 0; trial < 50; ++trial) {
      const Element x = random_interior(b.cone(), rng);
      const double expected = oracle::barrier_value(b, x.coords);
      ASSERT_NEAR(b.value(x), expected, 1e-11 * (1.0 + std::abs(expected))) << name;
      const Eigen::VectorXd g = oracle::barrier_gradient(b, x.coords);
      ASSERT_TRUE(near(b.gradient(x).coords, g, 1e-10 * (1.0 + g.norm()))) << name;
    }
  }
}

TEST(BarrierProperties, NuFromGradient) {
  Rng rng(202);
  for (const auto& [name, b] : property_barriers()) {
    for (int trial = 0; trial < 50; ++trial) {
      const Element x = random_interior(b.cone(), rng);
      ASSERT_NEAR(inner(x, -b.gradient(x)), b.nu(), 1e-10 * b.nu()) << name;
    }
  }
}

TEST(BarrierProperties, HessianHomogeneityAndInverse) {
  Rng rng(203);
  for (const auto& [name, b] : property_barriers()) {
    const int n = b.cone().dim();
    for (int trial = 0; trial < 30; ++trial) {
      const Element x = random_interior(b.cone(), rng);
      const LinearOperator h = b.hessian(x);
      ASSERT_TRUE(near(b.hessian(3.0 * x), h / 9.0, 1e-10 * h.norm())) << name;
      ASSERT_TRUE(near(h * b.hessian_inverse(x), Eigen::MatrixXd::Identity(n, n), 1e-9)) << name;
      ASSERT_TRUE(near(h * x.coords, (-b.gradient(x)).coords, 1e-10 * h.norm() * x.coords.norm())) << name;
    }
  }
}

TEST(BarrierProperties, DualAtNegativeGradient) {
  Rng rng(204);
  for (const auto& [name, b] : property_barriers()) {
    for (int trial = 0; trial < 50; ++trial) {
      const Element x = random_interior(b.cone(), rng);
      const Element s = -b.gradient(x);
      ASSERT_NEAR(b.dual_value(s), -b.nu() - b.value(x), 1e-10 * (1.0 + std::abs(b.value(x)))) << name;
      ASSERT_TRUE(near((-b.dual_gradient(s)).coords, x.coords, 1e-10 * (1.0 + x.coords.norm()))) << name;
    }
  }
}

TEST(BarrierProperties, DualEqualsPrimalShiftForStandardBarriers) {
  Rng rng(205);
  for (const auto& [name, a] : testing::property_algebras()) {
    const SelfScaledBarrier b = SelfScaledBarrier::standard(a);
    ASSERT_NEAR(b.value(identity(a)), 0.0, 1e-15);
    for (int trial = 0; trial < 30; ++trial) {
      const Element x = random_interior(a, rng);
      ASSERT_NEAR(b.dual_value(x) - b.value(x), -b.nu(), 1e-10) << name;
    }
  }
}

TEST(BarrierProperties, ScalingPointMatchesNewtonOracle) {
  Rng rng(206);
  for (const auto& [name, b] : property_barriers()) {
    for (int trial = 0; trial < 20; ++trial) {
      const Element x = random_interior(b.cone(), rng), s = random_interior(b.cone(), rng);
      const Element w = b.scaling_point(x, s);
      ASSERT_LE((b.hessian(w) * x.coords - s.coords).norm(), 1e-8 * s.coords.norm()) << name;
      ASSERT_TRUE(is_interior(w)) << name;
      const Element start(b.cone(), w.coords + 0.05 * random_element(b.cone(), rng).coords.cwiseProduct(
                                                           Eigen::VectorXd::Constant(w.dim(), w.coords.norm() /
                                                                                                   std::sqrt(w.dim()))));
      const Element ref = oracle::newton_scaling_point(b, x, s, is_interior(start) ? start : identity(b.cone()));
      ASSERT_LE((w.coords - ref.coords).norm(), 1e-7 * (1.0 + ref.coords.norm())) << name;
    }
  }
}

TEST(BarrierProperties, HessianAtScalingPointMapsConeIntoCone) {
  Rng rng(207);
  for (const auto& [name, b] : property_barriers()) {
    const Element w = b.scaling_point(random_interior(b.cone(), rng), random_interior(b.cone(), rng));
    const LinearOperator h = b.hessian(w);
    for (int trial = 0; trial < 100; ++trial) {
      const Element x = random_interior(b.cone(), rng, 1.5);
      ASSERT_GT(oracle::min_eigenvalue(b.cone(), h * x.coords), 0.0) << name;
    }
  }
}

TEST(BarrierProperties, CharacteristicFunctionAffineRelation) {
  Rng rng(208);
  for (const auto& [name, a] : testing::property_algebras()) {
    for (int trial = 0; trial < 100; ++trial) {
      const Element x = random_interior(a, rng);
      const std::vector<double> logs = oracle::block_log_dets(a, x.coords);
      double weighted = 0.0;
      for (std::size_t i = 0; i < logs.size(); ++i) {
        const IrreducibleBlock& blk = a.irreducible_blocks()[i];
        weighted += static_cast<double>(blk.dim) / blk.rank * logs[i];
      }
      ASSERT_NEAR(characteristic_function_log(a, x) + weighted, 0.0, 1e-10) << name;
    }
  }
}

TEST(BarrierProperties, LogDetHessianIsAffineInLogDet) {
  Rng rng(209);
  const std::vector<std::pair<Algebra, double>> blocks = {
      {Algebra::orthant(1), 2.0}, {Algebra::lorentz(3), 1.0}, {Algebra::lorentz(2), 3.5},
      {Algebra::sym_psd(3), 1.0}, {Algebra::sym_psd(2), 1.25}};
  for (const auto& [a, c] : blocks) {
    const SelfScaledBarrier b(a, {c});
    const double ratio = 2.0 * a.dim() / a.rank();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int trial = 0; trial < 100; ++trial) {
      const Element x = random_interior(a, rng);
      const double v = std::log(b.hessian(x).determinant()) + ratio * oracle::block_log_dets(a, x.coords)[0];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    EXPECT_LE(hi - lo, 1e-7) << a.to_string();
  }
}

TEST(BarrierProperties, HessianMatchesSecondDifference) {
  Rng rng(210);
  for (const auto& [name, b] : property_barriers()) {
    for (int trial = 0; trial < 20; ++trial) {
      const Element x = random_interior(b.cone(), rng, 0.3);
      Element h = random_element(b.cone(), rng);
      h = (1.0 / norm(h)) * h;
      const double step = 1e-4 * x.coords.norm();
      const double second =
          (b.value(x + step * h) - 2.0 * b.value(x) + b.value(x - step * h)) / (step * step);
      const double exact = inner(h, Element(b.cone(), b.hessian(x) * h.coords));
      ASSERT_NEAR(second, exact, 1e-4 * std::abs(exact)) << name;
    }
  }
}

TEST(BarrierProperties, DualGradientAndHessianConsistent) {
  Rng rng(211);
  for (const auto& [name, b] : property_barriers()) {
    const int n = b.cone().dim();
    for (int trial = 0; trial < 20; ++trial) {
      const Element x = random_interior(b.cone(), rng);
      const Element s = -b.gradient(x);
      // F_*''(-F'(x)) = F''(x)^{-1}
      ASSERT_TRUE(near(b.dual_hessian(s) * b.hessian(x), Eigen::MatrixXd::Identity(n, n), 1e-8)) << name;
    }
  }
}

}  // namespace
}  // namespace symcone
