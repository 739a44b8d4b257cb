#include "symcone/verification.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "symcone/errors.hpp"
#include "symcone/sampling.hpp"

namespace symcone {

const IdentityRecord* VerificationReport::find(const std::string& tag) const {
  for (const auto& r : records) {
    if (r.tag == tag) return &r;
  }
  return nullptr;
}

void VerificationReport::finalize() {
  passed = true;
  for (const auto& r : records) passed = passed && r.passed;
}

std::string VerificationReport::render() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %7s %12s %10s  %-4s  %s\n", "identity", "trials",
                "max-resid", "tol", "", "statement");
  out << line;
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%-16s %7d %12.3e %10.1e  %-4s  %s\n", r.tag.c_str(),
                  r.trials, r.max_residual, r.tolerance, r.passed ? "PASS" : "FAIL",
                  r.description.c_str());
    out << line;
  }
  out << "overall " << (passed ? "PASS" : "FAIL") << " (seed " << seed << ")\n";
  return out.str();
}

double relative_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max({a.norm(), b.norm(), std::numeric_limits<double>::min()});
  return (a - b).norm() / scale;
}

BarrierOracle as_oracle(const SelfScaledBarrier& barrier) {
  // Shared copy keeps the callbacks valid independently of `barrier`.
  auto b = std::make_shared<const SelfScaledBarrier>(barrier);
  return BarrierOracle{
      b->cone(),
      b->nu(),
      b->f_unit().e,
      [b](const Element& x) { return b->value(x); },
      [b](const Element& x) { return b->gradient(x); },
      [b](const Element& x) { return b->hessian(x); },
      [b](const Element& s) { return b->dual_value(s); },
      [b](const Element& s) { return b->dual_gradient(s); },
      [b](const Element& s) { return b->dual_hessian(s); },
      [b](const Element& x, const Element& s) { return b->scaling_point(x, s); },
  };
}

BarrierOracle with_linear_term(const BarrierOracle& oracle, const Element& q, double eps) {
  BarrierOracle out = oracle;
  out.value = [base = oracle.value, q, eps](const Element& x) {
    return base(x) + eps * inner(q, x);
  };
  out.gradient = [base = oracle.gradient, q, eps](const Element& x) {
    return base(x) + eps * q;
  };
  out.dual_value = [base = oracle.dual_value, q, eps](const Element& s) {
    return base(s + eps * q);
  };
  out.dual_gradient = [base = oracle.dual_gradient, q, eps](const Element& s) {
    return base(s + eps * q);
  };
  out.dual_hessian = [base = oracle.dual_hessian, q, eps](const Element& s) {
    return base(s + eps * q);
  };
  return out;
}

namespace {

class RecordSet {
 public:
  void declare(const std::string& tag, const std::string& description, double tolerance) {
    order_.push_back(tag);
    records_[tag] = IdentityRecord{tag, description, 0, 0.0, tolerance, true};
  }

  template <typename Fn>
  void check(const std::string& tag, Fn&& residual_fn) {
    IdentityRecord& r = records_.at(tag);
    double residual;
    try {
      residual = residual_fn();
    } catch (const std::exception&) {
      residual = std::numeric_limits<double>::infinity();
    }
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    ++r.trials;
    r.max_residual = std::max(r.max_residual, residual);
    if (!(residual <= r.tolerance)) r.passed = false;
  }

  VerificationReport report(std::uint64_t seed) const {
    VerificationReport rep;
    rep.seed = seed;
    for (const auto& tag : order_) rep.records.push_back(records_.at(tag));
    rep.finalize();
    return rep;
  }

 private:
  std::vector<std::string> order_;
  std::map<std::string, IdentityRecord> records_;
};

double scalar_residual(double lhs, double rhs, double scale) {
  return std::abs(lhs - rhs) / (1.0 + scale);
}

double vector_residual(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return relative_difference(a, b);
}

/// Euclidean coordinate gradient from the trace-form gradient.
Eigen::VectorXd coordinate_gradient(const Element& g) {
  return g.coords.cwiseProduct(g.algebra.metric());
}

}  // namespace

VerificationReport verify_self_scaled(const BarrierOracle& o, const VerifyOptions& options) {
  if (options.trials < 1) throw InputError("verification needs at least one trial");
  if (!(options.tol > 0.0)) throw InputError("verification tolerance must be positive");

  const double tol = options.tol;
  const double nu = o.nu;
  RecordSet rs;
  rs.declare("log-homogeneous", "F(tx) = F(x) - nu ln t", tol);
  rs.declare("ss-1", "F''(w)x lies in the interior of the cone", tol);
  rs.declare("ss-2", "F*(F''(w)x) = F(x) - 2F(w) - nu", tol);
  rs.declare("sym-2", "F(F''(w)x) = F(x) - 2F(w) + 2F(e)", tol);
  rs.declare("lemma2.4", "F(F''(w)x) - F(x) does not depend on x", tol);
  rs.declare("c(w)", "F(F''(w)x) - F(x) = -2F(w) + 2F(e)", tol);
  rs.declare("F*=F", "F*(x) = F(x) - 2F(e) - nu", tol);
  rs.declare("F''(e)=I", "Hessian at the F-unit is the identity", tol);
  rs.declare("ff1stversion", "F''(x) = F''(w) F*''(F''(w)x) F''(w)", tol);
  rs.declare("fundamental", "P(P(w)x) = P(w)P(x)P(w) with P = F''^{-1}", tol);
  rs.declare("prop2.1-i", "-F'(x) = F''(x)x and lies in the interior", tol);
  rs.declare("prop2.1-ii", "-F*'(-F'(x)) = x", tol);
  rs.declare("prop2.1-iii", "F*''(-F'(x)) = F''(x)^{-1}", tol);
  rs.declare("prop2.1-iv", "<x, -F'(x)> = nu", tol);
  rs.declare("prop2.1-v", "F'(tx) = F'(x)/t and F''(tx) = F''(x)/t^2", tol);
  rs.declare("prop2.1-vi", "F*(-F'(x)) = -nu - F(x)", tol);
  rs.declare("prop2.1-vii", "F(x) + F*(s) >= -nu - nu ln nu - nu ln <x,s>", 1e-10);
  rs.declare("gradient-fd", "gradient matches central differences", options.gradient_fd_tol);
  rs.declare("hessian-fd", "Hessian matches second differences", options.hessian_fd_tol);
  rs.declare("hessian-pd", "Hessian is symmetric positive definite", tol);
  if (o.scaling_point) rs.declare("scaling-point", "F''(w)x = s at the computed w", tol);

  Rng rng(options.seed);
  std::uniform_real_distribution<double> log_t(-1.5, 1.5);
  const Element& e = o.unit;
  const int n = o.cone.dim();
  const Eigen::VectorXd& metric = o.cone.metric();

  for (int trial = 0; trial < options.trials; ++trial) {
    const Element x = random_interior(o.cone, rng);
    const Element x2 = random_interior(o.cone, rng);
    const Element w = random_interior(o.cone, rng);
    const Element s = random_interior(o.cone, rng);
    const double t = std::exp(log_t(rng));
    Eigen::VectorXd direction = random_gaussian(n, rng);
    direction.normalize();

    rs.check("log-homogeneous", [&] {
      const double fx = o.value(x);
      return scalar_residual(o.value(t * x), fx - nu * std::log(t),
                             std::abs(fx) + nu * std::abs(std::log(t)));
    });
    rs.check("ss-1", [&] {
      const Element y(o.cone, o.hessian(w) * x.coords);
      return is_interior(y) ? 0.0 : 1.0;
    });
    rs.check("ss-2", [&] {
      const Element y(o.cone, o.hessian(w) * x.coords);
      const double lhs = o.dual_value(y);
      const double fx = o.value(x), fw = o.value(w);
      return scalar_residual(lhs, fx - 2.0 * fw - nu,
                             std::abs(lhs) + std::abs(fx) + 2.0 * std::abs(fw) + nu);
    });
    rs.check("sym-2", [&] {
      const Element y(o.cone, o.hessian(w) * x.coords);
      const double lhs = o.value(y);
      const double fx = o.value(x), fw = o.value(w), fe = o.value(e);
      return scalar_residual(lhs, fx - 2.0 * fw + 2.0 * fe,
                             std::abs(lhs) + std::abs(fx) + 2.0 * std::abs(fw) + 2.0 * std::abs(fe));
    });
    rs.check("lemma2.4", [&] {
      const LinearOperator hw = o.hessian(w);
      const double fx = o.value(x), fx2 = o.value(x2);
      const double fy = o.value(Element(o.cone, hw * x.coords));
      const double fy2 = o.value(Element(o.cone, hw * x2.coords));
      return scalar_residual(fy - fx, fy2 - fx2,
                             std::abs(fx) + std::abs(fx2) + std::abs(fy) + std::abs(fy2));
    });
    rs.check("c(w)", [&] {
      const double fx = o.value(x), fw = o.value(w), fe = o.value(e);
      const double fy = o.value(Element(o.cone, o.hessian(w) * x.coords));
      return scalar_residual(fy - fx, -2.0 * fw + 2.0 * fe,
                             std::abs(fy) + std::abs(fx) + 2.0 * std::abs(fw) + 2.0 * std::abs(fe));
    });
    rs.check("F*=F", [&] {
      const double lhs = o.dual_value(x);
      const double fx = o.value(x), fe = o.value(e);
      return scalar_residual(lhs, fx - 2.0 * fe - nu,
                             std::abs(lhs) + std::abs(fx) + 2.0 * std::abs(fe) + nu);
    });
    rs.check("F''(e)=I", [&] {
      return relative_difference(o.hessian(e), LinearOperator::Identity(n, n));
    });
    rs.check("ff1stversion", [&] {
      const LinearOperator hw = o.hessian(w);
      const Element y(o.cone, hw * x.coords);
      return relative_difference(o.hessian(x), hw * o.dual_hessian(y) * hw);
    });
    rs.check("fundamental", [&] {
      // Inverted form: F''(P(w)x) = F''(w) F''(x) F''(w), one linear solve.
      const LinearOperator hw = o.hessian(w);
      const Element pwx(o.cone, hw.ldlt().solve(x.coords));
      return relative_difference(o.hessian(pwx), hw * o.hessian(x) * hw);
    });
    rs.check("prop2.1-i", [&] {
      const Element minus_g = -o.gradient(x);
      if (!is_interior(minus_g)) return 1.0;
      return vector_residual(minus_g.coords, o.hessian(x) * x.coords);
    });
    rs.check("prop2.1-ii", [&] {
      const Element minus_g = -o.gradient(x);
      return vector_residual(-o.dual_gradient(minus_g).coords, x.coords);
    });
    rs.check("prop2.1-iii", [&] {
      const Element minus_g = -o.gradient(x);
      return relative_difference(o.dual_hessian(minus_g), o.hessian(x).inverse());
    });
    rs.check("prop2.1-iv", [&] {
      return std::abs(inner(x, -o.gradient(x)) - nu) / nu;
    });
    rs.check("prop2.1-v", [&] {
      const Element tx = t * x;
      const double r1 = vector_residual(o.gradient(tx).coords, o.gradient(x).coords / t);
      const double r2 = relative_difference(o.hessian(tx), o.hessian(x) / (t * t));
      return std::max(r1, r2);
    });
    rs.check("prop2.1-vi", [&] {
      const double lhs = o.dual_value(-o.gradient(x));
      const double fx = o.value(x);
      return scalar_residual(lhs, -nu - fx, std::abs(lhs) + nu + std::abs(fx));
    });
    rs.check("prop2.1-vii", [&] {
      const double lhs = o.value(x) + o.dual_value(s);
      const double rhs = -nu - nu * std::log(nu) - nu * std::log(inner(x, s));
      return std::max(0.0, rhs - lhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
    });
    rs.check("gradient-fd", [&] {
      const double h = 1e-5 * x.coords.norm();
      Eigen::VectorXd fd(n);
      for (int i = 0; i < n; ++i) {
        Element plus = x, minus = x;
        plus.coords(i) += h;
        minus.coords(i) -= h;
        fd(i) = (o.value(plus) - o.value(minus)) / (2.0 * h);
      }
      return vector_residual(fd, coordinate_gradient(o.gradient(x)));
    });
    rs.check("hessian-fd", [&] {
      const double h = 1e-4 * x.coords.norm();
      const Element plus(o.cone, x.coords + h * direction);
      const Element minus(o.cone, x.coords - h * direction);
      const double second = (o.value(plus) - 2.0 * o.value(x) + o.value(minus)) / (h * h);
      const Eigen::VectorXd hd = o.hessian(x) * direction;
      const double predicted = direction.dot(metric.cwiseProduct(hd));
      return std::abs(second - predicted) / std::abs(predicted);
    });
    rs.check("hessian-pd", [&] {
      const Eigen::MatrixXd gh = metric.asDiagonal() * o.hessian(x);
      const double asym = relative_difference(gh, gh.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (gh + gh.transpose()),
                                                         Eigen::EigenvaluesOnly);
      return eig.eigenvalues()(0) > 0.0 ? asym : 1.0;
    });
    if (o.scaling_point) {
      rs.check("scaling-point", [&] {
        const Element ws = o.scaling_point(x, s);
        if (!is_interior(ws)) return 1.0;
        return (o.hessian(ws) * x.coords - s.coords).norm() / s.coords.norm();
      });
    }
  }
  return rs.report(options.seed);
}

VerificationReport verify_self_scaled(const SelfScaledBarrier& barrier,
                                      const VerifyOptions& options) {
  return verify_self_scaled(as_oracle(barrier), options);
}

}  // namespace symcone
