#include "symcone/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "jordan_internal.hpp"
#include "symcone/errors.hpp"

namespace symcone {

namespace svec {

int size(int k) { return k * (k + 1) / 2; }

int order(int packed_length) {
  const int k = static_cast<int>(std::lround((std::sqrt(8.0 * packed_length + 1.0) - 1.0) / 2.0));
  if (size(k) != packed_length) {
    throw DimensionError("length " + std::to_string(packed_length) + " is not a triangular number");
  }
  return k;
}

Eigen::VectorXd pack(const Eigen::MatrixXd& m) {
  const int k = static_cast<int>(m.rows());
  Eigen::VectorXd v(size(k));
  int pos = 0;
  for (int i = 0; i < k; ++i) {
    v(pos++) = m(i, i);
    for (int j = i + 1; j < k; ++j) v(pos++) = std::numbers::sqrt2 * 0.5 * (m(i, j) + m(j, i));
  }
  return v;
}

Eigen::MatrixXd unpack(const Eigen::VectorXd& v, int k) {
  if (v.size() != size(k)) throw DimensionError("svec length does not match matrix order");
  Eigen::MatrixXd m(k, k);
  int pos = 0;
  for (int i = 0; i < k; ++i) {
    m(i, i) = v(pos++);
    for (int j = i + 1; j < k; ++j) {
      m(i, j) = m(j, i) = v(pos++) / std::numbers::sqrt2;
    }
  }
  return m;
}

}  // namespace svec

namespace detail {

namespace {

struct Piece {
  double value;
  Eigen::VectorXd idempotent;
};

// Lanczos sweep of L(z) started at `unit`. The Krylov space is R[z], on which
// L(z) is diagonal in the basis of spectral idempotents.
std::vector<Piece> krylov_pieces(const StructureTensor& t, const Eigen::VectorXd& unit,
                                 const Eigen::VectorXd& z) {
  const int n = t.dim();
  const Eigen::MatrixXd lz = t.multiplication_operator(z);
  const double scale = std::max(lz.norm(), std::numeric_limits<double>::min());

  Eigen::MatrixXd q(n, n);
  q.col(0) = unit / unit.norm();
  int d = 1;
  while (d < n) {
    Eigen::VectorXd v = lz * q.col(d - 1);
    for (int pass = 0; pass < 2; ++pass) {
      v -= q.leftCols(d) * (q.leftCols(d).transpose() * v);
    }
    const double nv = v.norm();
    if (nv <= 1e-9 * scale) break;
    q.col(d++) = v / nv;
  }
  const Eigen::MatrixXd basis = q.leftCols(d);
  Eigen::MatrixXd h = basis.transpose() * lz * basis;
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);

  std::vector<Piece> pieces;
  pieces.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXd p = basis * es.eigenvectors().col(j);
    const double alpha = t.product(p, p).dot(p) / p.dot(p);
    pieces.push_back({es.eigenvalues()(j), p / alpha});
  }
  return pieces;
}

void refine(const StructureTensor& t, const Eigen::VectorXd& c, double value,
            std::mt19937_64& rng, int depth, std::vector<Piece>& out) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd y(t.dim());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);
  const Eigen::VectorXd cy = t.product(c, y);
  const Eigen::VectorXd z = 2.0 * t.product(c, cy) - cy;  // P(c) y lies in E(c, 1)
  auto pieces = krylov_pieces(t, c, z);
  if (pieces.size() == 1 || depth > t.dim()) {
    out.push_back({value, c});
    return;
  }
  for (const Piece& p : pieces) refine(t, p.idempotent, value, rng, depth + 1, out);
}

LeafSpectrum sorted(std::vector<double> values, std::vector<Eigen::VectorXd> frame) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  LeafSpectrum out;
  out.values.resize(static_cast<Eigen::Index>(values.size()));
  out.frame.reserve(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.values(static_cast<Eigen::Index>(i)) = values[order[i]];
    out.frame.push_back(std::move(frame[order[i]]));
  }
  return out;
}

}  // namespace

LeafSpectrum tensor_spectrum(const StructureTensor& t, const Eigen::VectorXd& unit,
                             const Eigen::VectorXd& z) {
  std::mt19937_64 rng(0x5eedULL);
  std::vector<Piece> primitive;
  for (const Piece& p : krylov_pieces(t, unit, z)) refine(t, p.idempotent, p.value, rng, 0, primitive);
  std::vector<double> values;
  std::vector<Eigen::VectorXd> frame;
  for (auto& p : primitive) {
    values.push_back(p.value);
    frame.push_back(std::move(p.idempotent));
  }
  return sorted(std::move(values), std::move(frame));
}

int custom_rank(const StructureTensor& t, const Eigen::VectorXd& unit) {
  std::mt19937_64 rng(0xa11ce5ULL);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(t.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  return static_cast<int>(tensor_spectrum(t, unit, z).frame.size());
}

Eigen::VectorXd leaf_product(const LeafInfo& leaf, const Eigen::VectorXd& a,
                             const Eigen::VectorXd& b) {
  switch (leaf.family) {
    case Family::Orthant: return a.cwiseProduct(b);
    case Family::Lorentz: {
      Eigen::VectorXd out(a.size());
      const Eigen::Index m = a.size() - 1;
      out(0) = a.dot(b);
      out.tail(m) = a(0) * b.tail(m) + b(0) * a.tail(m);
      return out;
    }
    case Family::SymPSD: {
      const Eigen::MatrixXd x = svec::unpack(a, leaf.param);
      const Eigen::MatrixXd y = svec::unpack(b, leaf.param);
      const Eigen::MatrixXd xy = x * y;
      return svec::pack(0.5 * (xy + xy.transpose()));
    }
    case Family::Custom: return leaf.tensor->product(a, b);
    case Family::DirectSum: break;
  }
  throw InputError("unsupported leaf family");
}

Eigen::MatrixXd leaf_multiplication(const LeafInfo& leaf, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  switch (leaf.family) {
    case Family::Orthant: return x.asDiagonal();
    case Family::Lorentz: {
      Eigen::MatrixXd op = x(0) * Eigen::MatrixXd::Identity(n, n);
      op.row(0).tail(n - 1) = x.tail(n - 1).transpose();
      op.col(0).tail(n - 1) = x.tail(n - 1);
      return op;
    }
    case Family::SymPSD: {
      const Eigen::MatrixXd xm = svec::unpack(x, leaf.param);
      Eigen::MatrixXd op(n, n);
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        unit(j) = 1.0;
        const Eigen::MatrixXd prod = xm * svec::unpack(unit, leaf.param);
        op.col(j) = svec::pack(0.5 * (prod + prod.transpose()));
        unit(j) = 0.0;
      }
      return op;
    }
    case Family::Custom: return leaf.tensor->multiplication_operator(x);
    case Family::DirectSum: break;
  }
  throw InputError("unsupported leaf family");
}

Eigen::MatrixXd leaf_quadratic(const LeafInfo& leaf, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  switch (leaf.family) {
    case Family::Orthant: return x.cwiseAbs2().asDiagonal();
    case Family::Lorentz: {
      // P(x) = 2 x x^T - det(x) R with R = diag(1, -1, ..., -1)
      const double det = x(0) * x(0) - x.tail(n - 1).squaredNorm();
      Eigen::MatrixXd op = 2.0 * x * x.transpose();
      op(0, 0) -= det;
      op.diagonal().tail(n - 1).array() += det;
      return op;
    }
    case Family::SymPSD: {
      const Eigen::MatrixXd xm = svec::unpack(x, leaf.param);
      Eigen::MatrixXd op(n, n);
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        unit(j) = 1.0;
        op.col(j) = svec::pack(xm * svec::unpack(unit, leaf.param) * xm);
        unit(j) = 0.0;
      }
      return op;
    }
    case Family::Custom: {
      const Eigen::MatrixXd lx = leaf.tensor->multiplication_operator(x);
      const Eigen::MatrixXd lx2 = leaf.tensor->multiplication_operator(leaf.tensor->product(x, x));
      return 2.0 * lx * lx - lx2;
    }
    case Family::DirectSum: break;
  }
  throw InputError("unsupported leaf family");
}

LeafSpectrum leaf_spectrum(const LeafInfo& leaf, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  std::vector<double> values;
  std::vector<Eigen::VectorXd> frame;
  switch (leaf.family) {
    case Family::Orthant:
      for (Eigen::Index i = 0; i < n; ++i) {
        values.push_back(x(i));
        frame.push_back(Eigen::VectorXd::Unit(n, i));
      }
      break;
    case Family::Lorentz: {
      const double r = x.tail(n - 1).norm();
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n - 1);
      if (r > 0.0) {
        v = x.tail(n - 1) / r;
      } else {
        v(0) = 1.0;
      }
      Eigen::VectorXd e1(n), e2(n);
      e1 << 0.5, 0.5 * v;
      e2 << 0.5, -0.5 * v;
      values = {x(0) + r, x(0) - r};
      frame = {e1, e2};
      break;
    }
    case Family::SymPSD: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(svec::unpack(x, leaf.param));
      for (int i = 0; i < leaf.param; ++i) {
        const Eigen::VectorXd q = es.eigenvectors().col(i);
        values.push_back(es.eigenvalues()(i));
        frame.push_back(svec::pack(q * q.transpose()));
      }
      break;
    }
    case Family::Custom:
      return tensor_spectrum(*leaf.tensor, *leaf.unit, x);
    case Family::DirectSum:
      throw InputError("unsupported leaf family");
  }
  return sorted(std::move(values), std::move(frame));
}

}  // namespace detail

namespace {

Eigen::VectorXd segment(const Element& x, const LeafInfo& leaf) {
  return x.coords.segment(leaf.offset, leaf.dim);
}

}  // namespace

Element SpectralDecomposition::reconstruct(const std::function<double(double)>& f) const {
  if (frame.empty()) throw DimensionError("empty spectral decomposition");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(frame.front().dim());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    out += f(eigenvalues(static_cast<Eigen::Index>(i))) * frame[i].coords;
  }
  return Element(frame.front().algebra, std::move(out));
}

Element SpectralDecomposition::reconstruct() const {
  return reconstruct([](double v) { return v; });
}

Element jordan_product(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  Eigen::VectorXd out(a.dim());
  for (const LeafInfo& leaf : a.algebra.leaves()) {
    out.segment(leaf.offset, leaf.dim) = detail::leaf_product(leaf, segment(a, leaf), segment(b, leaf));
  }
  return Element(a.algebra, std::move(out));
}

LinearOperator multiplication_operator(const Element& x) {
  LinearOperator op = LinearOperator::Zero(x.dim(), x.dim());
  for (const LeafInfo& leaf : x.algebra.leaves()) {
    op.block(leaf.offset, leaf.offset, leaf.dim, leaf.dim) =
        detail::leaf_multiplication(leaf, segment(x, leaf));
  }
  return op;
}

LinearOperator quadratic_representation(const Element& x) {
  LinearOperator op = LinearOperator::Zero(x.dim(), x.dim());
  for (const LeafInfo& leaf : x.algebra.leaves()) {
    op.block(leaf.offset, leaf.offset, leaf.dim, leaf.dim) =
        detail::leaf_quadratic(leaf, segment(x, leaf));
  }
  return op;
}

double inner(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  return (a.coords.array() * b.coords.array() * a.algebra.metric().array()).sum();
}

double norm(const Element& x) { return std::sqrt(inner(x, x)); }

double trace(const Element& x) {
  double total = 0.0;
  for (const LeafInfo& leaf : x.algebra.leaves()) {
    const Eigen::VectorXd s = segment(x, leaf);
    switch (leaf.family) {
      case Family::Orthant: total += s.sum(); break;
      case Family::Lorentz: total += 2.0 * s(0); break;
      case Family::SymPSD: total += svec::unpack(s, leaf.param).trace(); break;
      default: total += detail::leaf_spectrum(leaf, s).values.sum(); break;
    }
  }
  return total;
}

SpectralDecomposition spectral_decompose(const Element& x) {
  std::vector<double> values;
  std::vector<Element> frame;
  values.reserve(static_cast<std::size_t>(x.algebra.rank()));
  for (const LeafInfo& leaf : x.algebra.leaves()) {
    auto spectrum = detail::leaf_spectrum(leaf, segment(x, leaf));
    for (std::size_t i = 0; i < spectrum.frame.size(); ++i) {
      Eigen::VectorXd full = Eigen::VectorXd::Zero(x.dim());
      full.segment(leaf.offset, leaf.dim) = spectrum.frame[i];
      values.push_back(spectrum.values(static_cast<Eigen::Index>(i)));
      frame.emplace_back(x.algebra, std::move(full));
    }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  SpectralDecomposition out;
  out.eigenvalues.resize(static_cast<Eigen::Index>(values.size()));
  out.frame.reserve(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.eigenvalues(static_cast<Eigen::Index>(i)) = values[order[i]];
    out.frame.push_back(frame[order[i]]);
  }
  return out;
}

Eigen::VectorXd eigenvalues(const Element& x) {
  std::vector<double> values;
  for (const LeafInfo& leaf : x.algebra.leaves()) {
    const Eigen::VectorXd s = segment(x, leaf);
    switch (leaf.family) {
      case Family::Orthant:
        for (Eigen::Index i = 0; i < s.size(); ++i) values.push_back(s(i));
        break;
      case Family::Lorentz: {
        const double r = s.tail(s.size() - 1).norm();
        values.push_back(s(0) + r);
        values.push_back(s(0) - r);
        break;
      }
      case Family::SymPSD: {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(svec::unpack(s, leaf.param),
                                                          Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) values.push_back(es.eigenvalues()(i));
        break;
      }
      default: {
        const auto spectrum = detail::leaf_spectrum(leaf, s);
        for (Eigen::Index i = 0; i < spectrum.values.size(); ++i) values.push_back(spectrum.values(i));
        break;
      }
    }
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

double min_eigenvalue(const Element& x) { return eigenvalues(x).minCoeff(); }

double determinant(const Element& x) {
  double det = 1.0;
  for (const LeafInfo& leaf : x.algebra.leaves()) {
    const Eigen::VectorXd s = segment(x, leaf);
    switch (leaf.family) {
      case Family::Orthant: det *= s.prod(); break;
      case Family::Lorentz: det *= s(0) * s(0) - s.tail(s.size() - 1).squaredNorm(); break;
      default: det *= detail::leaf_spectrum(leaf, s).values.prod(); break;
    }
  }
  return det;
}

double log_determinant(const Element& x) {
  const Eigen::VectorXd values = eigenvalues(x);
  if (!(values.minCoeff() > 0.0)) {
    throw DomainError("log determinant requires an interior point (min eigenvalue " +
                      std::to_string(values.minCoeff()) + ")");
  }
  return values.array().log().sum();
}

Element apply_spectral(const Element& x, const std::function<double(double)>& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.dim());
  for (const LeafInfo& leaf : x.algebra.leaves()) {
    const Eigen::VectorXd s = segment(x, leaf);
    if (leaf.family == Family::Orthant) {
      out.segment(leaf.offset, leaf.dim) = s.unaryExpr(f);
      continue;
    }
    if (leaf.family == Family::SymPSD) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(svec::unpack(s, leaf.param));
      const Eigen::VectorXd mapped = es.eigenvalues().unaryExpr(f);
      out.segment(leaf.offset, leaf.dim) =
          svec::pack(es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose());
      continue;
    }
    const auto spectrum = detail::leaf_spectrum(leaf, s);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(leaf.dim);
    for (std::size_t i = 0; i < spectrum.frame.size(); ++i) {
      acc += f(spectrum.values(static_cast<Eigen::Index>(i))) * spectrum.frame[i];
    }
    out.segment(leaf.offset, leaf.dim) = acc;
  }
  return Element(x.algebra, std::move(out));
}

Element inverse(const Element& x) {
  const Eigen::VectorXd values = eigenvalues(x);
  if ((values.array() == 0.0).any() || !values.allFinite()) {
    throw DomainError("inverse of a singular element");
  }
  return apply_spectral(x, [](double v) { return 1.0 / v; });
}

Element sqrt(const Element& x) {
  const double lo = min_eigenvalue(x);
  if (lo < 0.0) {
    throw DomainError("square root of an element with negative eigenvalue " + std::to_string(lo));
  }
  return apply_spectral(x, [](double v) { return std::sqrt(v); });
}

Element scale_power(const Element& x, double t) {
  const bool integral = std::floor(t) == t && t >= 0.0;
  if (!integral && !(min_eigenvalue(x) > 0.0)) {
    throw DomainError("non-integral power of a non-interior element");
  }
  return apply_spectral(x, [t](double v) { return std::pow(v, t); });
}

Element exp(const Element& x) {
  return apply_spectral(x, [](double v) { return std::exp(v); });
}

Membership membership(const Element& x, double tol) {
  if (!(tol > 0.0)) throw InputError("membership tolerance must be positive");
  const double lo = min_eigenvalue(x);
  if (lo > tol) return Membership::Interior;
  if (lo < -tol) return Membership::Exterior;
  return Membership::Boundary;
}

bool is_interior(const Element& x) {
  if (!x.coords.allFinite()) return false;
  return min_eigenvalue(x) > 0.0;
}

double max_step_to_boundary(const Element& x, const Element& dx) {
  require_same_algebra(x, dx);
  double alpha = std::numeric_limits<double>::infinity();
  for (const LeafInfo& leaf : x.algebra.leaves()) {
    const Eigen::VectorXd xs = segment(x, leaf);
    const Eigen::VectorXd ds = segment(dx, leaf);
    double lowest = 0.0;
    if (leaf.family == Family::Orthant) {
      lowest = ds.cwiseQuotient(xs).minCoeff();
    } else {
      // x + a dx in K  <=>  e + a P(x^{-1/2}) dx in K
      const auto spectrum = detail::leaf_spectrum(leaf, xs);
      if (!(spectrum.values.minCoeff() > 0.0)) {
        throw DomainError("step length requires an interior base point");
      }
      Eigen::VectorXd root_inv = Eigen::VectorXd::Zero(leaf.dim);
      for (std::size_t i = 0; i < spectrum.frame.size(); ++i) {
        root_inv += spectrum.frame[i] / std::sqrt(spectrum.values(static_cast<Eigen::Index>(i)));
      }
      const Eigen::VectorXd scaled = detail::leaf_quadratic(leaf, root_inv) * ds;
      lowest = detail::leaf_spectrum(leaf, scaled).values.minCoeff();
    }
    if (lowest < 0.0) alpha = std::min(alpha, -1.0 / lowest);
  }
  return alpha;
}

LinearOperator adjoint(const Algebra& algebra, const LinearOperator& a) {
  const Eigen::VectorXd& g = algebra.metric();
  return g.cwiseInverse().asDiagonal() * a.transpose() * g.asDiagonal();
}

}  // namespace symcone
