#include "symcone/algebra.hpp"

#include <cmath>
#include <sstream>

#include "jordan_internal.hpp"
#include "symcone/errors.hpp"

namespace symcone {

std::string to_string(Family family) {
  switch (family) {
    case Family::Orthant: return "orthant";
    case Family::Lorentz: return "lorentz";
    case Family::SymPSD: return "sympsd";
    case Family::DirectSum: return "sum";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

struct Algebra::Node {
  Family family = Family::Orthant;
  int param = 0;
  int dim = 0;
  int rank = 0;
  std::vector<Algebra> summands;
  std::shared_ptr<const StructureTensor> tensor;
  std::shared_ptr<const Eigen::VectorXd> unit;
  std::vector<LeafInfo> leaves;
  std::vector<IrreducibleBlock> blocks;
  Eigen::VectorXd metric;
};

namespace {

void append_leaf(std::vector<LeafInfo>& leaves, std::vector<IrreducibleBlock>& blocks,
                 LeafInfo leaf) {
  leaf.first_block = static_cast<int>(blocks.size());
  const int leaf_index = static_cast<int>(leaves.size());
  if (leaf.family == Family::Orthant) {
    for (int i = 0; i < leaf.dim; ++i) {
      blocks.push_back({leaf_index, leaf.offset + i, 1, 1});
    }
  } else {
    blocks.push_back({leaf_index, leaf.offset, leaf.dim, leaf.rank});
  }
  leaves.push_back(std::move(leaf));
}

Eigen::VectorXd leaf_metric(Family family, int dim) {
  if (family == Family::Lorentz) return Eigen::VectorXd::Constant(dim, 2.0);
  return Eigen::VectorXd::Ones(dim);
}

}  // namespace

Algebra::Algebra(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Algebra Algebra::orthant(int n) {
  if (n < 1) throw InputError("orthant dimension must be >= 1");
  auto node = std::make_shared<Node>();
  node->family = Family::Orthant;
  node->param = n;
  node->dim = n;
  node->rank = n;
  node->metric = leaf_metric(Family::Orthant, n);
  append_leaf(node->leaves, node->blocks, {Family::Orthant, n, 0, n, n, 0, nullptr, nullptr});
  return Algebra(std::move(node));
}

Algebra Algebra::lorentz(int n) {
  if (n < 1) throw InputError("lorentz parameter must be >= 1");
  auto node = std::make_shared<Node>();
  node->family = Family::Lorentz;
  node->param = n;
  node->dim = n + 1;
  node->rank = 2;
  node->metric = leaf_metric(Family::Lorentz, n + 1);
  append_leaf(node->leaves, node->blocks, {Family::Lorentz, n, 0, n + 1, 2, 0, nullptr, nullptr});
  return Algebra(std::move(node));
}

Algebra Algebra::sym_psd(int k) {
  if (k < 1) throw InputError("sympsd order must be >= 1");
  auto node = std::make_shared<Node>();
  node->family = Family::SymPSD;
  node->param = k;
  node->dim = k * (k + 1) / 2;
  node->rank = k;
  node->metric = leaf_metric(Family::SymPSD, node->dim);
  append_leaf(node->leaves, node->blocks,
              {Family::SymPSD, k, 0, node->dim, k, 0, nullptr, nullptr});
  return Algebra(std::move(node));
}

Algebra Algebra::direct_sum(std::vector<Algebra> summands) {
  if (summands.empty()) throw InputError("direct sum needs at least one summand");
  auto node = std::make_shared<Node>();
  node->family = Family::DirectSum;
  for (const auto& s : summands) {
    node->dim += s.dim();
    node->rank += s.rank();
  }
  node->metric.resize(node->dim);
  int offset = 0;
  for (const auto& s : summands) {
    node->metric.segment(offset, s.dim()) = s.metric();
    for (LeafInfo leaf : s.leaves()) {
      leaf.offset += offset;
      append_leaf(node->leaves, node->blocks, std::move(leaf));
    }
    offset += s.dim();
  }
  node->summands = std::move(summands);
  return Algebra(std::move(node));
}

Algebra Algebra::custom(StructureTensor tensor) {
  tensor.validate();
  auto node = std::make_shared<Node>();
  node->family = Family::Custom;
  node->dim = tensor.dim();
  auto shared = std::make_shared<const StructureTensor>(std::move(tensor));
  auto unit = std::make_shared<const Eigen::VectorXd>(shared->identity());
  node->rank = detail::custom_rank(*shared, *unit);
  node->tensor = shared;
  node->unit = unit;
  node->metric = Eigen::VectorXd::Ones(node->dim);
  LeafInfo leaf{Family::Custom, 0, 0, node->dim, node->rank, 0, shared, unit};
  append_leaf(node->leaves, node->blocks, std::move(leaf));
  return Algebra(std::move(node));
}

Family Algebra::family() const { return node_->family; }
int Algebra::param() const { return node_->param; }
int Algebra::dim() const { return node_->dim; }
int Algebra::rank() const { return node_->rank; }
const std::vector<Algebra>& Algebra::summands() const { return node_->summands; }

const StructureTensor& Algebra::tensor() const {
  if (!node_->tensor) throw InputError("algebra has no structure tensor attached");
  return *node_->tensor;
}

const std::vector<LeafInfo>& Algebra::leaves() const { return node_->leaves; }
const std::vector<IrreducibleBlock>& Algebra::irreducible_blocks() const {
  return node_->blocks;
}
const Eigen::VectorXd& Algebra::metric() const { return node_->metric; }

Algebra Algebra::leaf_algebra(int i) const {
  const LeafInfo& leaf = node_->leaves.at(static_cast<std::size_t>(i));
  switch (leaf.family) {
    case Family::Orthant: return orthant(leaf.param);
    case Family::Lorentz: return lorentz(leaf.param);
    case Family::SymPSD: return sym_psd(leaf.param);
    case Family::Custom: {
      if (node_->family == Family::Custom) return *this;
      auto node = std::make_shared<Node>();
      node->family = Family::Custom;
      node->dim = leaf.dim;
      node->rank = leaf.rank;
      node->tensor = leaf.tensor;
      node->unit = leaf.unit;
      node->metric = Eigen::VectorXd::Ones(leaf.dim);
      LeafInfo copy = leaf;
      copy.offset = 0;
      append_leaf(node->leaves, node->blocks, std::move(copy));
      return Algebra(std::move(node));
    }
    case Family::DirectSum: break;
  }
  throw InputError("leaf cannot be a direct sum");
}

std::vector<std::string> Algebra::basis_labels() const {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(dim()));
  const bool prefixed = node_->leaves.size() > 1;
  for (std::size_t l = 0; l < node_->leaves.size(); ++l) {
    const LeafInfo& leaf = node_->leaves[l];
    const std::string prefix = prefixed ? "b" + std::to_string(l) + "." : "";
    switch (leaf.family) {
      case Family::Orthant:
        for (int i = 0; i < leaf.dim; ++i) labels.push_back(prefix + "x" + std::to_string(i));
        break;
      case Family::Lorentz:
        labels.push_back(prefix + "tau");
        for (int i = 1; i < leaf.dim; ++i) labels.push_back(prefix + "xbar" + std::to_string(i));
        break;
      case Family::SymPSD:
        for (int i = 0; i < leaf.param; ++i)
          for (int j = i; j < leaf.param; ++j)
            labels.push_back(prefix + "X(" + std::to_string(i) + "," + std::to_string(j) + ")");
        break;
      case Family::Custom:
      case Family::DirectSum:
        for (int i = 0; i < leaf.dim; ++i) labels.push_back(prefix + "c" + std::to_string(i));
        break;
    }
  }
  return labels;
}

std::string Algebra::to_string() const {
  switch (family()) {
    case Family::DirectSum: {
      std::string out = "sum(";
      for (std::size_t i = 0; i < summands().size(); ++i) {
        if (i > 0) out += ",";
        out += summands()[i].to_string();
      }
      return out + ")";
    }
    case Family::Custom: return "custom:" + std::to_string(dim());
    default: return symcone::to_string(family()) + ":" + std::to_string(param());
  }
}

bool Algebra::operator==(const Algebra& other) const {
  if (node_ == other.node_) return true;
  if (family() != other.family() || param() != other.param() || dim() != other.dim()) {
    return false;
  }
  if (family() == Family::Custom) {
    return node_->tensor == other.node_->tensor || *node_->tensor == *other.node_->tensor;
  }
  if (family() == Family::DirectSum) {
    if (summands().size() != other.summands().size()) return false;
    for (std::size_t i = 0; i < summands().size(); ++i) {
      if (summands()[i] != other.summands()[i]) return false;
    }
  }
  return true;
}

Element::Element(Algebra alg, Eigen::VectorXd c) : algebra(std::move(alg)), coords(std::move(c)) {
  if (coords.size() != algebra.dim()) {
    std::ostringstream msg;
    msg << "element has " << coords.size() << " coordinates, algebra " << algebra.to_string()
        << " has dimension " << algebra.dim();
    throw DimensionError(msg.str());
  }
}

void require_same_algebra(const Element& a, const Element& b) {
  if (a.algebra != b.algebra) {
    throw DimensionError("algebra mismatch: " + a.algebra.to_string() + " vs " +
                         b.algebra.to_string());
  }
}

Element operator+(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  return Element(a.algebra, a.coords + b.coords);
}

Element operator-(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  return Element(a.algebra, a.coords - b.coords);
}

Element operator-(const Element& a) { return Element(a.algebra, -a.coords); }
Element operator*(double t, const Element& a) { return Element(a.algebra, t * a.coords); }
Element operator*(const Element& a, double t) { return t * a; }

Element zero(const Algebra& algebra) {
  return Element(algebra, Eigen::VectorXd::Zero(algebra.dim()));
}

Element identity(const Algebra& algebra) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(algebra.dim());
  for (const LeafInfo& leaf : algebra.leaves()) {
    switch (leaf.family) {
      case Family::Orthant: e.segment(leaf.offset, leaf.dim).setOnes(); break;
      case Family::Lorentz: e(leaf.offset) = 1.0; break;
      case Family::SymPSD: {
        int pos = leaf.offset;
        for (int i = 0; i < leaf.param; ++i) {
          e(pos) = 1.0;
          pos += leaf.param - i;
        }
        break;
      }
      case Family::Custom: e.segment(leaf.offset, leaf.dim) = *leaf.unit; break;
      case Family::DirectSum: break;
    }
  }
  return Element(algebra, std::move(e));
}

Element make_element(const Algebra& algebra, const std::vector<double>& coords) {
  return Element(algebra, Eigen::Map<const Eigen::VectorXd>(coords.data(),
                                                            static_cast<Eigen::Index>(coords.size())));
}

}  // namespace symcone
