#include "symcone/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "symcone/errors.hpp"

namespace symcone::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError("field '" + where + "': " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double number(const Json& j, const std::string& where) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

bool boolean(const Json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

Eigen::VectorXd vector(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(where + "[" + std::to_string(i) + "]", "expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json to_array(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

/// JSON has no infinity; non-finite values are written as null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void check_schema(const Json& j, const std::string& kind) {
  if (!j.is_object()) fail("", "document must be a JSON object");
  const int version = integer(field(j, "schema", ""), "schema");
  if (version != kSchemaVersion) {
    fail("schema", "unsupported version " + std::to_string(version) + " (expected 1)");
  }
  auto it = j.find("kind");
  if (it != j.end() && text(*it, "kind") != kind) {
    fail("kind", "expected \"" + kind + "\", got \"" + it->get<std::string>() + "\"");
  }
}

class SpecParser {
 public:
  explicit SpecParser(std::string s) : s_(std::move(s)) {}

  Algebra parse() {
    Algebra a = node();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing text");
    return a;
  }

 private:
  Algebra node() {
    skip();
    const std::string name = word();
    skip();
    if (name == "sum") {
      expect('(');
      std::vector<Algebra> children{node()};
      skip();
      while (peek() == ',') {
        ++pos_;
        children.push_back(node());
        skip();
      }
      expect(')');
      return Algebra::direct_sum(std::move(children));
    }
    expect(':');
    skip();
    const int n = count();
    if (name == "orthant") return Algebra::orthant(n);
    if (name == "lorentz") return Algebra::lorentz(n);
    if (name == "sympsd") return Algebra::sym_psd(n);
    error("unknown family '" + name + "'");
  }

  std::string word() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected a family name");
    std::string w = s_.substr(start, pos_ - start);
    for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return w;
  }

  int count() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected a positive integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void error(const std::string& what) const {
    throw InputError("cone spec \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

Json algebra_to_json(const Algebra& algebra) {
  switch (algebra.family()) {
    case Family::DirectSum: {
      Json children = Json::array();
      for (const auto& s : algebra.summands()) children.push_back(algebra_to_json(s));
      return {{"family", "sum"}, {"children", std::move(children)}};
    }
    case Family::Custom: {
      Json t = tensor_to_json(algebra.tensor());
      t.erase("schema");
      return {{"family", "custom"}, {"tensor", std::move(t)}};
    }
    default:
      return {{"family", to_string(algebra.family())}, {"param", algebra.param()}};
  }
}

Algebra algebra_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_cone_spec(j.get<std::string>());
  const std::string family = text(field(j, "family", where), join(where, "family"));
  if (family == "sum") {
    const Json& children = field(j, "children", where);
    const std::string cw = join(where, "children");
    if (!children.is_array() || children.empty()) fail(cw, "expected a non-empty array");
    std::vector<Algebra> parts;
    for (std::size_t i = 0; i < children.size(); ++i) {
      parts.push_back(algebra_from_json(children[i], cw + "[" + std::to_string(i) + "]"));
    }
    return Algebra::direct_sum(std::move(parts));
  }
  if (family == "custom") {
    Json t = field(j, "tensor", where);
    if (t.is_object() && !t.contains("schema")) t["schema"] = kSchemaVersion;
    return Algebra::custom(tensor_from_json(t));
  }
  const int param = integer(field(j, "param", where), join(where, "param"));
  if (param < 1) fail(join(where, "param"), "must be >= 1");
  if (family == "orthant") return Algebra::orthant(param);
  if (family == "lorentz") return Algebra::lorentz(param);
  if (family == "sympsd") return Algebra::sym_psd(param);
  fail(join(where, "family"), "unknown family \"" + family + "\"");
}

Algebra parse_cone_spec(const std::string& text) { return SpecParser(text).parse(); }

Json tensor_to_json(const StructureTensor& t) {
  const int n = t.dim();
  Json outer = Json::array();
  for (int i = 0; i < n; ++i) {
    Json mid = Json::array();
    for (int jj = 0; jj < n; ++jj) {
      Json inner = Json::array();
      for (int k = 0; k < n; ++k) inner.push_back(t(i, jj, k));
      mid.push_back(std::move(inner));
    }
    outer.push_back(std::move(mid));
  }
  return {{"schema", kSchemaVersion}, {"kind", "structure_tensor"}, {"dim", n}, {"T", std::move(outer)}};
}

StructureTensor tensor_from_json(const Json& j) {
  check_schema(j, "structure_tensor");
  const int n = integer(field(j, "dim", ""), "dim");
  if (n < 1) fail("dim", "must be >= 1");
  const Json& data = field(j, "T", "");
  auto shape_error = [&](const std::string& where) {
    fail(where, "expected an array of length " + std::to_string(n));
  };
  if (!data.is_array() || static_cast<int>(data.size()) != n) shape_error("T");
  StructureTensor t(n);
  for (int i = 0; i < n; ++i) {
    const std::string wi = "T[" + std::to_string(i) + "]";
    const Json& row = data[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) shape_error(wi);
    for (int jj = 0; jj < n; ++jj) {
      const std::string wj = wi + "[" + std::to_string(jj) + "]";
      const Json& fibre = row[static_cast<std::size_t>(jj)];
      if (!fibre.is_array() || static_cast<int>(fibre.size()) != n) shape_error(wj);
      for (int k = 0; k < n; ++k) {
        const Json& v = fibre[static_cast<std::size_t>(k)];
        if (!v.is_number()) fail(wj + "[" + std::to_string(k) + "]", "expected a number");
        t(i, jj, k) = v.get<double>();
      }
    }
  }
  return t;
}

SelfScaledBarrier ProblemFile::barrier() const {
  return SelfScaledBarrier(cone, weights.empty() ? std::vector<double>{1.0} : weights, offset);
}

ConicProblem ProblemFile::problem() const {
  return build_problem(cone, barrier(), l, Element(cone, x0), Element(cone, s0));
}

Json problem_to_json(const ProblemFile& p) {
  Json cols = Json::array();
  for (Eigen::Index c = 0; c < p.l.cols(); ++c) cols.push_back(to_array(p.l.col(c)));
  return {{"schema", kSchemaVersion}, {"kind", "problem"},
          {"cone", algebra_to_json(p.cone)}, {"weights", p.weights},
          {"offset", p.offset}, {"L", std::move(cols)},
          {"x0", to_array(p.x0)}, {"s0", to_array(p.s0)}};
}

ProblemFile problem_from_json(const Json& j) {
  check_schema(j, "problem");
  Algebra cone = algebra_from_json(field(j, "cone", ""), "cone");
  const int n = cone.dim();
  std::vector<double> weights;
  if (auto it = j.find("weights"); it != j.end()) {
    const Eigen::VectorXd w = vector(*it, "weights");
    weights.assign(w.data(), w.data() + w.size());
  }
  double offset = 0.0;
  if (auto it = j.find("offset"); it != j.end()) offset = number(*it, "offset");

  auto sized = [n](const Json& v, const std::string& where) {
    Eigen::VectorXd out = vector(v, where);
    if (out.size() != n) {
      fail(where, "expected " + std::to_string(n) + " coordinates, got " + std::to_string(out.size()));
    }
    return out;
  };
  Eigen::MatrixXd l(n, 0);
  if (auto it = j.find("L"); it != j.end()) {
    if (!it->is_array()) fail("L", "expected an array of columns");
    l.resize(n, static_cast<Eigen::Index>(it->size()));
    for (std::size_t c = 0; c < it->size(); ++c) {
      l.col(static_cast<Eigen::Index>(c)) = sized((*it)[c], "L[" + std::to_string(c) + "]");
    }
  }
  Eigen::VectorXd x0 = sized(field(j, "x0", ""), "x0");
  Eigen::VectorXd s0 = sized(field(j, "s0", ""), "s0");
  return ProblemFile{std::move(cone), std::move(weights), offset, std::move(l), std::move(x0),
                     std::move(s0)};
}

Json solution_to_json(const Solution& s) {
  Json history = Json::array();
  for (const auto& r : s.history) {
    history.push_back({{"iteration", r.iteration}, {"mu", r.mu}, {"gap", r.gap},
                       {"alpha", r.alpha}, {"orthogonality", r.orthogonality},
                       {"gap_identity", r.gap_identity}, {"scaling_residual", r.scaling_residual}});
  }
  return {{"schema", kSchemaVersion}, {"kind", "solution"},
          {"cone", algebra_to_json(s.x.algebra)}, {"status", to_string(s.status)},
          {"message", s.message}, {"objective", s.objective},
          {"dual_objective", s.dual_objective}, {"gap", s.gap},
          {"primal_residual", s.primal_residual}, {"dual_residual", s.dual_residual},
          {"iterations", s.iterations}, {"x", to_array(s.x.coords)},
          {"s", to_array(s.s.coords)}, {"history", std::move(history)}};
}

Solution solution_from_json(const Json& j) {
  check_schema(j, "solution");
  const Algebra cone = algebra_from_json(field(j, "cone", ""), "cone");
  Element x(cone, vector(field(j, "x", ""), "x"));
  Element s(cone, vector(field(j, "s", ""), "s"));
  Solution out{std::move(x), std::move(s)};
  out.status = solve_status_from_string(text(field(j, "status", ""), "status"));
  if (auto it = j.find("message"); it != j.end()) out.message = text(*it, "message");
  out.objective = number(field(j, "objective", ""), "objective");
  out.dual_objective = number(field(j, "dual_objective", ""), "dual_objective");
  out.gap = number(field(j, "gap", ""), "gap");
  out.primal_residual = number(field(j, "primal_residual", ""), "primal_residual");
  out.dual_residual = number(field(j, "dual_residual", ""), "dual_residual");
  out.iterations = integer(field(j, "iterations", ""), "iterations");
  if (auto it = j.find("history"); it != j.end()) {
    if (!it->is_array()) fail("history", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& h = (*it)[i];
      const std::string w = "history[" + std::to_string(i) + "]";
      IterationRecord r;
      r.iteration = integer(field(h, "iteration", w), w + ".iteration");
      r.mu = number(field(h, "mu", w), w + ".mu");
      r.gap = number(field(h, "gap", w), w + ".gap");
      r.alpha = number(field(h, "alpha", w), w + ".alpha");
      r.orthogonality = number(field(h, "orthogonality", w), w + ".orthogonality");
      r.gap_identity = number(field(h, "gap_identity", w), w + ".gap_identity");
      r.scaling_residual = number(field(h, "scaling_residual", w), w + ".scaling_residual");
      out.history.push_back(r);
    }
  }
  return out;
}

Json report_to_json(const VerificationReport& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"tag", rec.tag}, {"description", rec.description},
                       {"trials", rec.trials}, {"max_residual", finite_or_null(rec.max_residual)},
                       {"tolerance", rec.tolerance}, {"passed", rec.passed}});
  }
  return {{"schema", kSchemaVersion}, {"kind", "verification_report"},
          {"passed", r.passed}, {"seed", r.seed}, {"records", std::move(records)}};
}

VerificationReport report_from_json(const Json& j) {
  check_schema(j, "verification_report");
  VerificationReport r;
  const Json& seed = field(j, "seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) fail("seed", "expected an integer");
  r.seed = seed.get<std::uint64_t>();
  const Json& records = field(j, "records", "");
  if (!records.is_array()) fail("records", "expected an array");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& rec = records[i];
    const std::string w = "records[" + std::to_string(i) + "]";
    IdentityRecord out;
    out.tag = text(field(rec, "tag", w), w + ".tag");
    out.description = text(field(rec, "description", w), w + ".description");
    out.trials = integer(field(rec, "trials", w), w + ".trials");
    out.max_residual = number(field(rec, "max_residual", w), w + ".max_residual");
    out.tolerance = number(field(rec, "tolerance", w), w + ".tolerance");
    out.passed = boolean(field(rec, "passed", w), w + ".passed");
    r.records.push_back(std::move(out));
  }
  r.finalize();
  if (r.passed != boolean(field(j, "passed", ""), "passed")) {
    fail("passed", "overall flag disagrees with the records");
  }
  return r;
}

Json decomposition_to_json(const DecompositionResult& d) {
  Json blocks = Json::array();
  for (const auto& b : d.blocks) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < b.basis.rows(); ++i) rows.push_back(to_array(b.basis.row(i)));
    blocks.push_back({{"dim", b.dim}, {"rank", b.rank}, {"family_guess", to_string(b.guess)},
                      {"basis", std::move(rows)}});
  }
  return {{"schema", kSchemaVersion}, {"kind", "decomposition"},
          {"dim", d.dim}, {"closure_residual", d.closure_residual},
          {"orthogonality_residual", d.orthogonality_residual},
          {"attempts", d.attempts}, {"blocks", std::move(blocks)}};
}

DecompositionResult decomposition_from_json(const Json& j) {
  check_schema(j, "decomposition");
  DecompositionResult d;
  d.dim = integer(field(j, "dim", ""), "dim");
  d.closure_residual = number(field(j, "closure_residual", ""), "closure_residual");
  d.orthogonality_residual = number(field(j, "orthogonality_residual", ""), "orthogonality_residual");
  d.attempts = integer(field(j, "attempts", ""), "attempts");
  const Json& blocks = field(j, "blocks", "");
  if (!blocks.is_array()) fail("blocks", "expected an array");
  int total = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Json& b = blocks[i];
    const std::string w = "blocks[" + std::to_string(i) + "]";
    DecomposedBlock out;
    out.dim = integer(field(b, "dim", w), w + ".dim");
    out.rank = integer(field(b, "rank", w), w + ".rank");
    out.guess = family_guess_from_string(text(field(b, "family_guess", w), w + ".family_guess"));
    const Json& rows = field(b, "basis", w);
    if (!rows.is_array() || static_cast<int>(rows.size()) != d.dim) {
      fail(w + ".basis", "expected " + std::to_string(d.dim) + " rows");
    }
    out.basis.resize(d.dim, out.dim);
    for (int r = 0; r < d.dim; ++r) {
      const std::string wr = w + ".basis[" + std::to_string(r) + "]";
      const Eigen::VectorXd row = vector(rows[static_cast<std::size_t>(r)], wr);
      if (row.size() != out.dim) fail(wr, "expected " + std::to_string(out.dim) + " entries");
      out.basis.row(r) = row.transpose();
    }
    total += out.dim;
    d.blocks.push_back(std::move(out));
  }
  if (total != d.dim) fail("blocks", "block dimensions do not sum to dim");
  return d;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& err) {
    throw InputError(path + ": " + err.what());
  }
}

}  // namespace symcone::io
