#include "symcone_cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "symcone/barrier.hpp"
#include "symcone/decompose.hpp"
#include "symcone/errors.hpp"
#include "symcone/io.hpp"
#include "symcone/ipm.hpp"
#include "symcone/verification.hpp"

namespace symcone::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.9g", v);
  return buf;
}

std::string vec(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += num(v(i));
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SYMCONE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("SYMCONE_SEED must be a non-negative integer, got '") + env + "'");
    }
  }
  return 0;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InputError("--weights: cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw InputError("--weights: expected a comma-separated list");
  return out;
}

Algebra cone_from_flags(const std::string& family, const std::string& dims) {
  if (family.find_first_of(":(") != std::string::npos) {
    if (!dims.empty()) throw InputError("--dims cannot be combined with a full cone spec");
    return io::parse_cone_spec(family);
  }
  if (dims.empty()) throw InputError("--dims is required with --family " + family);
  return io::parse_cone_spec(family + ":" + dims);
}

/// Loads a structure tensor from a tensor file, a problem file, a descriptor
/// file, or a cone spec string.
StructureTensor load_tensor(const std::string& input) {
  if (!std::filesystem::exists(input)) {
    return structure_constants(io::parse_cone_spec(input));
  }
  const io::Json j = io::read_json_file(input);
  if (j.is_object() && j.contains("T")) return io::tensor_from_json(j);
  if (j.is_object() && j.contains("cone")) {
    return structure_constants(io::algebra_from_json(j.at("cone"), "cone"));
  }
  return structure_constants(io::algebra_from_json(j, ""));
}

void print_blocks(std::ostream& out, const DecompositionResult& d) {
  out << "blocks " << d.blocks.size() << " (dim " << d.dim << ")\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-6s %5s %5s  %s\n", "block", "dim", "rank", "family");
  out << line;
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const auto& b = d.blocks[i];
    std::snprintf(line, sizeof line, "%-6zu %5d %5d  %s\n", i, b.dim, b.rank,
                  to_string(b.guess).c_str());
    out << line;
  }
  out << "closure_residual " << num(d.closure_residual) << "\n";
  out << "orthogonality_residual " << num(d.orthogonality_residual) << "\n";
}

int cmd_solve(const std::string& path, double gap_tol, int max_iter, bool json, std::ostream& out) {
  const io::ProblemFile file = io::problem_from_json(io::read_json_file(path));
  const ConicProblem problem = file.problem();
  SolveOptions opts;
  opts.gap_tol = gap_tol;
  opts.max_iter = max_iter;
  const Solution sol = solve(problem, opts);
  if (json) {
    out << io::solution_to_json(sol).dump(2) << "\n";
  } else {
    out << "status " << to_string(sol.status) << "\n";
    out << "objective " << num(sol.objective) << "\n";
    out << "dual_objective " << num(sol.dual_objective) << "\n";
    out << "gap " << num(sol.gap) << "\n";
    out << "iterations " << sol.iterations << "\n";
    out << "x " << vec(sol.x.coords) << "\n";
    out << "s " << vec(sol.s.coords) << "\n";
  }
  switch (sol.status) {
    case SolveStatus::Optimal: return kOk;
    case SolveStatus::IterationLimit: return kIterationLimit;
    case SolveStatus::NumericalFailure: return kNumericalFailure;
  }
  return kNumericalFailure;
}

int cmd_verify(const std::string& family, const std::string& dims, const std::string& weights,
               const VerifyOptions& opts, bool json, std::ostream& out) {
  const Algebra cone = cone_from_flags(family, dims);
  const SelfScaledBarrier barrier(cone, weights.empty() ? std::vector<double>{1.0}
                                                        : parse_weights(weights));
  const VerificationReport report = verify_self_scaled(barrier, opts);
  if (json) {
    out << io::report_to_json(report).dump(2) << "\n";
  } else {
    out << "cone " << cone.to_string() << "  nu " << num(barrier.nu()) << "\n";
    out << report.render();
  }
  return report.passed ? kOk : kCheckFailed;
}

int cmd_decompose(const std::string& input, std::optional<std::uint64_t> scramble_seed,
                  std::uint64_t seed, bool json, std::ostream& out) {
  StructureTensor t = load_tensor(input);
  t.validate();
  if (scramble_seed) t = scramble(t, *scramble_seed).tensor;
  SplitOptions opts;
  opts.seed = seed;
  const DecompositionResult d = split_irreducible(t, opts);
  if (json) {
    out << io::decomposition_to_json(d).dump(2) << "\n";
  } else {
    print_blocks(out, d);
  }
  return kOk;
}

int cmd_identify(const std::string& path, std::optional<std::uint64_t> scramble_seed,
                 std::uint64_t seed, bool json, std::ostream& out) {
  const io::Json doc = io::read_json_file(path);
  if (!doc.is_object() || !doc.contains("cone")) {
    throw InputError("field 'cone': missing");
  }
  const Algebra cone = io::algebra_from_json(doc.at("cone"), "cone");
  std::vector<double> weights{1.0};
  double offset = 0.0;
  if (doc.contains("weights")) weights = doc.at("weights").get<std::vector<double>>();
  if (doc.contains("offset")) offset = doc.at("offset").get<double>();
  const SelfScaledBarrier barrier(cone, weights, offset);

  StructureTensor t = structure_constants(cone);
  const int n = cone.dim();
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  if (scramble_seed) {
    Scrambled s = scramble(t, *scramble_seed);
    t = std::move(s.tensor);
    q = std::move(s.rotation);
  }
  const BarrierFunction oracle = [&](const Eigen::VectorXd& y) {
    try {
      return barrier.value(from_orthonormal(cone, q.transpose() * y));
    } catch (const DomainError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  SplitOptions opts;
  opts.seed = seed;
  const DecompositionResult d = split_irreducible(t, opts);
  const IdentifiedBarrier id = identify_barrier_weights(oracle, d, t);

  // Match each recovered block to the declared block holding most of its mass.
  const auto& declared = cone.irreducible_blocks();
  std::vector<int> match(d.blocks.size(), -1);
  std::vector<int> hits(declared.size(), 0);
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const Eigen::MatrixXd natural = q.transpose() * d.blocks[i].basis;
    double best = -1.0;
    for (std::size_t b = 0; b < declared.size(); ++b) {
      const double mass = natural.middleRows(declared[b].offset, declared[b].dim).squaredNorm();
      if (mass > best) {
        best = mass;
        match[i] = static_cast<int>(b);
      }
    }
    ++hits[static_cast<std::size_t>(match[i])];
  }
  const bool bijective = d.blocks.size() == declared.size() &&
                         std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  double worst = std::abs(id.offset - barrier.offset());
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const double expected = barrier.weights()[static_cast<std::size_t>(match[i])];
    worst = std::max(worst, std::abs(id.weights[i] - expected));
  }
  const bool ok = bijective && worst <= 1e-5;

  if (json) {
    io::Json blocks = io::Json::array();
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
      blocks.push_back({{"dim", d.blocks[i].dim},
                        {"rank", d.blocks[i].rank},
                        {"declared_block", match[i]},
                        {"declared_weight", barrier.weights()[static_cast<std::size_t>(match[i])]},
                        {"recovered_weight", id.weights[i]}});
    }
    io::Json doc_out = {{"schema", io::kSchemaVersion}, {"kind", "identification"},
                        {"declared_offset", barrier.offset()}, {"recovered_offset", id.offset},
                        {"nu_fitted", id.nu_fitted}, {"nu_measured", id.nu_measured},
                        {"max_error", worst}, {"match", ok}, {"blocks", std::move(blocks)}};
    out << doc_out.dump(2) << "\n";
  } else {
    char line[160];
    std::snprintf(line, sizeof line, "%-6s %5s %5s %9s %16s %16s\n", "block", "dim", "rank",
                  "declared", "declared-c", "recovered-c");
    out << line;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
      std::snprintf(line, sizeof line, "%-6zu %5d %5d %9d %16s %16s\n", i, d.blocks[i].dim,
                    d.blocks[i].rank, match[i],
                    num(barrier.weights()[static_cast<std::size_t>(match[i])]).c_str(),
                    num(id.weights[i]).c_str());
      out << line;
    }
    out << "offset declared " << num(barrier.offset()) << " recovered " << num(id.offset) << "\n";
    out << "nu fitted " << num(id.nu_fitted) << " measured " << num(id.nu_measured) << "\n";
    out << "max_error " << num(worst) << "\n";
    out << (ok ? "match" : "MISMATCH") << "\n";
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"symcone: self-scaled barriers, symmetric-cone decomposition and a conic IPM"};
  app.require_subcommand(1);

  std::string path;
  double gap_tol = SolveOptions{}.gap_tol;
  int max_iter = SolveOptions{}.max_iter;
  bool json = false;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a conic problem file");
  solve_cmd->add_option("problem", path, "Problem JSON file")->required();
  solve_cmd->add_option("--gap-tol", gap_tol, "Relative duality-gap tolerance");
  solve_cmd->add_option("--max-iter", max_iter, "Iteration limit");
  solve_cmd->add_flag("--json", json, "Emit the solution document");

  std::string family, dims, weights;
  int trials = 100;
  std::optional<std::uint64_t> seed;
  double tol = 1e-8;
  auto* verify_cmd = app.add_subcommand("verify", "Check the self-scaled identities numerically");
  verify_cmd->add_option("--family", family,
                         "orthant | lorentz | sympsd, or a full spec like 'sum(orthant:2, lorentz:3)'")
      ->required();
  verify_cmd->add_option("--dims", dims, "Family parameter");
  verify_cmd->add_option("--weights", weights, "Comma-separated barrier weights (each >= 1)");
  verify_cmd->add_option("--trials", trials, "Random samples per identity");
  verify_cmd->add_option("--seed", seed, "RNG seed (default: $SYMCONE_SEED or 0)");
  verify_cmd->add_option("--tol", tol, "Tolerance for identity residuals");
  verify_cmd->add_flag("--json", json, "Emit the report document");

  std::optional<std::uint64_t> scramble_seed;
  auto* decompose_cmd = app.add_subcommand("decompose", "Split an algebra into irreducible blocks");
  decompose_cmd->add_option("input", path, "Tensor/problem/descriptor file or cone spec")->required();
  decompose_cmd->add_option("--scramble-seed", scramble_seed, "Rotate the basis randomly first");
  decompose_cmd->add_option("--seed", seed, "RNG seed for the splitting");
  decompose_cmd->add_flag("--json", json, "Emit the decomposition document");

  auto* identify_cmd =
      app.add_subcommand("identify", "Recover barrier weights from a cone file with weights");
  identify_cmd->add_option("file", path, "Problem or cone file with weights")->required();
  identify_cmd->add_option("--scramble-seed", scramble_seed, "Rotate the basis randomly first");
  identify_cmd->add_option("--seed", seed, "RNG seed for the splitting");
  identify_cmd->add_flag("--json", json, "Emit a JSON summary");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    const std::uint64_t run_seed = seed ? *seed : default_seed();
    if (*solve_cmd) return cmd_solve(path, gap_tol, max_iter, json, out);
    if (*verify_cmd) {
      VerifyOptions opts;
      opts.trials = trials;
      opts.seed = run_seed;
      opts.tol = tol;
      return cmd_verify(family, dims, weights, opts, json, out);
    }
    if (*decompose_cmd) return cmd_decompose(path, scramble_seed, run_seed, json, out);
    if (*identify_cmd) return cmd_identify(path, scramble_seed, run_seed, json, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const io::Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInputError;
}

}  // namespace symcone::cli
