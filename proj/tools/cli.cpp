#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "blockcoh/blockcoh.hpp"

namespace blockcoh::cli {

namespace {

const std::vector<std::string> kMeasures = {"block-affinity", "povm-rel", "povm-affinity"};
const std::vector<std::string> kGenKinds = {"density", "pure", "decomposition", "povm",
                                            "refinement-pair"};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); }

Json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

bool is_povm_json(const Json& j) { return j.is_object() && j.contains("elements"); }

Povm as_povm(const Json& j) {
  return is_povm_json(j) ? povm_from_json(j) : povm_from_decomposition(decomposition_from_json(j));
}

long long parse_int(const std::string& token, const std::string& what) {
  long long v = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) invalid(what + ": '" + token + "' is not an integer");
  return v;
}

/// "2,3,5" or ranges "2-8", mixed freely.
std::vector<Index> parse_index_list(const std::string& text, const std::string& what) {
  std::vector<Index> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto dash = token.find('-', 1);
    if (dash == std::string::npos) {
      values.push_back(parse_int(token, what));
      continue;
    }
    const long long lo = parse_int(token.substr(0, dash), what);
    const long long hi = parse_int(token.substr(dash + 1), what);
    if (hi < lo) invalid(what + ": empty range '" + token + "'");
    for (long long v = lo; v <= hi; ++v) values.push_back(v);
  }
  if (values.empty()) invalid(what + " must not be empty");
  return values;
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return kDefaultMasterSeed;
  std::uint64_t v = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end) {
    invalid(std::string(kSeedEnv) + "='" + env + "' is not an unsigned integer");
  }
  return v;
}

struct Output {
  std::string path;
  std::ostream& out;
  std::ostream& err;

  void emit(const Json& j) const {
    if (path.empty()) {
      out << j.dump() << '\n';
      return;
    }
    std::ofstream file(path);
    if (!file) invalid("cannot write '" + path + "'");
    file << j.dump() << '\n';
    err << "wrote " << path << '\n';
  }
};

// ---------------------------------------------------------------------------

struct ComputeArgs {
  std::string state, measurement, measure;
  bool with_sigma = false;
};

Json compute(const ComputeArgs& a) {
  const DensityMatrix rho = density_from_json(load(a.state));
  const Json m = load(a.measurement);
  Json result{{"measure", a.measure}, {"dim", rho.dim()}};
  if (a.measure == "block-affinity") {
    if (is_povm_json(m)) invalid("block-affinity needs a projective decomposition");
    const ProjectiveDecomposition p = decomposition_from_json(m);
    result["outcomes"] = p.size();
    result["value"] = block_coherence(rho, p);
    if (a.with_sigma) {
      const DensityMatrix sigma = closest_free_state(rho, p);
      result["closest_free_state"] = matrix_to_json(sigma.matrix());
      result["affinity_distance"] = affinity_distance(rho, sigma);
    }
    return result;
  }
  if (a.with_sigma) invalid("--with-sigma applies to block-affinity only");
  const Povm e = as_povm(m);
  result["outcomes"] = e.size();
  result["value"] = a.measure == "povm-rel" ? relative_entropy_povm_coherence(rho, e)
                                            : affinity_povm_coherence(rho, e);
  return result;
}

// ---------------------------------------------------------------------------

struct CheckOrderArgs {
  std::vector<std::string> files;
  std::string partition;
};

std::string_view to_string(NotRefinement::Reason r) {
  switch (r) {
    case NotRefinement::Reason::NoAbsorbingBlock: return "no_absorbing_block";
    case NotRefinement::Reason::AmbiguousBlock: return "ambiguous_block";
    case NotRefinement::Reason::SumMismatch: return "sum_mismatch";
  }
  return "unknown";
}

Json check_sum(const std::vector<ComplexMatrix>& fine, const std::vector<ComplexMatrix>& coarse,
               const Partition& part) {
  if (part.size() != coarse.size()) {
    return Json{{"is_refinement", false},
                {"reason", "outcome_count"},
                {"detail", "partition has " + std::to_string(part.size()) +
                               " groups, coarse measurement has " +
                               std::to_string(coarse.size()) + " outcomes"}};
  }
  double worst = 0.0;
  std::size_t worst_group = 0;
  for (std::size_t j = 0; j < part.size(); ++j) {
    ComplexMatrix sum = ComplexMatrix::Zero(coarse[j].rows(), coarse[j].cols());
    for (std::size_t i : part.groups()[j]) sum += fine[i];
    const double dev = max_abs(sum - coarse[j]);
    if (dev > worst) {
      worst = dev;
      worst_group = j;
    }
  }
  const bool ok = worst <= Tolerances{}.proj;
  Json j{{"is_refinement", ok}, {"max_deviation", worst}};
  if (ok) {
    j["assignment"] = part.assignment();
  } else {
    j["reason"] = "sum_mismatch";
    j["index"] = worst_group;
  }
  return j;
}

Json check_order(const CheckOrderArgs& a) {
  Json fine_j, coarse_j;
  if (a.files.size() == 1) {
    const Json pair = load(a.files[0]);
    if (!pair.is_object() || !pair.contains("fine") || !pair.contains("coarse")) {
      throw Error(ErrorKind::ParseError, a.files[0] + ": expected \"fine\" and \"coarse\" members");
    }
    fine_j = pair["fine"];
    coarse_j = pair["coarse"];
  } else {
    fine_j = load(a.files[0]);
    coarse_j = load(a.files[1]);
  }

  if (is_povm_json(fine_j) || is_povm_json(coarse_j)) {
    if (a.partition.empty()) invalid("POVM order checks need --partition");
    const Povm fine = as_povm(fine_j);
    const Povm coarse = as_povm(coarse_j);
    if (fine.dim() != coarse.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "fine has dimension " + std::to_string(fine.dim()) +
                                                    ", coarse has " + std::to_string(coarse.dim()));
    }
    const Partition part = partition_from_json(load(a.partition), fine.size());
    return check_sum(fine.elements(), coarse.elements(), part);
  }

  const ProjectiveDecomposition fine = decomposition_from_json(fine_j);
  const ProjectiveDecomposition coarse = decomposition_from_json(coarse_j);
  if (!a.partition.empty()) {
    if (fine.dim() != coarse.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "fine has dimension " + std::to_string(fine.dim()) +
                                                    ", coarse has " + std::to_string(coarse.dim()));
    }
    return check_sum(fine.projectors(), coarse.projectors(),
                     partition_from_json(load(a.partition), fine.size()));
  }
  const RefinementResult r = is_refinement(fine, coarse);
  if (const auto* w = std::get_if<RefinementWitness>(&r)) {
    return Json{{"is_refinement", true}, {"assignment", w->assignment}};
  }
  const auto& no = std::get<NotRefinement>(r);
  return Json{{"is_refinement", false},
              {"reason", to_string(no.reason)},
              {"index", no.index},
              {"residual", no.residual}};
}

// ---------------------------------------------------------------------------

Json coarse_grain_cmd(const std::string& measurement, const std::string& partition) {
  const Json m = load(measurement);
  const Json pj = load(partition);
  if (is_povm_json(m)) {
    const Povm e = povm_from_json(m);
    return povm_to_json(coarse_grain_povm(e, partition_from_json(pj, e.size())));
  }
  const ProjectiveDecomposition p = decomposition_from_json(m);
  return decomposition_to_json(coarse_grain(p, partition_from_json(pj, p.size())));
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  long long dim = 0;
  std::optional<long long> rank;
  std::optional<std::string> blocks;
  std::optional<long long> elements;
  std::optional<std::uint64_t> seed;
};

void reject_flag(bool present, const std::string& flag, const std::string& kind) {
  if (present) invalid(flag + " does not apply to gen " + kind);
}

std::vector<Index> gen_blocks(const GenArgs& a, Rng& rng) {
  if (!a.blocks) return random_composition(a.dim, rng);
  const std::vector<Index> sizes = parse_index_list(*a.blocks, "--blocks");
  Index total = 0;
  for (Index s : sizes) {
    if (s < 1) invalid("--blocks entries must be positive");
    total += s;
  }
  if (total != a.dim) {
    invalid("--blocks sums to " + std::to_string(total) + " but --dim is " +
            std::to_string(a.dim));
  }
  return sizes;
}

Json gen(const GenArgs& a) {
  if (a.dim < 1) invalid("--dim must be at least 1");
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  Rng rng = make_rng(seed);
  const Index d = a.dim;
  const std::string& k = a.kind;

  if (k == "density" || k == "pure") {
    reject_flag(a.blocks.has_value(), "--blocks", k);
    reject_flag(a.elements.has_value(), "--elements", k);
    if (k == "pure") {
      reject_flag(a.rank.has_value(), "--rank", k);
      const ComplexVector psi = random_unit_vector(d, rng);
      return Json{{"dim", d},
                  {"seed", seed},
                  {"vector", matrix_to_json(psi.transpose())[0]},
                  {"matrix", matrix_to_json(DensityMatrix::from_pure(psi).matrix())}};
    }
    const long long rank = a.rank.value_or(d);
    if (rank < 1 || rank > d) invalid("--rank must lie in [1, --dim]");
    return Json{{"dim", d},
                {"rank", rank},
                {"seed", seed},
                {"matrix", matrix_to_json(random_density(d, rank, rng).matrix())}};
  }

  reject_flag(a.rank.has_value(), "--rank", k);
  if (k == "povm") {
    reject_flag(a.blocks.has_value(), "--blocks", k);
    const long long n = a.elements.value_or(d);
    if (n < 1) invalid("--elements must be at least 1");
    Json j = povm_to_json(random_povm(d, static_cast<std::size_t>(n), rng));
    j["seed"] = seed;
    return j;
  }

  reject_flag(a.elements.has_value(), "--elements", k);
  if (k == "decomposition") {
    Json j = decomposition_to_json(random_decomposition(d, gen_blocks(a, rng), rng));
    j["seed"] = seed;
    return j;
  }

  // refinement-pair
  if (d < 2) invalid("refinement-pair needs --dim >= 2");
  std::vector<Index> sizes = gen_blocks(a, rng);
  if (std::all_of(sizes.begin(), sizes.end(), [](Index s) { return s == 1; })) {
    if (a.blocks) invalid("--blocks must contain a block of size >= 2 to refine");
    sizes = {d};
  }
  const ProjectiveDecomposition coarse = random_decomposition(d, sizes, rng);
  const Refinement r = refine_randomly(coarse, rng);
  return Json{{"seed", seed},
              {"fine", decomposition_to_json(r.fine)},
              {"coarse", decomposition_to_json(coarse)},
              {"assignment", r.witness.assignment}};
}

// ---------------------------------------------------------------------------

struct SuiteArgs {
  std::optional<std::uint64_t> seed;
  std::size_t trials = SuiteConfig{}.trials_per_check;
  std::string dims = "2-8";
  double tol = SuiteConfig{}.tol_assert;
  std::string checks = "all";
};

SuiteReport suite(const SuiteArgs& a) {
  SuiteConfig cfg;
  cfg.master_seed = a.seed ? *a.seed : default_seed();
  cfg.trials_per_check = a.trials;
  cfg.dims = parse_index_list(a.dims, "--dims");
  cfg.tol_assert = a.tol;
  if (a.checks == "all") {
    cfg.checks = check_names();
  } else if (a.checks != "none") {
    std::stringstream ss(a.checks);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (!name.empty()) cfg.checks.push_back(name);
    }
  }
  return run_suite(cfg);
}

void describe(const Error& e, std::ostream& err) {
  err << "error: " << e.what();
  if (e.first_index()) {
    err << " [index " << *e.first_index();
    if (e.second_index()) err << ", " << *e.second_index();
    err << "]";
  }
  err << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block and POVM coherence measures", "blockcoh"};
  app.require_subcommand(1);
  std::string out_path;

  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Write the JSON result to PATH instead of stdout");
  };

  ComputeArgs compute_args;
  auto* compute_cmd = app.add_subcommand("compute", "Evaluate a coherence measure");
  compute_cmd->add_option("--state", compute_args.state, "Density matrix JSON")->required();
  compute_cmd->add_option("--measurement", compute_args.measurement,
                          "Decomposition or POVM JSON")->required();
  compute_cmd->add_option("--measure", compute_args.measure)
      ->required()
      ->check(CLI::IsMember(kMeasures));
  compute_cmd->add_flag("--with-sigma", compute_args.with_sigma,
                        "Include the closest free state (block-affinity)");
  add_out(compute_cmd);

  CheckOrderArgs order_args;
  auto* order_cmd = app.add_subcommand(
      "check-order", "Test whether FINE refines COARSE (or a {fine, coarse} file)");
  order_cmd->add_option("files", order_args.files, "FINE COARSE, or one pair file")
      ->required()
      ->expected(1, 2);
  order_cmd->add_option("--partition", order_args.partition,
                        "Outcome grouping; required for POVMs");
  add_out(order_cmd);

  std::string cg_measurement, cg_partition;
  auto* cg_cmd = app.add_subcommand("coarse-grain", "Merge outcomes by a partition");
  cg_cmd->add_option("--measurement", cg_measurement)->required();
  cg_cmd->add_option("--partition", cg_partition)->required();
  add_out(cg_cmd);

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("kind", gen_args.kind)->required()->check(CLI::IsMember(kGenKinds));
  gen_cmd->add_option("--dim", gen_args.dim)->required();
  gen_cmd->add_option("--rank", gen_args.rank);
  gen_cmd->add_option("--blocks", gen_args.blocks, "Block sizes, e.g. 2,3");
  gen_cmd->add_option("--elements", gen_args.elements, "Number of POVM elements");
  gen_cmd->add_option("--seed", gen_args.seed);
  add_out(gen_cmd);

  SuiteArgs suite_args;
  auto* suite_cmd = app.add_subcommand("suite", "Run the randomized property suite");
  suite_cmd->add_option("--seed", suite_args.seed, "Master seed");
  suite_cmd->add_option("--trials", suite_args.trials, "Trials per check")->capture_default_str();
  suite_cmd->add_option("--dims", suite_args.dims, "Dimensions, e.g. 2-8 or 2,4,6")
      ->capture_default_str();
  suite_cmd->add_option("--tol", suite_args.tol, "Assertion tolerance")->capture_default_str();
  suite_cmd->add_option("--checks", suite_args.checks, "all, none, or a comma list")
      ->capture_default_str();
  add_out(suite_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    const Output sink{out_path, out, err};
    if (compute_cmd->parsed()) {
      sink.emit(compute(compute_args));
    } else if (order_cmd->parsed()) {
      sink.emit(check_order(order_args));
    } else if (cg_cmd->parsed()) {
      sink.emit(coarse_grain_cmd(cg_measurement, cg_partition));
    } else if (gen_cmd->parsed()) {
      sink.emit(gen(gen_args));
    } else if (suite_cmd->parsed()) {
      const SuiteReport report = suite(suite_args);
      sink.emit(report_to_json(report, true));
      if (report.total_failures() > 0) {
        err << report.total_failures() << " failing trial(s)\n";
        return kSuiteFailures;
      }
    }
  } catch (const Error& e) {
    describe(e, err);
    return e.kind() == ErrorKind::DimensionMismatch ? kDimensionMismatch : kInvalidInput;
  } catch (const Json::exception& e) {
    err << "error: ParseError: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kOk;
}

}  // namespace blockcoh::cli
