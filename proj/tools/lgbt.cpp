#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgbt/dataset.hpp"
#include "lgbt/embedding_audit.hpp"
#include "lgbt/experiments.hpp"
#include "lgbt/io.hpp"
#include "lgbt/model.hpp"
#include "lgbt/monotonicity.hpp"
#include "lgbt/parallel.hpp"
#include "lgbt/svg.hpp"

namespace fs = std::filesystem;
using namespace lgbt;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  int threads = 0;
  std::string root_law;
  bool serial = false;
};

Execution execution(const Globals& g) { return g.serial ? Execution::serial : Execution::parallel; }

std::optional<RootLaw> law_override(const Globals& g) {
  if (g.root_law.empty()) return std::nullopt;
  return RootLaw::parse(g.root_law);
}

void emit(const std::string& out, json j) {
  j["schema_version"] = io::kSchemaVersion;
  if (out.empty() || out == "-")
    std::cout << j.dump(2) << '\n';
  else
    io::write_json(out, j);
}

// Resolves config + dataset into a validated model. The dataset is parsed
// with the number of alternatives implied by the config when there is one.
std::pair<ModelConfig, Dataset> load_problem(const std::string& config_path, const std::string& dataset_path,
                                             const Globals& g, std::optional<double> sigma) {
  io::ConfigFile file;
  if (!config_path.empty()) file = io::read_config(config_path);
  if (auto law = law_override(g)) file.law = *law;
  if (sigma) file.sigma = *sigma;
  Dataset data = io::read_dataset(dataset_path, file.implied_alternatives(), file.law);
  return {file.build(data.num_alternatives()), std::move(data)};
}

struct FitArgs {
  std::string dataset, config, out;
  std::optional<double> sigma;
};

int run_fit(const FitArgs& a, const Globals& g) {
  const auto [cfg, data] = load_problem(a.config, a.dataset, g, a.sigma);
  const FitResult r = fit(cfg, data);
  json j = io::to_json(r);
  j["root_law"] = cfg.law.name();
  j["sigma"] = cfg.sigma;
  j["alternatives"] = cfg.alternatives();
  j["comparisons"] = data.size();
  emit(a.out, j);
  return kExitOk;
}

struct CheckArgs {
  std::string embedding, mode = "good", out;
  std::size_t trials = 2000;
  std::uint64_t seed = RngStream::kDefaultSeed;
  bool expect_pass = false;
  bool no_exact = false;
  std::vector<std::string> inject;
};

int run_check(const CheckArgs& a, const Globals& g) {
  const Embedding x(io::read_matrix(a.embedding));
  if (x.alternatives() == 0) throw std::invalid_argument(a.embedding + ": empty embedding");
  json j{{"mode", a.mode}, {"alternatives", x.alternatives()}, {"dims", x.dims()}};
  bool pass = true;
  if (a.mode == "diffusion") {
    const auto grid = default_lambda_grid();
    const DiffusionReport r = is_diffusion_embedding(x, grid);
    j.update(io::to_json(r));
    j["lambda_grid"] = {{"min", grid.front()}, {"max", grid.back()}, {"points", grid.size()}};
    pass = r.pass;
  } else {
    GoodnessOptions opt;
    opt.n_laplacians = a.trials;
    opt.use_exact_shortcuts = !a.no_exact;
    for (const auto& p : a.inject) {
      Matrix y = io::read_matrix(p);
      if (y.rows() != static_cast<Eigen::Index>(x.alternatives()) || !is_laplacian(y))
        throw std::invalid_argument(p + ": not a Laplacian over " + std::to_string(x.alternatives()) +
                                    " alternatives");
      opt.injected.push_back(std::move(y));
    }
    const GoodnessReport r = good_check_monte_carlo(x, opt, RngStream(a.seed), execution(g));
    j.update(io::to_json(r));
    j["seed"] = a.seed;
    pass = r.verdict != GoodnessVerdict::not_good;
  }
  emit(a.out, j);
  return (a.expect_pass && !pass) ? kExitFail : kExitOk;
}

struct AuditArgs {
  std::string config, dataset, out;
  std::size_t trials = 1000;
  std::uint64_t seed = RngStream::kDefaultSeed;
  double slack = kMonotonicitySlack;
  std::optional<double> sigma;
};

int run_audit(const AuditArgs& a, const Globals& g) {
  const auto [cfg, data] = load_problem(a.config, a.dataset, g, a.sigma);
  const AuditSummary s = run_monotonicity_audit(cfg, data, a.trials, RngStream(a.seed), a.slack, execution(g));
  json j = io::to_json(s);
  j["seed"] = a.seed;
  j["slack"] = a.slack;
  j["root_law"] = cfg.law.name();
  emit(a.out, j);
  return s.violations == 0 ? kExitOk : kExitFail;
}

struct ExperimentArgs {
  std::string name, out;
  std::uint64_t seed = RngStream::kDefaultSeed;
  bool paper_scale = false;
  std::optional<std::size_t> seeds;
  std::optional<std::size_t> embeddings;
  std::optional<std::size_t> laplacians;
};

int run_experiment(const ExperimentArgs& a, const Globals& g) {
  const fs::path dir(a.out);
  fs::create_directories(dir);
  const RngStream rng(a.seed);
  const auto start = std::chrono::steady_clock::now();
  std::vector<ExperimentResult> rows;
  json spec_json;
  std::string figure;

  if (a.name == "goodness-heatmap") {
    HeatmapSpec spec = a.paper_scale ? HeatmapSpec::paper_scale() : HeatmapSpec{};
    if (a.embeddings) spec.embeddings_per_cell = *a.embeddings;
    if (a.laplacians) spec.laplacians_per_embedding = *a.laplacians;
    rows = run_goodness_heatmap(spec, rng, execution(g));
    spec_json = io::to_json(spec);
    figure = svg::heatmap(rows, "Probability that a Gaussian embedding is good");
  } else if (a.name == "nmse-vs-d") {
    NmseVsDimsSpec spec = a.paper_scale ? NmseVsDimsSpec::paper_scale() : NmseVsDimsSpec{};
    if (a.seeds) spec.seeds = *a.seeds;
    rows = run_nmse_vs_dims(spec, rng, execution(g));
    spec_json = io::to_json(spec);
    figure = svg::line_chart(rows, svg::XAxis::dims, "nMSE vs embedding dimension");
  } else {
    NmseVsComparisonsSpec spec = a.paper_scale ? NmseVsComparisonsSpec::paper_scale() : NmseVsComparisonsSpec{};
    if (a.seeds) spec.seeds = *a.seeds;
    rows = run_nmse_vs_comparisons(spec, rng, execution(g));
    spec_json = io::to_json(spec);
    figure = svg::line_chart(rows, svg::XAxis::comparisons, "nMSE vs number of comparisons");
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  io::write_text(dir / "results.csv", io::results_csv(rows));
  io::write_text(dir / "figure.svg", figure);
  json meta{{"schema_version", io::kSchemaVersion},
            {"experiment", a.name},
            {"seed", a.seed},
            {"paper_scale", a.paper_scale},
            {"spec", spec_json},
            {"threads", g.serial ? 1 : max_threads()},
            {"execution", g.serial ? "serial" : "parallel"},
            {"seconds", seconds}};
  io::write_json(dir / "meta.json", meta);
  std::cout << "wrote " << rows.size() << " rows to " << (dir / "results.csv").string() << '\n';
  return kExitOk;
}

struct HuntArgs {
  std::string family = "diffusion", out;
  std::size_t alternatives = 4;
  std::size_t dims = 2;
  std::size_t budget = 1000;
  std::uint64_t seed = RngStream::kDefaultSeed;
  double slack = kMonotonicitySlack;
  bool expect_none = false;
};

int run_hunt(const HuntArgs& a, const Globals& g) {
  InstanceGenerator gen;
  if (a.family == "diffusion")
    gen = diffusion_family(a.alternatives);
  else if (a.family == "intro")
    gen = intro_family(a.alternatives);
  else if (a.family == "gaussian")
    gen = gaussian_family(a.alternatives, a.dims);
  else if (a.family == "one-hot")
    gen = one_hot_family(a.alternatives);
  else
    gen = classic_family(law_override(g).value_or(RootLaw()), a.alternatives);

  const auto w = hunt_violation(gen, RngStream(a.seed), a.budget, a.slack, execution(g));
  json j{{"family", a.family}, {"budget", a.budget}, {"seed", a.seed}, {"slack", a.slack}, {"found", w.has_value()}};
  j["witness"] = w ? io::to_json(*w) : json(nullptr);
  if (w) j["replayed_drop"] = replay_witness(*w);
  emit(a.out, j);
  return (a.expect_none && w) ? kExitFail : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear generalized Bradley-Terry models: fitting and monotonicity audits"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (0 = runtime default; also GBT_THREADS)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--root-law", g.root_law, "Override the root law of the config")
      ->check(CLI::IsMember({"uniform", "binary", "gaussian"}));
  app.add_flag("--serial", g.serial, "Use the serial reference kernels");

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Compute the MAP scores for a dataset");
  fit_cmd->add_option("--dataset", fa.dataset, "Comparison CSV (a,b,r; 1-based ids)")
      ->required()
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--config", fa.config, "Model config JSON")->check(CLI::ExistingFile);
  fit_cmd->add_option("--sigma", fa.sigma, "Override sigma")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--out", fa.out, "Output JSON (default stdout)");

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check-embedding", "Audit an embedding for diffusion or goodness");
  check_cmd->add_option("--embedding", ca.embedding, "D x A embedding (CSV or JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  check_cmd->add_option("--mode", ca.mode, "diffusion or good")->check(CLI::IsMember({"diffusion", "good"}));
  check_cmd->add_option("--trials", ca.trials, "Random Laplacians, each tried at 7 scales");
  check_cmd->add_option("--seed", ca.seed, "RNG seed");
  check_cmd->add_option("--inject-laplacian", ca.inject, "Laplacian tried before the random ones")
      ->check(CLI::ExistingFile);
  check_cmd->add_flag("--expect-pass", ca.expect_pass, "Exit 1 when the verdict is a failure");
  check_cmd->add_flag("--no-exact", ca.no_exact, "Skip the closed-form criteria for A = 2 or D = 1");
  check_cmd->add_option("--out", ca.out, "Output JSON (default stdout)");

  AuditArgs aa;
  auto* audit_cmd = app.add_subcommand("monotonicity-audit", "Random favoring traces; fails on any score drop");
  audit_cmd->add_option("--config", aa.config, "Model config JSON")->check(CLI::ExistingFile);
  audit_cmd->add_option("--dataset", aa.dataset, "Starting comparison CSV")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("--trials", aa.trials, "Number of traces");
  audit_cmd->add_option("--seed", aa.seed, "RNG seed");
  audit_cmd->add_option("--slack", aa.slack, "Allowed numerical drop")->check(CLI::NonNegativeNumber);
  audit_cmd->add_option("--sigma", aa.sigma, "Override sigma")->check(CLI::PositiveNumber);
  audit_cmd->add_option("--out", aa.out, "Output JSON (default stdout)");

  ExperimentArgs ea;
  auto* exp_cmd = app.add_subcommand("experiment", "Synthetic experiments");
  exp_cmd->add_option("name", ea.name, "goodness-heatmap, nmse-vs-d or nmse-vs-n")
      ->required()
      ->check(CLI::IsMember({"goodness-heatmap", "nmse-vs-d", "nmse-vs-n"}));
  exp_cmd->add_option("--out", ea.out, "Output directory")->required();
  exp_cmd->add_option("--seed", ea.seed, "RNG seed");
  exp_cmd->add_flag("--paper-scale", ea.paper_scale, "Use the full-size grids");
  exp_cmd->add_option("--seeds", ea.seeds, "Override the number of seeds (nMSE experiments)");
  exp_cmd->add_option("--embeddings", ea.embeddings, "Override embeddings per heatmap cell");
  exp_cmd->add_option("--laplacians", ea.laplacians, "Override Laplacians per embedding");

  HuntArgs ha;
  auto* hunt_cmd = app.add_subcommand("hunt-violation", "Search an instance family for a monotonicity violation");
  hunt_cmd->add_option("--family", ha.family, "Instance family")
      ->check(CLI::IsMember({"diffusion", "intro", "gaussian", "one-hot", "classic"}));
  hunt_cmd->add_option("--alternatives", ha.alternatives, "Alternatives (maximum for random-size families)")
      ->check(CLI::Range(2, 64));
  hunt_cmd->add_option("--dims", ha.dims, "Embedding dimension (gaussian family)")->check(CLI::Range(1, 64));
  hunt_cmd->add_option("--budget", ha.budget, "Number of trials");
  hunt_cmd->add_option("--seed", ha.seed, "RNG seed");
  hunt_cmd->add_option("--slack", ha.slack, "Allowed numerical drop")->check(CLI::NonNegativeNumber);
  hunt_cmd->add_flag("--expect-none", ha.expect_none, "Exit 1 when a violation is found");
  hunt_cmd->add_option("--out", ha.out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  apply_thread_env();
  if (g.threads > 0) set_max_threads(g.threads);

  try {
    if (*fit_cmd) return run_fit(fa, g);
    if (*check_cmd) return run_check(ca, g);
    if (*audit_cmd) return run_audit(aa, g);
    if (*exp_cmd) return run_experiment(ea, g);
    if (*hunt_cmd) return run_hunt(ha, g);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (iterations " << e.iterations << ", gradient norm " << e.grad_norm
              << ")\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
