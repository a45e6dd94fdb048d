#include "lgbt/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "lgbt/embedding_audit.hpp"
#include "lgbt/model.hpp"

namespace lgbt {

GroundTruth generate_ground_truth(Embedding x, Matrix laplacian, double sigma, RootLaw law, RngStream& rng) {
  const auto dims = static_cast<Eigen::Index>(x.dims());
  Matrix cov = x.matrix() * laplacian * x.matrix().transpose();
  cov.diagonal().array() += sigma * sigma;

  GroundTruth truth{std::move(x), std::move(laplacian), sigma, law, Vector(), Vector()};
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    cov.diagonal().array() += 1e-12;
    llt.compute(cov);
    truth.regularized = true;
    if (llt.info() != Eigen::Success) throw NumericalError("ground-truth covariance is not positive definite");
  }
  Vector z(dims);
  for (auto& v : z) v = rng.normal();
  truth.beta = llt.matrixL() * z;
  truth.theta = truth.x.matrix().transpose() * truth.beta;
  return truth;
}

Dataset generate_dataset(const Vector& theta_dagger, std::size_t size, RootLaw law, RngStream& rng) {
  const auto n = static_cast<std::size_t>(theta_dagger.size());
  if (n < 2) throw std::invalid_argument("generate_dataset: needs at least two alternatives");
  std::vector<ComparisonSample> samples;
  samples.reserve(size);
  for (std::size_t k = 0; k < size; ++k) {
    std::size_t a = rng.below(n);
    std::size_t b = rng.below(n - 1);
    if (b >= a) ++b;
    samples.push_back({a, b, sample_comparison(law, theta_dagger(a) - theta_dagger(b), rng)});
  }
  return Dataset(n, std::move(samples));
}

std::optional<double> nmse(const Vector& theta_star, const Vector& theta_dagger) {
  if (theta_star.size() != theta_dagger.size()) throw std::invalid_argument("nmse: length mismatch");
  const Vector truth = theta_dagger.array() - theta_dagger.mean();
  const double denom = truth.squaredNorm();
  if (!(denom > 1e-300)) return std::nullopt;
  const Vector estimate = theta_star.array() - theta_star.mean();
  return (estimate - truth).squaredNorm() / denom;
}

const char* heatmap_mode_name(HeatmapMode m) {
  return m == HeatmapMode::plain ? "plain" : "identity_concat";
}

HeatmapSpec HeatmapSpec::paper_scale() {
  HeatmapSpec spec;
  spec.max_alternatives = 15;
  spec.max_dims = 15;
  return spec;
}

NmseVsDimsSpec NmseVsDimsSpec::paper_scale() {
  return {25, 500, {1, 2, 5, 10, 15, 20, 25, 30, 40, 50}, 100};
}

NmseVsComparisonsSpec NmseVsComparisonsSpec::paper_scale() {
  return {20, 10, {0, 10, 20, 50, 100, 200, 500, 1000}, 1000};
}

std::vector<std::size_t> balanced_labels(std::size_t alternatives, std::size_t classes) {
  if (classes == 0 || classes > alternatives) throw std::invalid_argument("balanced_labels: bad class count");
  std::vector<std::size_t> labels(alternatives);
  for (std::size_t a = 0; a < alternatives; ++a) labels[a] = a * classes / alternatives;
  return labels;
}

namespace {

// Mean and standard error of the defined entries; discarded trials counted.
ExperimentResult summarize(std::string series, const std::vector<std::optional<double>>& values) {
  ExperimentResult r;
  r.series = std::move(series);
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) {
      ++r.discarded;
      continue;
    }
    sum += *v;
    ++r.n;
  }
  if (r.n == 0) {
    r.estimate = std::nan("");
    return r;
  }
  r.estimate = sum / static_cast<double>(r.n);
  if (r.n > 1) {
    double ss = 0.0;
    for (const auto& v : values)
      if (v) ss += (*v - r.estimate) * (*v - r.estimate);
    r.std_error = std::sqrt(ss / static_cast<double>(r.n - 1) / static_cast<double>(r.n));
  }
  return r;
}

// Harness self-checks on every trial: zero at the truth and shift invariance.
std::optional<double> checked_nmse(const Vector& theta_star, const Vector& theta_dagger) {
  const auto value = nmse(theta_star, theta_dagger);
  if (!value) return value;
  const auto at_truth = nmse(theta_dagger, theta_dagger);
  const Vector shifted = theta_star.array() + 1.7;
  const auto moved = nmse(shifted, theta_dagger);
  if (!at_truth || *at_truth > 1e-20 || !moved || std::abs(*moved - *value) > 1e-9 * (1.0 + *value))
    throw std::logic_error("nMSE invariants violated");
  return value;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (auto& v : m.reshaped()) v = rng.normal();
  return m;
}

Vector fitted_scores(const Embedding& x, const Dataset& data) {
  const auto n = static_cast<Eigen::Index>(x.alternatives());
  const ModelConfig cfg{RootLaw(RootLawKind::uniform), 1.0, x, Matrix::Zero(n, n)};
  return fit(cfg, data).theta_star;
}

}  // namespace

std::vector<ExperimentResult> run_goodness_heatmap(const HeatmapSpec& spec, const RngStream& rng, Execution exec) {
  if (spec.min_alternatives < 2 || spec.max_alternatives < spec.min_alternatives || spec.min_dims < 1 ||
      spec.max_dims < spec.min_dims || spec.embeddings_per_cell == 0 || spec.modes.empty())
    throw std::invalid_argument("run_goodness_heatmap: empty or invalid grid");

  struct Cell {
    std::size_t alternatives;
    std::size_t dims;
  };
  std::vector<Cell> cells;
  for (std::size_t a = spec.min_alternatives; a <= spec.max_alternatives; ++a)
    for (std::size_t d = spec.min_dims; d <= spec.max_dims; ++d) cells.push_back({a, d});

  const std::size_t per_cell = spec.embeddings_per_cell;
  const std::size_t modes = spec.modes.size();
  std::vector<char> good(cells.size() * per_cell * modes, 0);

  GoodnessOptions opt;
  opt.n_laplacians = spec.laplacians_per_embedding;

  for_each_index(cells.size() * per_cell, exec, [&](std::size_t job) {
    const Cell& cell = cells[job / per_cell];
    const std::size_t i = job % per_cell;
    RngStream stream = rng.split(cell.alternatives * 1000 + cell.dims).split(i);
    const Embedding x(gaussian_matrix(cell.dims, cell.alternatives, stream));
    const RngStream trials = stream.split(1);
    for (std::size_t m = 0; m < modes; ++m) {
      const Embedding e = spec.modes[m] == HeatmapMode::plain
                              ? x
                              : concat_embeddings(Embedding::identity(cell.alternatives), x);
      const auto report = good_check_monte_carlo(e, opt, trials);
      good[job * modes + m] = report.verdict != GoodnessVerdict::not_good;
    }
  });

  std::vector<ExperimentResult> out;
  for (std::size_t m = 0; m < modes; ++m)
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < per_cell; ++i) hits += good[(c * per_cell + i) * modes + m];
      ExperimentResult r;
      r.series = heatmap_mode_name(spec.modes[m]);
      r.alternatives = cells[c].alternatives;
      r.dims = cells[c].dims;
      r.n = per_cell;
      r.estimate = static_cast<double>(hits) / static_cast<double>(per_cell);
      r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(per_cell));
      out.push_back(std::move(r));
    }
  return out;
}

std::vector<ExperimentResult> run_nmse_vs_dims(const NmseVsDimsSpec& spec, const RngStream& rng, Execution exec) {
  if (spec.alternatives < 2 || spec.dims.empty() || spec.seeds == 0)
    throw std::invalid_argument("run_nmse_vs_dims: invalid spec");
  static const char* kSeries[] = {"full", "identity", "features"};
  const std::size_t jobs = spec.dims.size() * spec.seeds;
  std::vector<std::optional<double>> values(jobs * 3);

  for_each_index(jobs, exec, [&](std::size_t job) {
    const std::size_t d = spec.dims[job / spec.seeds];
    const std::size_t seed = job % spec.seeds;
    RngStream stream = rng.split(d).split(seed);
    const Embedding features(gaussian_matrix(d, spec.alternatives, stream));
    const Embedding full = concat_embeddings(Embedding::identity(spec.alternatives), features);
    const auto k = static_cast<Eigen::Index>(spec.alternatives);
    const RootLaw law(RootLawKind::uniform);
    const auto truth = generate_ground_truth(full, Matrix::Zero(k, k), 1.0, law, stream);
    const auto data = generate_dataset(truth.theta, spec.comparisons, law, stream);

    values[job * 3 + 0] = checked_nmse(fitted_scores(full, data), truth.theta);
    values[job * 3 + 1] = checked_nmse(fitted_scores(Embedding::identity(spec.alternatives), data), truth.theta);
    values[job * 3 + 2] = checked_nmse(fitted_scores(features, data), truth.theta);
  });

  std::vector<ExperimentResult> out;
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t di = 0; di < spec.dims.size(); ++di) {
      std::vector<std::optional<double>> column;
      for (std::size_t seed = 0; seed < spec.seeds; ++seed) column.push_back(values[(di * spec.seeds + seed) * 3 + s]);
      auto r = summarize(kSeries[s], column);
      r.alternatives = spec.alternatives;
      r.dims = spec.dims[di];
      r.comparisons = spec.comparisons;
      out.push_back(std::move(r));
    }
  return out;
}

std::vector<ExperimentResult> run_nmse_vs_comparisons(const NmseVsComparisonsSpec& spec, const RngStream& rng,
                                                      Execution exec) {
  if (spec.alternatives < 2 || spec.comparisons.empty() || spec.seeds == 0)
    throw std::invalid_argument("run_nmse_vs_comparisons: invalid spec");
  const auto labels = balanced_labels(spec.alternatives, spec.classes);
  const Embedding one_hot = one_hot_from_labels(labels, 1.0);  // [one-hot ; I]
  const Embedding identity = Embedding::identity(spec.alternatives);
  std::size_t max_n = 0;
  for (auto n : spec.comparisons) max_n = std::max(max_n, n);

  const std::size_t points = spec.comparisons.size();
  std::vector<std::optional<double>> values(spec.seeds * points * 2);

  for_each_index(spec.seeds, exec, [&](std::size_t seed) {
    RngStream stream = rng.split(seed);
    const auto k = static_cast<Eigen::Index>(spec.alternatives);
    const RootLaw law(RootLawKind::uniform);
    const auto truth = generate_ground_truth(one_hot, Matrix::Zero(k, k), 1.0, law, stream);
    const auto all = generate_dataset(truth.theta, max_n, law, stream);
    for (std::size_t p = 0; p < points; ++p) {
      const auto& s = all.samples();
      const Dataset prefix(spec.alternatives, {s.begin(), s.begin() + static_cast<std::ptrdiff_t>(spec.comparisons[p])});
      values[(seed * points + p) * 2 + 0] = checked_nmse(fitted_scores(one_hot, prefix), truth.theta);
      values[(seed * points + p) * 2 + 1] = checked_nmse(fitted_scores(identity, prefix), truth.theta);
    }
  });

  static const char* kSeries[] = {"one_hot", "classic"};
  std::vector<ExperimentResult> out;
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t p = 0; p < points; ++p) {
      std::vector<std::optional<double>> column;
      for (std::size_t seed = 0; seed < spec.seeds; ++seed) column.push_back(values[(seed * points + p) * 2 + s]);
      auto r = summarize(kSeries[s], column);
      r.alternatives = spec.alternatives;
      r.dims = spec.classes;
      r.comparisons = spec.comparisons[p];
      out.push_back(std::move(r));
    }
  return out;
}

}  // namespace lgbt
