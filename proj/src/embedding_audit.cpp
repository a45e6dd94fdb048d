#include "lgbt/embedding_audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lgbt {

std::vector<double> default_lambda_grid() {
  constexpr int kPoints = 50;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[i] = std::pow(10.0, -6.0 + 12.0 * i / (kPoints - 1));
  return grid;
}

DiffusionReport is_diffusion_embedding(const Embedding& x, std::span<const double> lambda_grid, double tol) {
  if (lambda_grid.empty()) throw std::invalid_argument("is_diffusion_embedding: empty λ grid");
  DiffusionReport report;
  report.min_relative_margin = std::numeric_limits<double>::infinity();
  const auto n = static_cast<Eigen::Index>(x.alternatives());
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw std::invalid_argument("is_diffusion_embedding: λ must be positive");
    Matrix shifted = x.gram();
    shifted.diagonal().array() += lambda;
    Matrix inv = spd_inverse(shifted);
    inv = 0.5 * (inv + inv.transpose()).eval();

    const double scale = max_abs_entry(inv);
    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < n; ++a) {
      margin = std::min(margin, inv.row(a).sum());
      for (Eigen::Index b = 0; b < n; ++b)
        if (a != b) margin = std::min(margin, -inv(a, b));
    }
    report.min_relative_margin = std::min(report.min_relative_margin, margin / scale);
    if (report.pass && !is_super_laplacian(inv, tol)) {
      report.pass = false;
      report.violating_lambda = lambda;
    }
  }
  return report;
}

Matrix one_hot_gram_inverse(std::span<const std::size_t> labels, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("one_hot_gram_inverse: μ must be positive");
  const auto n = static_cast<Eigen::Index>(labels.size());
  std::vector<double> class_size(labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1, 0.0);
  for (auto c : labels) class_size[c] += 1.0;
  Matrix inv = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      if (labels[a] != labels[b]) continue;
      inv(a, b) = ((a == b ? 1.0 : 0.0) - 1.0 / (class_size[labels[a]] + mu)) / mu;
    }
  return inv;
}

Matrix goodness_matrix(const Matrix& gram, const Matrix& y) {
  const auto n = gram.rows();
  Matrix system = Matrix::Identity(n, n) + gram * y;
  Eigen::PartialPivLU<Matrix> lu(system);
  return lu.solve(gram);
}

bool good_check_exact_A2(const Matrix& gram, double tol) {
  if (gram.rows() != 2 || gram.cols() != 2) throw std::invalid_argument("good_check_exact_A2: gram must be 2×2");
  const double a = gram(0, 0), b = gram(1, 1), c = gram(0, 1);
  const double slack = tol * max_abs_entry(gram);
  return c >= -std::sqrt(std::max(a * b, 0.0)) - slack && c <= std::min(a, b) + slack;
}

bool good_check_exact_D1(std::span<const double> row, double tol) {
  double scale = 0.0;
  for (double v : row) scale = std::max(scale, std::abs(v));
  const double slack = tol * scale;
  std::optional<double> u, v;
  for (double value : row) {
    if (std::abs(value) <= slack) continue;
    auto& shared = value > 0.0 ? u : v;
    if (!shared) shared = value;
    else if (std::abs(*shared - value) > slack) return false;
  }
  return true;
}

const char* verdict_name(GoodnessVerdict v) {
  switch (v) {
    case GoodnessVerdict::good: return "good";
    case GoodnessVerdict::not_good: return "not_good";
    case GoodnessVerdict::undetermined: return "undetermined";
  }
  return "unknown";
}

namespace {

struct TrialOutcome {
  double relative_margin;
  std::size_t a;
  std::size_t b;
};

TrialOutcome evaluate_trial(const Matrix& gram, const Matrix& y) {
  const Matrix m = goodness_matrix(gram, y);
  if (m.rows() < 2) return {0.0, 0, 0};
  const auto dm = max_diag_margin(m);
  const double scale = max_abs_entry(m);
  return {scale > 0.0 ? dm.margin / scale : 0.0, dm.a, dm.b};
}

// All scales of one Laplacian, stopping at the first violation.
struct LaplacianOutcome {
  std::vector<double> margins;  // one per evaluated scale
  std::optional<GoodnessWitness> witness;
};

LaplacianOutcome evaluate_laplacian(const Matrix& gram, const Matrix& base, std::size_t index,
                                    const GoodnessOptions& opt) {
  LaplacianOutcome out;
  for (std::size_t j = 0; j < opt.scales.size(); ++j) {
    const Matrix y = opt.scales[j] * base;
    const auto t = evaluate_trial(gram, y);
    out.margins.push_back(t.relative_margin);
    if (t.relative_margin < -opt.tol) {
      out.witness = GoodnessWitness{y, t.a, t.b, t.relative_margin * max_abs_entry(goodness_matrix(gram, y)),
                                    index * opt.scales.size() + j};
      break;
    }
  }
  return out;
}

Matrix trial_laplacian(std::size_t i, std::size_t n, const GoodnessOptions& opt, const RngStream& rng) {
  if (i < opt.injected.size()) return opt.injected[i];
  RngStream stream = rng.split(i - opt.injected.size());
  return random_laplacian(n, stream, opt.edge_probability);
}

void fold(GoodnessReport& report, const LaplacianOutcome& out) {
  for (double m : out.margins) report.min_margin = std::min(report.min_margin, m);
  report.trials += out.margins.size();
  if (out.witness) {
    report.verdict = GoodnessVerdict::not_good;
    report.witness = out.witness;
  }
}

}  // namespace

GoodnessReport good_check_monte_carlo(const Embedding& x, const GoodnessOptions& opt, const RngStream& rng,
                                      Execution exec) {
  const std::size_t n = x.alternatives();
  const Matrix& gram = x.gram();
  for (const auto& y : opt.injected)
    if (y.rows() != gram.rows() || !is_laplacian(y))
      throw std::invalid_argument("injected matrix is not an A×A Laplacian");

  GoodnessReport report;
  report.min_margin = std::numeric_limits<double>::infinity();

  if (opt.use_exact_shortcuts && n >= 2 && (n == 2 || x.dims() == 1)) {
    report.exact = true;
    const bool ok = n == 2 ? good_check_exact_A2(gram, opt.tol)
                           : good_check_exact_D1({x.matrix().data(), n}, opt.tol);
    // For A = 2 or D = 1 the sign of M_aa - M_ab does not depend on Y, so
    // the complete graph exhibits any violation.
    const Matrix y = complete_graph_laplacian(n);
    const auto t = evaluate_trial(gram, y);
    report.min_margin = t.relative_margin;
    report.trials = 1;
    if (ok) {
      report.verdict = GoodnessVerdict::good;
      return report;
    }
    if (t.relative_margin < -opt.tol) {
      report.verdict = GoodnessVerdict::not_good;
      report.witness = GoodnessWitness{y, t.a, t.b, t.relative_margin * max_abs_entry(goodness_matrix(gram, y)), 0};
      return report;
    }
    // Borderline within tolerance: fall through to sampling.
    report = GoodnessReport{};
    report.min_margin = std::numeric_limits<double>::infinity();
  }

  const std::size_t total = opt.injected.size() + opt.n_laplacians;
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < total && !report.witness; ++i)
      fold(report, evaluate_laplacian(gram, trial_laplacian(i, n, opt, rng), i, opt));
  } else {
    constexpr std::size_t kBlock = 64;
    for (std::size_t start = 0; start < total && !report.witness; start += kBlock) {
      const std::size_t count = std::min(kBlock, total - start);
      std::vector<LaplacianOutcome> block(count);
      for_each_index(count, exec, [&](std::size_t k) {
        const std::size_t i = start + k;
        block[k] = evaluate_laplacian(gram, trial_laplacian(i, n, opt, rng), i, opt);
      });
      for (const auto& out : block) {
        fold(report, out);
        if (report.witness) break;
      }
    }
  }
  if (report.trials == 0) report.min_margin = 0.0;
  return report;
}

double identity_padding_bound(const Embedding& x, const Matrix& y, double sigma) {
  if (!is_laplacian(y)) throw std::invalid_argument("identity_padding_bound: Y is not a Laplacian");
  const double gram_norm = x.gram().norm();
  if (gram_norm == 0.0) return 0.0;
  const double n = static_cast<double>(x.alternatives());
  return 3.0 * std::sqrt(n) * gram_norm / diag_dom(sigma * sigma * y);
}

}  // namespace lgbt
