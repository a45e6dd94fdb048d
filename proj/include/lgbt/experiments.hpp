#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lgbt/dataset.hpp"
#include "lgbt/embedding.hpp"
#include "lgbt/parallel.hpp"
#include "lgbt/rng.hpp"
#include "lgbt/root_law.hpp"

namespace lgbt {

/// Synthetic ground truth: β† ~ N(0, σ†²I + x†L†x†ᵀ), θ† = x†ᵀβ†.
struct GroundTruth {
  Embedding x;
  Matrix laplacian;
  double sigma = 1.0;
  RootLaw law;
  Vector beta;
  Vector theta;
  bool regularized = false;  // covariance needed +1e-12·I to factor
};

GroundTruth generate_ground_truth(Embedding x, Matrix laplacian, double sigma, RootLaw law, RngStream& rng);

/// N i.i.d. uniform pairs a ≠ b with uniform orientation, r ~ p(r | θ†_ab).
Dataset generate_dataset(const Vector& theta_dagger, std::size_t size, RootLaw law, RngStream& rng);

/// ‖(θ* - mean θ*) - (θ† - mean θ†)‖² / ‖θ† - mean θ†‖²; nullopt when θ†
/// is constant.
std::optional<double> nmse(const Vector& theta_star, const Vector& theta_dagger);

/// One point of a curve or heatmap cell, in long format.
struct ExperimentResult {
  std::string series;
  std::size_t alternatives = 0;
  std::size_t dims = 0;
  std::size_t comparisons = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t discarded = 0;
};

enum class HeatmapMode { plain, identity_concat };
const char* heatmap_mode_name(HeatmapMode m);

struct HeatmapSpec {
  std::size_t min_alternatives = 2;
  std::size_t max_alternatives = 8;
  std::size_t min_dims = 1;
  std::size_t max_dims = 8;
  std::size_t embeddings_per_cell = 200;
  std::size_t laplacians_per_embedding = 2000;
  std::vector<HeatmapMode> modes{HeatmapMode::plain, HeatmapMode::identity_concat};

  static HeatmapSpec paper_scale();
};

/// Fraction of i.i.d. N(0,1) D×A embeddings with no goodness violation, per
/// (A, D) cell and mode. Both modes see the same embeddings and Laplacians.
std::vector<ExperimentResult> run_goodness_heatmap(const HeatmapSpec& spec, const RngStream& rng,
                                                   Execution exec = Execution::serial);

struct NmseVsDimsSpec {
  std::size_t alternatives = 10;
  std::size_t comparisons = 100;
  std::vector<std::size_t> dims{1, 2, 4, 6, 8, 10, 15, 20};
  std::size_t seeds = 30;

  static NmseVsDimsSpec paper_scale();
};

/// Ground truth x† = [I ; x̃] with Gaussian x̃, uniform law, L = 0, σ = 1.
/// Series: "full" (x†), "identity" (I), "features" (x̃).
std::vector<ExperimentResult> run_nmse_vs_dims(const NmseVsDimsSpec& spec, const RngStream& rng,
                                               Execution exec = Execution::serial);

struct NmseVsComparisonsSpec {
  std::size_t alternatives = 10;
  std::size_t classes = 5;
  std::vector<std::size_t> comparisons{0, 2, 5, 10, 20, 40, 80, 160};
  std::size_t seeds = 30;

  static NmseVsComparisonsSpec paper_scale();
};

/// Balanced contiguous class labels.
std::vector<std::size_t> balanced_labels(std::size_t alternatives, std::size_t classes);

/// Ground truth x† = [I ; one-hot]. Series: "one_hot" (x†), "classic" (I).
/// Datasets for one seed are nested prefixes of a single draw.
std::vector<ExperimentResult> run_nmse_vs_comparisons(const NmseVsComparisonsSpec& spec, const RngStream& rng,
                                                      Execution exec = Execution::serial);

}  // namespace lgbt
