#include "lgbt/embedding.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lgbt {

Embedding::Embedding(Matrix x) : x_(std::move(x)), gram_(x_.transpose() * x_) {}

Embedding Embedding::identity(std::size_t num_alternatives) {
  const auto n = static_cast<Eigen::Index>(num_alternatives);
  return Embedding(Matrix::Identity(n, n));
}

Embedding one_hot_from_labels(std::span<const std::size_t> labels, double s) {
  if (labels.empty()) throw std::invalid_argument("one_hot_from_labels: no alternatives");
  const std::size_t classes = *std::max_element(labels.begin(), labels.end()) + 1;
  const auto n = static_cast<Eigen::Index>(labels.size());
  const auto k = static_cast<Eigen::Index>(classes);
  const Eigen::Index rows = s == 0.0 ? k : k + n;
  Matrix x = Matrix::Zero(rows, n);
  for (Eigen::Index a = 0; a < n; ++a) x(static_cast<Eigen::Index>(labels[a]), a) = 1.0;
  if (s != 0.0) x.bottomRows(n) = s * Matrix::Identity(n, n);
  return Embedding(std::move(x));
}

Embedding one_hot_embedding(std::span<const std::size_t> class_sizes, double s) {
  if (class_sizes.empty()) throw std::invalid_argument("one_hot_embedding: empty partition");
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < class_sizes.size(); ++c) {
    if (class_sizes[c] == 0) throw std::invalid_argument("one_hot_embedding: empty class");
    labels.insert(labels.end(), class_sizes[c], c);
  }
  return one_hot_from_labels(labels, s);
}

Embedding concat_embeddings(const Embedding& top, const Embedding& bottom) {
  if (top.alternatives() != bottom.alternatives())
    throw std::invalid_argument("concat_embeddings: embeddings cover different alternatives");
  Matrix x(top.matrix().rows() + bottom.matrix().rows(), top.matrix().cols());
  x << top.matrix(), bottom.matrix();
  return Embedding(std::move(x));
}

Embedding identity_padded(const Embedding& x, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("identity_padded: λ must be positive");
  return concat_embeddings(Embedding::identity(x.alternatives()), Embedding(x.matrix() / lambda));
}

}  // namespace lgbt
