#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lgbt/laplacian.hpp"

namespace lgbt {

/// D×A matrix whose column a embeds alternative a, with its cached Gram
/// matrix xᵀx. A 0×A embedding is valid and has a zero Gram matrix.
class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(Matrix x);

  static Embedding identity(std::size_t num_alternatives);

  const Matrix& matrix() const { return x_; }
  const Matrix& gram() const { return gram_; }
  std::size_t dims() const { return static_cast<std::size_t>(x_.rows()); }
  std::size_t alternatives() const { return static_cast<std::size_t>(x_.cols()); }

 private:
  Matrix x_;
  Matrix gram_;
};

/// One-hot class indicators (classes × A) stacked over s·I. For s = 0 only the
/// indicator rows are returned. labels[a] is the class of alternative a.
Embedding one_hot_from_labels(std::span<const std::size_t> labels, double s = 0.0);

/// Same as one_hot_from_labels with contiguous classes of the given sizes.
Embedding one_hot_embedding(std::span<const std::size_t> class_sizes, double s = 0.0);

/// Row-stacks two embeddings over the same alternatives; gram adds.
Embedding concat_embeddings(const Embedding& top, const Embedding& bottom);

/// [I ; x/λ], the identity-padded embedding.
Embedding identity_padded(const Embedding& x, double lambda);

}  // namespace lgbt
