#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgbt/dataset.hpp"
#include "lgbt/embedding_audit.hpp"
#include "lgbt/experiments.hpp"
#include "lgbt/model.hpp"
#include "lgbt/monotonicity.hpp"

namespace lgbt::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input, with a 1-based location when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);
  std::size_t line;
  std::size_t column;
};

// Matrices: CSV (one row per line) or JSON (nested arrays), chosen by extension.
Matrix parse_matrix_csv(std::istream& in, const std::string& source = "<input>");
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json vector_to_json(const Vector& v);

/// Dataset CSV: header `a,b,r`, 1-based ids. When `num_alternatives` is not
/// given it is the largest id seen. With a law, values outside its range are
/// reported with their line.
Dataset parse_dataset_csv(std::istream& in, std::optional<std::size_t> num_alternatives = std::nullopt,
                          std::optional<RootLaw> law = std::nullopt, const std::string& source = "<input>");
Dataset read_dataset(const std::filesystem::path& path, std::optional<std::size_t> num_alternatives = std::nullopt,
                     std::optional<RootLaw> law = std::nullopt);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

/// {root_law, sigma, embedding_path, laplacian_path, num_alternatives}. Paths
/// resolve against the config file's directory; missing embedding means
/// x = I, missing Laplacian means L = 0.
struct ConfigFile {
  RootLaw law;
  double sigma = 1.0;
  std::optional<Matrix> embedding;
  std::optional<Matrix> laplacian;
  std::optional<std::size_t> num_alternatives;

  /// Number of alternatives implied by the file alone, if any.
  std::optional<std::size_t> implied_alternatives() const;
  ModelConfig build(std::size_t num_alternatives) const;
};
ConfigFile read_config(const std::filesystem::path& path);

json to_json(const FitResult& r);
json to_json(const GoodnessReport& r);
json to_json(const DiffusionReport& r);
json to_json(const Operation& op);
Operation operation_from_json(const json& j);
json to_json(const Dataset& d);
Dataset dataset_from_json(const json& j);
json to_json(const OperationTrace& t);
json to_json(const AuditSummary& s);

/// Replayable bundle {x, L, D, ops, target, root_law, sigma, drop}.
json to_json(const ViolationWitness& w);
ViolationWitness witness_from_json(const json& j);

json to_json(const HeatmapSpec& s);
json to_json(const NmseVsDimsSpec& s);
json to_json(const NmseVsComparisonsSpec& s);

/// Long format: series,A,D,N,estimate,stderr,n,discarded.
std::string results_csv(const std::vector<ExperimentResult>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

}  // namespace lgbt::io
