#include "lgbt/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace lgbt::io {

namespace fs = std::filesystem;

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line(line),
      column(column) {}

namespace {

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<Field> split_fields(std::string_view line) {
  std::vector<Field> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    const auto raw = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    const auto lead = raw.find_first_not_of(" \t");
    fields.push_back({trim(raw), start + 1 + (lead == std::string_view::npos ? 0 : lead)});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(const Field& f, const std::string& source, std::size_t line) {
  double value = 0.0;
  const auto* end = f.text.data() + f.text.size();
  const auto [ptr, ec] = std::from_chars(f.text.data(), end, value);
  if (f.text.empty() || ec != std::errc() || ptr != end)
    throw ParseError(source, line, f.column, "expected a number, got '" + std::string(f.text) + "'");
  if (!std::isfinite(value)) throw ParseError(source, line, f.column, "value is not finite");
  return value;
}

std::size_t parse_id(const Field& f, const std::string& source, std::size_t line) {
  std::size_t value = 0;
  const auto* end = f.text.data() + f.text.size();
  const auto [ptr, ec] = std::from_chars(f.text.data(), end, value);
  if (f.text.empty() || ec != std::errc() || ptr != end || value == 0)
    throw ParseError(source, line, f.column, "expected a positive integer id, got '" + std::string(f.text) + "'");
  return value;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Matrix parse_matrix_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    std::vector<double> row;
    for (const auto& f : split_fields(line)) row.push_back(parse_double(f, source, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(source, lineno, 1,
                       "row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix must be a JSON array of rows");
  if (j.empty()) return Matrix(0, 0);
  const std::size_t cols = j.front().size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw std::invalid_argument("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.begin(), v.end())); }

Matrix read_matrix(const fs::path& path) {
  if (path.extension() == ".json") return matrix_from_json(read_json(path));
  auto in = open_input(path);
  return parse_matrix_csv(in, path.string());
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_double(m(i, j));
    os << '\n';
  }
  write_text(path, os.str());
}

Dataset parse_dataset_csv(std::istream& in, std::optional<std::size_t> num_alternatives, std::optional<RootLaw> law,
                          const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<ComparisonSample> samples;
  std::size_t max_id = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (!header) {
      if (fields.size() != 3 || fields[0].text != "a" || fields[1].text != "b" || fields[2].text != "r")
        throw ParseError(source, lineno, 1, "expected header 'a,b,r'");
      header = true;
      continue;
    }
    if (fields.size() != 3)
      throw ParseError(source, lineno, 1, "expected 3 fields, got " + std::to_string(fields.size()));
    const std::size_t a = parse_id(fields[0], source, lineno);
    const std::size_t b = parse_id(fields[1], source, lineno);
    const double r = parse_double(fields[2], source, lineno);
    if (a == b) throw ParseError(source, lineno, fields[1].column, "an alternative cannot be compared with itself");
    if (num_alternatives && std::max(a, b) > *num_alternatives)
      throw ParseError(source, lineno, a > *num_alternatives ? fields[0].column : fields[1].column,
                       "id exceeds the number of alternatives (" + std::to_string(*num_alternatives) + ")");
    if (law && !law->in_range(r))
      throw ParseError(source, lineno, fields[2].column,
                       "comparison " + std::string(fields[2].text) + " is outside the " + law->name() + " range");
    max_id = std::max({max_id, a, b});
    samples.push_back({a - 1, b - 1, r});
  }
  if (!header) throw ParseError(source, lineno + 1, 1, "missing header 'a,b,r'");
  return Dataset(num_alternatives.value_or(max_id), std::move(samples));
}

Dataset read_dataset(const fs::path& path, std::optional<std::size_t> num_alternatives, std::optional<RootLaw> law) {
  auto in = open_input(path);
  return parse_dataset_csv(in, num_alternatives, law, path.string());
}

void write_dataset_csv(const fs::path& path, const Dataset& data) {
  std::ostringstream os;
  os << "a,b,r\n";
  for (const auto& s : data.samples()) os << s.a + 1 << ',' << s.b + 1 << ',' << format_double(s.r) << '\n';
  write_text(path, os.str());
}

std::optional<std::size_t> ConfigFile::implied_alternatives() const {
  if (embedding) return static_cast<std::size_t>(embedding->cols());
  if (laplacian) return static_cast<std::size_t>(laplacian->rows());
  return num_alternatives;
}

ModelConfig ConfigFile::build(std::size_t n) const {
  const auto k = static_cast<Eigen::Index>(n);
  ModelConfig cfg{law, sigma, embedding ? Embedding(*embedding) : Embedding::identity(n),
                  laplacian ? *laplacian : Matrix::Zero(k, k)};
  cfg.validate();
  return cfg;
}

ConfigFile read_config(const fs::path& path) {
  const json j = read_json(path);
  if (!j.is_object()) throw std::invalid_argument(path.string() + ": config must be a JSON object");
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  ConfigFile cfg;
  cfg.law = RootLaw::parse(j.value("root_law", std::string("uniform")));
  cfg.sigma = j.value("sigma", 1.0);
  if (j.contains("embedding_path") && !j["embedding_path"].is_null())
    cfg.embedding = read_matrix(resolve(j["embedding_path"].get<std::string>()));
  if (j.contains("laplacian_path") && !j["laplacian_path"].is_null())
    cfg.laplacian = read_matrix(resolve(j["laplacian_path"].get<std::string>()));
  if (j.contains("num_alternatives")) cfg.num_alternatives = j["num_alternatives"].get<std::size_t>();
  return cfg;
}

json to_json(const FitResult& r) {
  return {{"theta_star", vector_to_json(r.theta_star)},
          {"beta_star", vector_to_json(r.beta_star)},
          {"grad_norm", r.grad_norm},
          {"iterations", r.iterations}};
}

json to_json(const GoodnessReport& r) {
  json j{{"verdict", verdict_name(r.verdict)},
         {"trials", r.trials},
         {"exact", r.exact},
         {"min_relative_margin", r.min_margin}};
  if (r.witness) {
    j["witness"] = {{"Y", matrix_to_json(r.witness->y)},
                    {"a", r.witness->a + 1},
                    {"b", r.witness->b + 1},
                    {"margin", r.witness->margin},
                    {"trial", r.witness->trial}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const DiffusionReport& r) {
  json j{{"verdict", r.pass ? "pass" : "fail"}, {"min_relative_margin", r.min_relative_margin}};
  j["violating_lambda"] = r.violating_lambda ? json(*r.violating_lambda) : json(nullptr);
  return j;
}

json to_json(const Operation& op) {
  if (const auto* e = std::get_if<Exchange>(&op)) return {{"op", "exchange"}, {"n", e->n + 1}};
  if (const auto* s = std::get_if<Shuffle>(&op)) {
    std::vector<std::size_t> perm;
    for (auto p : s->perm) perm.push_back(p + 1);
    return {{"op", "shuffle"}, {"count", s->count}, {"perm", perm}};
  }
  if (const auto* p = std::get_if<Append>(&op)) return {{"op", "append"}, {"a", p->a + 1}, {"b", p->b + 1}, {"r", p->r}};
  const auto& u = std::get<Update>(op);
  return {{"op", "update"}, {"n", u.n + 1}, {"r", u.r}};
}

Operation operation_from_json(const json& j) {
  const auto kind = j.at("op").get<std::string>();
  auto index = [&](const char* key) {
    const auto v = j.at(key).get<std::size_t>();
    if (v == 0) throw std::invalid_argument(std::string("operation field '") + key + "' is 1-based");
    return v - 1;
  };
  if (kind == "exchange") return Exchange{index("n")};
  if (kind == "shuffle") {
    std::vector<std::size_t> perm;
    for (auto p : j.at("perm").get<std::vector<std::size_t>>()) perm.push_back(p - 1);
    return Shuffle{j.at("count").get<std::size_t>(), std::move(perm)};
  }
  if (kind == "append") return Append{index("a"), index("b"), j.at("r").get<double>()};
  if (kind == "update") return Update{index("n"), j.at("r").get<double>()};
  throw std::invalid_argument("unknown operation '" + kind + "'");
}

json to_json(const Dataset& d) {
  json samples = json::array();
  for (const auto& s : d.samples()) samples.push_back({s.a + 1, s.b + 1, s.r});
  return {{"num_alternatives", d.num_alternatives()}, {"samples", samples}};
}

Dataset dataset_from_json(const json& j) {
  std::vector<ComparisonSample> samples;
  for (const auto& s : j.at("samples"))
    samples.push_back({s.at(0).get<std::size_t>() - 1, s.at(1).get<std::size_t>() - 1, s.at(2).get<double>()});
  return Dataset(j.at("num_alternatives").get<std::size_t>(), std::move(samples));
}

json to_json(const OperationTrace& t) {
  json ops = json::array();
  for (const auto& op : t.ops) ops.push_back(to_json(op));
  return {{"target", t.target + 1}, {"ops", ops}};
}

json to_json(const AuditSummary& s) {
  json j{{"verdict", s.violations == 0 ? "pass" : "fail"},
         {"trials", s.trials},
         {"violations", s.violations},
         {"worst_change", s.worst_change}};
  if (s.first_failure) {
    j["first_failure"] = {{"trial", *s.first_failing_trial},
                          {"trace", to_json(*s.first_failing_trace)},
                          {"step", s.first_failure->step + 1},
                          {"drop", s.first_failure->drop},
                          {"before", to_json(s.first_failure->before)},
                          {"after", to_json(s.first_failure->after)}};
  } else {
    j["first_failure"] = nullptr;
  }
  return j;
}

json to_json(const ViolationWitness& w) {
  return {{"x", matrix_to_json(w.cfg.embedding.matrix())},
          {"L", matrix_to_json(w.cfg.laplacian)},
          {"D", to_json(w.data)},
          {"ops", json::array({to_json(w.op)})},
          {"target", w.target + 1},
          {"root_law", w.cfg.law.name()},
          {"sigma", w.cfg.sigma},
          {"drop", w.drop},
          {"trial", w.trial}};
}

ViolationWitness witness_from_json(const json& j) {
  ViolationWitness w;
  Matrix x = matrix_from_json(j.at("x"));
  if (x.rows() == 0) x.resize(0, static_cast<Eigen::Index>(j.at("D").at("num_alternatives").get<std::size_t>()));
  w.cfg = ModelConfig{RootLaw::parse(j.at("root_law").get<std::string>()), j.at("sigma").get<double>(),
                      Embedding(std::move(x)), matrix_from_json(j.at("L"))};
  w.data = dataset_from_json(j.at("D"));
  w.op = operation_from_json(j.at("ops").at(0));
  w.target = j.at("target").get<std::size_t>() - 1;
  w.drop = j.value("drop", 0.0);
  w.trial = j.value("trial", std::size_t{0});
  return w;
}

json to_json(const HeatmapSpec& s) {
  std::vector<std::string> modes;
  for (auto m : s.modes) modes.emplace_back(heatmap_mode_name(m));
  return {{"experiment", "goodness-heatmap"},
          {"alternatives", {s.min_alternatives, s.max_alternatives}},
          {"dims", {s.min_dims, s.max_dims}},
          {"embeddings_per_cell", s.embeddings_per_cell},
          {"laplacians_per_embedding", s.laplacians_per_embedding},
          {"scales", {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}},
          {"edge_probability", 0.5},
          {"embedding_distribution", "iid N(0,1)"},
          {"modes", modes}};
}

json to_json(const NmseVsDimsSpec& s) {
  return {{"experiment", "nmse-vs-d"},
          {"alternatives", s.alternatives},
          {"comparisons", s.comparisons},
          {"dims", s.dims},
          {"seeds", s.seeds},
          {"root_law", "uniform"},
          {"sigma", 1.0},
          {"laplacian", "zero"},
          {"ground_truth_embedding", "[I ; iid N(0,1) D×A]"},
          {"models", {"full", "identity", "features"}}};
}

json to_json(const NmseVsComparisonsSpec& s) {
  return {{"experiment", "nmse-vs-n"},
          {"alternatives", s.alternatives},
          {"classes", s.classes},
          {"partition", balanced_labels(s.alternatives, s.classes)},
          {"comparisons", s.comparisons},
          {"seeds", s.seeds},
          {"root_law", "uniform"},
          {"sigma", 1.0},
          {"laplacian", "zero"},
          {"ground_truth_embedding", "[I ; one-hot]"},
          {"nested_datasets", true},
          {"models", {"one_hot", "classic"}}};
}

std::string results_csv(const std::vector<ExperimentResult>& rows) {
  std::ostringstream os;
  os << "series,A,D,N,estimate,stderr,n,discarded\n";
  for (const auto& r : rows)
    os << r.series << ',' << r.alternatives << ',' << r.dims << ',' << r.comparisons << ','
       << format_double(r.estimate) << ',' << format_double(r.std_error) << ',' << r.n << ',' << r.discarded
       << '\n';
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; convert to line/column.
    in.clear();
    in.seekg(0);
    std::size_t line = 1, column = 1, offset = 0;
    char c;
    while (offset + 1 < e.byte && in.get(c)) {
      ++offset;
      if (c == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(path.string(), line, column, e.what());
  }
}

}  // namespace lgbt::io
