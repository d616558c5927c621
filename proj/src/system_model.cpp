#include "ddestab/system_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace ddestab {

using nlohmann::json;

DelaySystem::DelaySystem(Matrix a0, std::vector<DelayedTerm> delayed)
    : a0_(std::move(a0)), delayed_(std::move(delayed)) {
  if (a0_.empty() || !a0_.square()) {
    throw std::invalid_argument("A0 must be square, got " +
                                describe_shape(a0_.rows(), a0_.cols()));
  }
  const std::size_t n = a0_.rows();
  if (n > kMaxDimension) {
    throw std::invalid_argument("dimension " + std::to_string(n) + " exceeds the limit of " +
                                std::to_string(kMaxDimension));
  }
  if (!a0_.all_finite()) {
    throw std::invalid_argument("A0 has non-finite entries");
  }
  for (std::size_t j = 0; j < delayed_.size(); ++j) {
    const auto& term = delayed_[j];
    const std::string label = "delays[" + std::to_string(j) + "]";
    if (!std::isfinite(term.tau) || term.tau <= 0.0) {
      throw std::invalid_argument(label + ": nonpositive delay");
    }
    if (term.coeff.rows() != n || term.coeff.cols() != n) {
      throw std::invalid_argument(label + ": dimension mismatch, A is " +
                                  describe_shape(term.coeff.rows(), term.coeff.cols()) +
                                  " but A0 is " + describe_shape(n, n));
    }
    if (!term.coeff.all_finite()) {
      throw std::invalid_argument(label + ": non-finite entries");
    }
  }
}

DelaySystem DelaySystem::with_scaled_delays(double factor) const {
  if (!std::isfinite(factor) || factor <= 0.0) {
    throw std::invalid_argument("delay scale factor must be positive");
  }
  auto terms = delayed_;
  for (auto& t : terms) {
    t.tau *= factor;
  }
  return DelaySystem(a0_, std::move(terms));
}

Matrix coefficient_sum(const DelaySystem& sys) {
  Matrix sum = sys.a0();
  for (const auto& term : sys.delayed_terms()) {
    sum += term.coeff;
  }
  return sum;
}

double coefficient_norm_bound(const DelaySystem& sys) {
  double bound = frobenius_norm(sys.a0());
  for (const auto& term : sys.delayed_terms()) {
    bound += frobenius_norm(term.coeff);
  }
  return bound;
}

namespace {

// expected_dim == 0 means "any square shape".
Matrix parse_matrix(const json& node, const std::string& field, std::size_t expected_dim) {
  if (!node.is_array() || node.empty()) {
    throw ParseError(field + ": expected a non-empty array of rows");
  }
  const std::size_t rows = node.size();
  std::size_t cols = 0;
  std::vector<double> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = node[r];
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty()) {
      throw ParseError(row_field + ": expected a non-empty array of numbers");
    }
    if (r == 0) {
      cols = row.size();
      entries.reserve(rows * cols);
    } else if (row.size() != cols) {
      throw ParseError(row_field + ": row has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& v = row[c];
      if (!v.is_number()) {
        throw ParseError(row_field + "[" + std::to_string(c) + "]: expected a number");
      }
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        throw ParseError(row_field + "[" + std::to_string(c) + "]: non-finite entry");
      }
      entries.push_back(x);
    }
  }
  if (expected_dim != 0 && (rows != expected_dim || cols != expected_dim)) {
    throw ParseError(field + ": dimension mismatch, " + describe_shape(rows, cols) +
                     " but A0 is " + describe_shape(expected_dim, expected_dim));
  }
  if (rows != cols) {
    throw ParseError(field + ": non-square matrix (" + describe_shape(rows, cols) + ")");
  }
  return Matrix(rows, cols, std::move(entries));
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

DelaySystem parse_system(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    // nlohmann reports "line L, column C" in what() for syntax errors.
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("document: expected a JSON object");
  }
  if (!doc.contains("A0")) {
    throw ParseError("A0: missing field");
  }
  Matrix a0 = parse_matrix(doc["A0"], "A0", 0);
  const std::size_t n = a0.rows();
  if (n > kMaxDimension) {
    throw ParseError("A0: dimension " + std::to_string(n) + " exceeds the limit of " +
                     std::to_string(kMaxDimension));
  }

  std::vector<DelayedTerm> terms;
  if (doc.contains("delays")) {
    const auto& delays = doc["delays"];
    if (!delays.is_array()) {
      throw ParseError("delays: expected an array");
    }
    for (std::size_t j = 0; j < delays.size(); ++j) {
      const std::string field = "delays[" + std::to_string(j) + "]";
      const auto& entry = delays[j];
      if (!entry.is_object()) {
        throw ParseError(field + ": expected an object with \"tau\" and \"A\"");
      }
      if (!entry.contains("tau") || !entry["tau"].is_number()) {
        throw ParseError(field + ".tau: missing or not a number");
      }
      const double tau = entry["tau"].get<double>();
      if (!std::isfinite(tau) || tau <= 0.0) {
        throw ParseError(field + ".tau: nonpositive delay");
      }
      if (!entry.contains("A")) {
        throw ParseError(field + ".A: missing field");
      }
      Matrix a = parse_matrix(entry["A"], field + ".A", n);
      terms.push_back({tau, std::move(a)});
    }
  }
  return DelaySystem(std::move(a0), std::move(terms));
}

std::string serialize_system(const DelaySystem& sys) {
  json doc;
  doc["A0"] = matrix_to_json(sys.a0());
  json delays = json::array();
  for (const auto& term : sys.delayed_terms()) {
    delays.push_back({{"tau", term.tau}, {"A", matrix_to_json(term.coeff)}});
  }
  doc["delays"] = std::move(delays);
  return doc.dump(2) + "\n";
}

DelaySystem load_system(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::ios_base::failure("cannot open system file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

}  // namespace ddestab
