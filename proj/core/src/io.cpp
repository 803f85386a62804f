#include "dsent/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsent/error.hpp"

namespace dsent {

namespace {

using nlohmann::json;

json parse(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

const json& member(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string("missing key \"") + key + "\"");
  }
  return doc.at(key);
}

Eigen::VectorXd to_vector(const json& row, const char* what) {
  if (!row.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(row.size()));
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!row[i].is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must hold numbers");
    out[static_cast<Eigen::Index>(i)] = row[i].get<double>();
  }
  return out;
}

std::vector<Eigen::VectorXd> to_rows(const json& rows, const char* what) {
  if (!rows.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array of arrays");
  std::vector<Eigen::VectorXd> out;
  for (const auto& row : rows) out.push_back(to_vector(row, what));
  return out;
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return in;
}

}  // namespace

Collection read_collection(std::istream& in, const std::optional<FiniteSpace>& space) {
  const json doc = parse(in);
  const auto functions = to_rows(member(doc, "functions"), "functions");
  if (doc.is_object() && doc.contains("weights")) {
    FiniteSpace own = FiniteSpace::make(to_vector(doc.at("weights"), "weights"));
    if (space) require_same_space(*space, own);
    return Collection(std::move(own), functions);
  }
  if (!space) throw Error(ErrorCode::ParseError, "missing key \"weights\"");
  return Collection(*space, functions);
}

DenseOperator read_operator(std::istream& in) {
  const json doc = parse(in);
  FiniteSpace space = FiniteSpace::make(to_vector(member(doc, "weights"), "weights"));
  const auto rows = to_rows(member(doc, "matrix"), "matrix");
  const auto n = static_cast<Eigen::Index>(space.size());
  if (static_cast<Eigen::Index>(rows.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "matrix needs " + std::to_string(n) + " rows");
  }
  Eigen::MatrixXd kernel(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rows[static_cast<std::size_t>(i)].size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "matrix row " + std::to_string(i) + " has wrong length");
    }
    kernel.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  }
  return DenseOperator::from_matrix(std::move(space), std::move(kernel));
}

Collection read_collection_file(const std::filesystem::path& path, const std::optional<FiniteSpace>& space) {
  auto in = open(path);
  return read_collection(in, space);
}

DenseOperator read_operator_file(const std::filesystem::path& path) {
  auto in = open(path);
  return read_operator(in);
}

void write_collection(std::ostream& out, const Collection& f) {
  json doc;
  doc["weights"] = to_json(f.space().weights());
  doc["functions"] = json::array();
  for (const auto& g : f.functions()) doc["functions"].push_back(to_json(g));
  out << doc.dump() << '\n';
}

void write_operator(std::ostream& out, const DenseOperator& t) {
  json doc;
  doc["weights"] = to_json(t.space().weights());
  doc["matrix"] = json::array();
  for (Eigen::Index i = 0; i < t.matrix().rows(); ++i) doc["matrix"].push_back(to_json(t.matrix().row(i).transpose()));
  out << doc.dump() << '\n';
}

}  // namespace dsent
