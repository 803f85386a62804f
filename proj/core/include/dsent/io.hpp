#pragma once

// JSON file formats:
//   collection  {"weights": [...], "functions": [[...], ...]}
//   operator    {"weights": [...], "matrix": [[...], ...]}

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "dsent/operator.hpp"
#include "dsent/space.hpp"

namespace dsent {

/// Throws ParseError on malformed JSON or missing keys, and the validation
/// errors of the space, collection and operator constructors. When `space`
/// is given, "weights" may be omitted and otherwise must match it.
Collection read_collection(std::istream& in, const std::optional<FiniteSpace>& space = std::nullopt);
DenseOperator read_operator(std::istream& in);

Collection read_collection_file(const std::filesystem::path& path,
                                const std::optional<FiniteSpace>& space = std::nullopt);
DenseOperator read_operator_file(const std::filesystem::path& path);

/// Doubles are written with enough digits to round-trip exactly.
void write_collection(std::ostream& out, const Collection& f);
void write_operator(std::ostream& out, const DenseOperator& t);

}  // namespace dsent
