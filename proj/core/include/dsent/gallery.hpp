#pragma once

// Named example operators with their expected, machine-checked properties.

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsent/operator.hpp"

namespace dsent {

struct PropertyOutcome {
  bool passed = false;
  std::string detail;
};

struct ExpectedProperty {
  std::string name;
  /// How the expected value is known: "structural", "closed-form" or
  /// "computed".
  std::string basis;
  std::function<PropertyOutcome()> check;
};

struct GalleryEntry {
  std::string name;
  std::string parameters;
  std::string description;
  std::vector<ExpectedProperty> properties;
};

struct PropertyResult {
  std::string name;
  std::string basis;
  bool passed = false;
  std::string detail;
};

struct GalleryReport {
  std::string name;
  std::string parameters;
  std::vector<PropertyResult> results;
  double seconds = 0.0;
  bool passed() const;
};

const std::vector<GalleryEntry>& gallery_list();

/// Throws UnknownEntry.
GalleryReport gallery_run(std::string_view name);

/// Dense-backend gallery operators by entry name.
std::vector<std::pair<std::string, DenseOperator>> gallery_dense_operators();

}  // namespace dsent
