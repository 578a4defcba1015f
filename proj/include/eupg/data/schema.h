// Copyright 2026 The EUPG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EUPG_DATA_SCHEMA_H_
#define EUPG_DATA_SCHEMA_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eupg::data {

enum class AttributeKind { kNumeric, kCategorical };
enum class AttributeRole { kQuasiIdentifier, kClass, kOther };

struct NumericRange {
  double min = 0.0;
  double max = 0.0;
  double width() const { return max - min; }
  bool Contains(double v) const { return v >= min && v <= max; }
};

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  AttributeRole role = AttributeRole::kQuasiIdentifier;
  // Numeric only. Set either by the schema file (range_declared = true) or
  // from the observed min/max of the first dataset loaded with this schema.
  std::optional<NumericRange> range;
  bool range_declared = false;
  // Categorical only. Position in this list is the stored category index.
  std::vector<std::string> categories;

  bool is_numeric() const { return kind == AttributeKind::kNumeric; }
  bool is_categorical() const { return kind == AttributeKind::kCategorical; }
  // Returns the index of `label`, or nullopt.
  std::optional<size_t> FindCategory(std::string_view label) const;
};

// Ordered attribute list. Exactly one attribute carries the class role.
//
// Schema file grammar (one attribute per line, '#' starts a comment):
//
//   name,numeric,ROLE[,MIN,MAX]
//   name,categorical,ROLE[,LABEL|LABEL|...]
//
// where ROLE is one of `quasi_identifier` (alias `qi`), `class`, `other`.
// A numeric attribute without MIN,MAX takes the observed range of the first
// dataset loaded against the schema. A categorical attribute without a
// label list is open: labels are appended in order of first appearance.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttributeSchema> attributes);

  static Schema Parse(std::string_view text);
  static Schema LoadFile(const std::string& path);
  std::string ToText() const;

  // Throws DataError when an invariant fails.
  void Validate() const;

  size_t size() const { return attributes_.size(); }
  const AttributeSchema& operator[](size_t i) const { return attributes_[i]; }
  AttributeSchema& mutable_attribute(size_t i) { return attributes_[i]; }
  const std::vector<AttributeSchema>& attributes() const {
    return attributes_;
  }

  size_t class_index() const;
  // Attributes that quasi-identify a record (role == quasi_identifier).
  std::vector<size_t> QuasiIdentifierIndices() const;
  // Every attribute except the class attribute.
  std::vector<size_t> NonClassIndices() const;
  std::optional<size_t> FindAttribute(std::string_view name) const;
  size_t num_classes() const;

  bool operator==(const Schema& other) const;

 private:
  std::vector<AttributeSchema> attributes_;
};

std::string_view KindName(AttributeKind kind);
std::string_view RoleName(AttributeRole role);

}  // namespace eupg::data

#endif  // EUPG_DATA_SCHEMA_H_
