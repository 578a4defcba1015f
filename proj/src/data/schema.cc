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

#include "eupg/data/schema.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "eupg/common/error.h"

namespace eupg::data {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(Trim(s.substr(start)));
      return out;
    }
    out.push_back(Trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

double ParseBound(std::string_view s, size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("schema line " + std::to_string(line) +
                    ": cannot parse range bound '" + std::string(s) + "'");
  }
  return v;
}

std::string FormatDouble(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::optional<size_t> AttributeSchema::FindCategory(
    std::string_view label) const {
  for (size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == label) return i;
  }
  return std::nullopt;
}

std::string_view KindName(AttributeKind kind) {
  return kind == AttributeKind::kNumeric ? "numeric" : "categorical";
}

std::string_view RoleName(AttributeRole role) {
  switch (role) {
    case AttributeRole::kQuasiIdentifier:
      return "quasi_identifier";
    case AttributeRole::kClass:
      return "class";
    case AttributeRole::kOther:
      return "other";
  }
  return "other";
}

Schema::Schema(std::vector<AttributeSchema> attributes)
    : attributes_(std::move(attributes)) {
  Validate();
}

Schema Schema::Parse(std::string_view text) {
  std::vector<AttributeSchema> attrs;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    const auto fields = Split(line, ',');
    if (fields.size() < 3) {
      throw DataError("schema line " + std::to_string(line_no) +
                      ": expected name,kind,role[,...]");
    }
    AttributeSchema a;
    a.name = std::string(fields[0]);
    if (a.name.empty()) {
      throw DataError("schema line " + std::to_string(line_no) +
                      ": empty attribute name");
    }
    if (fields[1] == "numeric") {
      a.kind = AttributeKind::kNumeric;
    } else if (fields[1] == "categorical") {
      a.kind = AttributeKind::kCategorical;
    } else {
      throw DataError("schema line " + std::to_string(line_no) +
                      ": unknown kind '" + std::string(fields[1]) + "'");
    }
    if (fields[2] == "quasi_identifier" || fields[2] == "qi") {
      a.role = AttributeRole::kQuasiIdentifier;
    } else if (fields[2] == "class") {
      a.role = AttributeRole::kClass;
    } else if (fields[2] == "other") {
      a.role = AttributeRole::kOther;
    } else {
      throw DataError("schema line " + std::to_string(line_no) +
                      ": unknown role '" + std::string(fields[2]) + "'");
    }
    if (a.is_numeric()) {
      if (fields.size() == 5) {
        a.range = NumericRange{ParseBound(fields[3], line_no),
                               ParseBound(fields[4], line_no)};
        a.range_declared = true;
      } else if (fields.size() != 3) {
        throw DataError("schema line " + std::to_string(line_no) +
                        ": numeric attribute takes either no range or MIN,MAX");
      }
    } else {
      if (fields.size() == 4) {
        for (auto label : Split(fields[3], '|')) {
          a.categories.emplace_back(label);
        }
      } else if (fields.size() != 3) {
        throw DataError("schema line " + std::to_string(line_no) +
                        ": categorical labels must be '|'-separated");
      }
    }
    attrs.push_back(std::move(a));
  }
  return Schema(std::move(attrs));
}

Schema Schema::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::string Schema::ToText() const {
  std::string out;
  for (const auto& a : attributes_) {
    out += a.name;
    out += ',';
    out += KindName(a.kind);
    out += ',';
    out += RoleName(a.role);
    if (a.is_numeric() && a.range) {
      out += ',' + FormatDouble(a.range->min) + ',' +
             FormatDouble(a.range->max);
    } else if (a.is_categorical() && !a.categories.empty()) {
      out += ',';
      for (size_t i = 0; i < a.categories.size(); ++i) {
        if (i) out += '|';
        out += a.categories[i];
      }
    }
    out += '\n';
  }
  return out;
}

void Schema::Validate() const {
  size_t class_count = 0;
  std::set<std::string> names;
  for (const auto& a : attributes_) {
    if (!names.insert(a.name).second) {
      throw DataError("duplicate attribute name '" + a.name + "'");
    }
    if (a.role == AttributeRole::kClass) {
      ++class_count;
      if (!a.is_categorical()) {
        throw DataError("class attribute '" + a.name +
                        "' must be categorical");
      }
    }
    if (a.is_numeric() && a.range && !(a.range->min <= a.range->max)) {
      throw DataError("attribute '" + a.name + "': min > max");
    }
    std::set<std::string> labels;
    for (const auto& c : a.categories) {
      if (!labels.insert(c).second) {
        throw DataError("attribute '" + a.name + "': duplicate category '" +
                        c + "'");
      }
    }
  }
  if (class_count != 1) {
    throw DataError("schema must have exactly one class attribute, found " +
                    std::to_string(class_count));
  }
}

size_t Schema::class_index() const {
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].role == AttributeRole::kClass) return i;
  }
  throw DataError("schema has no class attribute");
}

std::vector<size_t> Schema::QuasiIdentifierIndices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].role == AttributeRole::kQuasiIdentifier) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<size_t> Schema::NonClassIndices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].role != AttributeRole::kClass) out.push_back(i);
  }
  return out;
}

std::optional<size_t> Schema::FindAttribute(std::string_view name) const {
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

size_t Schema::num_classes() const {
  return attributes_[class_index()].categories.size();
}

bool Schema::operator==(const Schema& other) const {
  if (attributes_.size() != other.attributes_.size()) return false;
  for (size_t i = 0; i < attributes_.size(); ++i) {
    const auto& a = attributes_[i];
    const auto& b = other.attributes_[i];
    if (a.name != b.name || a.kind != b.kind || a.role != b.role ||
        a.range_declared != b.range_declared ||
        a.categories != b.categories || a.range.has_value() != b.range.has_value()) {
      return false;
    }
    if (a.range && (a.range->min != b.range->min || a.range->max != b.range->max)) {
      return false;
    }
  }
  return true;
}

}  // namespace eupg::data
