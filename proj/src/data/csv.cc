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

#include "eupg/data/csv.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "eupg/common/error.h"

namespace eupg::data {
namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

// Splits one CSV record. Throws on an unterminated quote.
std::vector<Field> SplitRecord(const std::string& line, size_t line_no,
                               const std::string& source) {
  std::vector<Field> fields;
  Field cur;
  bool in_quotes = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.text += ch;
      }
    } else if (ch == '"' && cur.text.empty() && !cur.quoted) {
      in_quotes = true;
      cur.quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur = Field{};
    } else {
      cur.text += ch;
    }
  }
  if (in_quotes) {
    throw DataError(source + ": line " + std::to_string(line_no) +
                    ": unterminated quoted field");
  }
  fields.push_back(std::move(cur));
  for (auto& f : fields) {
    if (!f.quoted) {
      const auto first = f.text.find_first_not_of(" \t");
      const auto last = f.text.find_last_not_of(" \t");
      f.text = first == std::string::npos
                   ? std::string()
                   : f.text.substr(first, last - first + 1);
    }
  }
  return fields;
}

std::string FormatNumber(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string QuoteIfNeeded(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos && !s.empty() &&
      s.front() != ' ' && s.back() != ' ') {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

TabularDataset ReadCsv(std::istream& in, const Schema& schema_in,
                       const std::string& source) {
  Schema schema = schema_in;
  const size_t ncols = schema.size();
  std::vector<bool> open_categories(ncols);
  for (size_t j = 0; j < ncols; ++j) {
    open_categories[j] =
        schema[j].is_categorical() && schema[j].categories.empty();
  }

  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw DataError(source + ": missing header line");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  const auto header = SplitRecord(line, line_no, source);
  if (header.size() != ncols) {
    throw DataError(source + ": header has " + std::to_string(header.size()) +
                    " columns, schema has " + std::to_string(ncols));
  }
  for (size_t j = 0; j < ncols; ++j) {
    if (header[j].text != schema[j].name) {
      throw DataError(source + ": header column " + std::to_string(j + 1) +
                      " is '" + header[j].text + "', schema expects '" +
                      schema[j].name + "'");
    }
  }

  std::vector<double> cells;
  std::vector<NumericRange> observed(ncols, {HUGE_VAL, -HUGE_VAL});
  size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++row;
    const auto fields = SplitRecord(line, line_no, source);
    auto where = [&](size_t j) {
      return source + ": row " + std::to_string(row) + ", column \"" +
             schema[j].name + "\"";
    };
    if (fields.size() != ncols) {
      throw DataError(source + ": row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(ncols));
    }
    for (size_t j = 0; j < ncols; ++j) {
      const std::string& text = fields[j].text;
      if (text.empty()) throw DataError(where(j) + ": missing value");
      auto& attr = schema.mutable_attribute(j);
      if (attr.is_numeric()) {
        double v = 0.0;
        const char* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (fields[j].quoted || ec != std::errc() || ptr != end ||
            !std::isfinite(v)) {
          throw DataError(where(j) + ": cannot parse '" + text +
                          "' as a number");
        }
        observed[j].min = std::min(observed[j].min, v);
        observed[j].max = std::max(observed[j].max, v);
        cells.push_back(v);
      } else {
        auto idx = attr.FindCategory(text);
        if (!idx) {
          if (!open_categories[j]) {
            throw DataError(where(j) + ": unknown category '" + text + "'");
          }
          attr.categories.push_back(text);
          idx = attr.categories.size() - 1;
        }
        cells.push_back(static_cast<double>(*idx));
      }
    }
  }
  for (size_t j = 0; j < ncols; ++j) {
    auto& attr = schema.mutable_attribute(j);
    if (attr.is_numeric() && !attr.range && row > 0) {
      attr.range = observed[j];
    }
  }
  schema.Validate();
  return TabularDataset(std::move(schema), std::move(cells),
                        DatasetProvenance::Raw());
}

TabularDataset LoadCsv(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file '" + path + "'");
  return ReadCsv(in, schema, path);
}

void WriteCsv(const TabularDataset& ds, std::ostream& out) {
  const Schema& schema = ds.schema();
  for (size_t j = 0; j < schema.size(); ++j) {
    if (j) out << ',';
    out << QuoteIfNeeded(schema[j].name);
  }
  out << '\n';
  for (size_t i = 0; i < ds.rows(); ++i) {
    for (size_t j = 0; j < schema.size(); ++j) {
      if (j) out << ',';
      const double v = ds.at(i, j);
      if (schema[j].is_numeric()) {
        out << FormatNumber(v);
      } else {
        out << QuoteIfNeeded(schema[j].categories[static_cast<size_t>(v)]);
      }
    }
    out << '\n';
  }
}

void SaveCsv(const TabularDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV file '" + path + "'");
  WriteCsv(ds, out);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace eupg::data
