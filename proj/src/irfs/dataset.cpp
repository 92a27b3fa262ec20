#include "irfs/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "irfs/errors.hpp"
#include "irfs/rng.hpp"
#include "irfs/stats.hpp"

namespace irfs {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::size_t stop = comma == std::string::npos ? line.size() : comma;
    fields.emplace_back(trim(std::string_view(line).substr(start, stop - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

// Accepts anything strtod consumes fully, including nan/inf spellings; the
// caller rejects non-finite values separately.
std::optional<double> parse_number(const std::string& token) {
  if (token.empty()) return std::nullopt;
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size()) return std::nullopt;
  return v;
}

std::size_t resolve_label_column(const std::string& spec, const std::vector<std::string>* header,
                                 std::size_t num_columns) {
  if (spec.empty()) return num_columns - 1;
  if (header) {
    const auto it = std::find(header->begin(), header->end(), spec);
    if (it != header->end()) return static_cast<std::size_t>(it - header->begin());
  }
  long long index = 0;
  const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), index);
  if (ec != std::errc{} || ptr != spec.data() + spec.size()) {
    throw SchemaError("label column '" + spec + "' not found");
  }
  const long long n = static_cast<long long>(num_columns);
  if (index < 0) index += n;
  if (index < 0 || index >= n) {
    throw SchemaError("label column index " + spec + " out of range for " +
                      std::to_string(num_columns) + " columns");
  }
  return static_cast<std::size_t>(index);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void validate(const Dataset& d, std::size_t min_samples) {
  if (d.values.size() != d.num_samples * d.num_features) {
    throw SchemaError("feature matrix size does not match num_samples x num_features");
  }
  if (d.labels.size() != d.num_samples) throw SchemaError("label count differs from sample count");
  if (d.feature_names.size() != d.num_features) throw SchemaError("feature name count differs from N");
  if (d.num_features < 2) throw SchemaError("dataset needs at least 2 feature columns");
  if (d.num_samples < min_samples) {
    throw SchemaError("dataset needs at least " + std::to_string(min_samples) + " rows, got " +
                      std::to_string(d.num_samples));
  }
  for (std::size_t j = 0; j < d.num_features; ++j) {
    for (std::size_t i = 0; i < d.num_samples; ++i) {
      if (!std::isfinite(d.at(i, j))) {
        throw ParseError(i + 1, j + 1, "non-finite value at row " + std::to_string(i + 1) +
                                           ", column " + std::to_string(j + 1));
      }
    }
  }
  std::vector<std::size_t> seen(d.num_classes, 0);
  for (int y : d.labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= d.num_classes) {
      throw LabelError("class id " + std::to_string(y) + " outside [0, C)");
    }
    ++seen[static_cast<std::size_t>(y)];
  }
  if (std::any_of(seen.begin(), seen.end(), [](std::size_t c) { return c == 0; })) {
    throw LabelError("some class id in [0, C) never appears");
  }
  if (d.num_classes < 2) throw LabelError("only one class present");
}

Dataset make_dataset(std::string name, const std::vector<std::vector<double>>& columns,
                     std::vector<int> labels, std::vector<std::string> feature_names,
                     std::size_t min_samples) {
  Dataset d;
  d.name = std::move(name);
  d.num_features = columns.size();
  d.num_samples = labels.size();
  d.values.reserve(d.num_features * d.num_samples);
  for (const auto& col : columns) {
    if (col.size() != d.num_samples) throw SchemaError("column length differs from label count");
    d.values.insert(d.values.end(), col.begin(), col.end());
  }
  if (feature_names.empty()) {
    for (std::size_t j = 0; j < d.num_features; ++j) feature_names.push_back("f" + std::to_string(j));
  }
  d.feature_names = std::move(feature_names);
  int max_label = -1;
  for (int y : labels) max_label = std::max(max_label, y);
  d.num_classes = static_cast<std::size_t>(max_label + 1);
  for (std::size_t c = 0; c < d.num_classes; ++c) d.class_tokens.push_back(std::to_string(c));
  d.labels = std::move(labels);
  validate(d, min_samples);
  return d;
}

Dataset parse_csv(std::istream& in, std::string name, const LoadOptions& options) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_fields(line));
  }
  if (rows.empty()) throw SchemaError("empty CSV input");
  const std::size_t num_columns = rows.front().size();
  if (num_columns < 3) throw SchemaError("need at least 2 feature columns plus a label column");

  bool has_header = false;
  std::size_t label_col = 0;
  if (options.has_header) {
    has_header = *options.has_header;
    label_col = resolve_label_column(options.label_column, has_header ? &rows.front() : nullptr,
                                     num_columns);
  } else {
    // The label column may hold text tokens, so header detection ignores it.
    // A named label column only exists in a header, which settles the case.
    const auto& first = rows.front();
    std::optional<std::size_t> named;
    if (!options.label_column.empty()) {
      const auto it = std::find(first.begin(), first.end(), options.label_column);
      if (it != first.end()) named = static_cast<std::size_t>(it - first.begin());
    }
    if (named) {
      has_header = true;
      label_col = *named;
    } else {
      label_col = resolve_label_column(options.label_column, nullptr, num_columns);
      for (std::size_t j = 0; j < num_columns; ++j) {
        if (j != label_col && !parse_number(first[j])) {
          has_header = true;
          break;
        }
      }
    }
  }

  Dataset d;
  d.name = std::move(name);
  d.num_features = num_columns - 1;
  const std::size_t first_data = has_header ? 1 : 0;
  d.num_samples = rows.size() - first_data;
  for (std::size_t j = 0; j < num_columns; ++j) {
    if (j == label_col) continue;
    d.feature_names.push_back(has_header ? rows.front()[j] : "f" + std::to_string(d.feature_names.size()));
  }
  d.values.assign(d.num_features * d.num_samples, 0.0);
  d.labels.reserve(d.num_samples);
  std::unordered_map<std::string, int> class_ids;

  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    const std::size_t sample = r - first_data;
    if (fields.size() != num_columns) {
      throw ParseError(r + 1, std::min(fields.size(), num_columns) + 1,
                       "row " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(num_columns));
    }
    std::size_t feature = 0;
    for (std::size_t j = 0; j < num_columns; ++j) {
      if (j == label_col) {
        const auto [it, inserted] = class_ids.emplace(fields[j], static_cast<int>(class_ids.size()));
        if (inserted) d.class_tokens.push_back(fields[j]);
        d.labels.push_back(it->second);
        continue;
      }
      const auto v = parse_number(fields[j]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(r + 1, j + 1, "malformed numeric cell '" + fields[j] + "' at row " +
                                           std::to_string(r + 1) + ", column " + std::to_string(j + 1));
      }
      d.values[feature * d.num_samples + sample] = *v;
      ++feature;
    }
  }
  d.num_classes = class_ids.size();
  validate(d, options.min_samples);
  return d;
}

Dataset load_csv(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  return parse_csv(in, std::move(name), options);
}

void write_csv(const Dataset& d, std::ostream& out) {
  for (const auto& name : d.feature_names) out << name << ',';
  out << "label\n";
  for (std::size_t i = 0; i < d.num_samples; ++i) {
    for (std::size_t j = 0; j < d.num_features; ++j) out << format_double(d.at(i, j)) << ',';
    out << d.class_tokens[static_cast<std::size_t>(d.labels[i])] << '\n';
  }
}

SplitIndices split_indices(const Dataset& d, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  const std::size_t n = d.num_samples;
  const auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n) {
    throw SplitError("split of " + std::to_string(n) + " samples leaves an empty half");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.shuffle(order);

  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());

  std::vector<bool> present(d.num_classes, false);
  std::size_t distinct = 0;
  for (std::size_t i : out.train) {
    const auto y = static_cast<std::size_t>(d.labels[i]);
    if (!present[y]) {
      present[y] = true;
      ++distinct;
    }
  }
  if (distinct < 2) throw SplitError("train half contains fewer than 2 classes");
  return out;
}

Dataset select_rows(const Dataset& d, std::span<const std::size_t> rows) {
  Dataset out;
  out.name = d.name;
  out.num_features = d.num_features;
  out.num_samples = rows.size();
  out.num_classes = d.num_classes;
  out.feature_names = d.feature_names;
  out.class_tokens = d.class_tokens;
  out.values.reserve(out.num_features * out.num_samples);
  for (std::size_t j = 0; j < d.num_features; ++j) {
    const auto col = d.column(j);
    for (std::size_t i : rows) out.values.push_back(col[i]);
  }
  out.labels.reserve(rows.size());
  for (std::size_t i : rows) out.labels.push_back(d.labels[i]);
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec) {
  const auto idx = split_indices(d, spec);
  return {select_rows(d, idx.train), select_rows(d, idx.test)};
}

std::vector<double> standardized_values(const Dataset& d) {
  std::vector<double> z(d.values.size(), 0.0);
  for (std::size_t j = 0; j < d.num_features; ++j) {
    const auto col = d.column(j);
    const ColumnStats s = describe(col);
    if (s.std <= 0.0) continue;
    for (std::size_t i = 0; i < d.num_samples; ++i) {
      z[j * d.num_samples + i] = (col[i] - s.mean) / s.std;
    }
  }
  return z;
}

}  // namespace irfs
