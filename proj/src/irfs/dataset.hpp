#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace irfs {

/// Numeric feature matrix (column-major) with dense integer class labels.
struct Dataset {
  std::string name;
  std::size_t num_samples = 0;
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
  std::vector<double> values;  // num_features columns of num_samples each
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_tokens;  // class id -> original label token

  std::span<const double> column(std::size_t feature) const {
    return {values.data() + feature * num_samples, num_samples};
  }
  double at(std::size_t row, std::size_t feature) const {
    return values[feature * num_samples + row];
  }
};

/// Builds a dataset from columns and checks the loading invariants.
/// Feature names default to f0..f{N-1}; class tokens default to the ids.
Dataset make_dataset(std::string name, const std::vector<std::vector<double>>& columns,
                     std::vector<int> labels, std::vector<std::string> feature_names = {},
                     std::size_t min_samples = 10);

/// Throws SchemaError / LabelError / ParseError when the invariants do not
/// hold: finite values, consistent shapes, N >= 2, num_samples >= min_samples,
/// at least two classes and every id in [0, C) present.
void validate(const Dataset& d, std::size_t min_samples = 10);

struct LoadOptions {
  /// Header name or column index (negative counts from the end). Empty
  /// selects the last column.
  std::string label_column;
  /// Overrides header detection when set.
  std::optional<bool> has_header;
  std::size_t min_samples = 10;
};

Dataset load_csv(const std::string& path, const LoadOptions& options = {});
Dataset parse_csv(std::istream& in, std::string name, const LoadOptions& options = {});

/// Writes features followed by the label column, with a header row. Values
/// are printed with round-trip precision so reloading is bit-exact.
void write_csv(const Dataset& d, std::ostream& out);

struct SplitSpec {
  double train_fraction = 0.9;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded uniform (unstratified) partition of row indices. Both index lists
/// are returned in ascending order.
SplitIndices split_indices(const Dataset& d, const SplitSpec& spec);

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec);

/// Row subset sharing the parent's class dictionary.
Dataset select_rows(const Dataset& d, std::span<const std::size_t> rows);

/// Per-column z-scores using population mean/std; constant columns map to 0.
std::vector<double> standardized_values(const Dataset& d);

}  // namespace irfs
