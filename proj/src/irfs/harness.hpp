#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "irfs/dataset.hpp"
#include "irfs/env.hpp"
#include "irfs/qpolicy.hpp"
#include "irfs/trainers.hpp"

namespace irfs {

inline constexpr int kReportSchemaVersion = 1;

enum class Mode { IrfsHybrid, IrfsKBest, IrfsDtt, Marlfs, KBest, DtRfe, Mrmr };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& text);
bool is_one_shot(Mode mode);

struct RunConfig {
  std::string data_path;
  std::string label_column;  // empty: last column
  std::optional<bool> has_header;
  Mode mode = Mode::IrfsHybrid;
  std::size_t steps = 1500;               // L
  std::optional<std::size_t> transfer;    // T, default floor(L / 3)
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> split_seed;  // defaults to seed
  double split = 0.9;
  int bins = 10;
  std::optional<std::size_t> k;  // one-shot baselines, default floor(N / 2)
  LearnConfig learn;
  std::array<TrainerKind, 2> trainer_order{TrainerKind::KBest, TrainerKind::DecisionTree};
  EncoderKind encoder = EncoderKind::MetaStats;
  std::string out_dir;
  std::string save_path;
  std::string load_path;

  std::size_t transfer_point() const;
  std::uint64_t effective_split_seed() const { return split_seed.value_or(seed); }
  TeachingPlan teaching_plan() const;
  void validate() const;
  nlohmann::json to_json() const;
};

/// Sets one field from its CLI flag name (without dashes), e.g. "steps".
/// Throws ConfigError for unknown keys or malformed values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

struct StepSummary {
  std::size_t step = 0;
  double accuracy = 0.0;
  double best_acc = 0.0;
  std::size_t n_selected = 0;
  AdviceSource advice_source = AdviceSource::None;
  std::size_t n_flips = 0;
};

struct RunReport {
  RunConfig config;
  std::string dataset_name;
  std::size_t num_features = 0;
  std::size_t num_train = 0;
  std::size_t num_test = 0;
  std::vector<StepSummary> steps;
  std::vector<std::size_t> best_subset;
  std::vector<std::string> best_subset_names;
  double best_accuracy = 0.0;
  std::size_t best_step = 0;
  double wall_clock_seconds = 0.0;

  /// Best Acc over the first `checkpoint` steps (1-based count).
  double best_acc_at(std::size_t checkpoint) const;
};

/// Loads the configured dataset, runs, and writes outputs when out_dir is set.
RunReport run(const RunConfig& config);

/// Runs on an already loaded dataset (data_path is ignored).
RunReport run(const RunConfig& config, const Dataset& data);

/// Trace CSV: step,accuracy,best_acc,n_selected,advice_source,n_flips
std::string trace_csv(const RunReport& report);

nlohmann::json report_json(const RunReport& report);

/// Writes report.json and trace.csv into dir (created when missing).
void write_report(const RunReport& report, const std::string& dir);

struct CompareRow {
  Mode mode = Mode::IrfsHybrid;
  std::size_t checkpoint = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t runs = 0;
};

struct ComparisonTable {
  std::vector<std::size_t> checkpoints;
  std::vector<CompareRow> rows;      // config-major, then checkpoint
  std::vector<RunReport> reports;    // config-major, then seed
};

/// Runs every (config, seed) pair, overriding each config's seed, and
/// aggregates Best Acc at the checkpoints. Independent runs execute on up to
/// `threads` workers (0: hardware concurrency).
ComparisonTable compare(const std::vector<RunConfig>& configs, std::span<const std::uint64_t> seeds,
                        std::span<const std::size_t> checkpoints, const Dataset* data = nullptr,
                        unsigned threads = 0);

/// mode,checkpoint,mean_best_acc,min_best_acc,max_best_acc,runs
std::string comparison_csv(const ComparisonTable& table);

}  // namespace irfs
