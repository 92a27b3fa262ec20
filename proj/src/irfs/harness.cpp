#include "irfs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "irfs/baselines.hpp"
#include "irfs/errors.hpp"

namespace irfs {
namespace {

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value.front() == '-') throw std::invalid_argument("negative");
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<T>(v);
  } catch (const std::exception&) {
    throw ConfigError("--" + key + " expects a non-negative integer, got '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("--" + key + " expects a number, got '" + value + "'");
  }
}

TrainerKind parse_trainer(const std::string& text) {
  if (text == "kbest" || text == "kbt") return TrainerKind::KBest;
  if (text == "dtree" || text == "dtt" || text == "tree") return TrainerKind::DecisionTree;
  throw ConfigError("unknown trainer '" + text + "' (expected kbest or dtree)");
}

std::vector<std::size_t> one_shot_subset(Mode mode, const Dataset& train, std::size_t k, const BinningSpec& bins) {
  switch (mode) {
    case Mode::KBest:
      return kbest_select(train, k, bins);
    case Mode::DtRfe:
      return dtrfe_select(train, k, TreeConfig{});
    case Mode::Mrmr: {
      auto picked = mrmr_select(train, k, bins);
      std::sort(picked.begin(), picked.end());
      return picked;
    }
    default:
      throw ConfigError("mode is not a one-shot baseline");
  }
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::IrfsHybrid:
      return "irfs-hybrid";
    case Mode::IrfsKBest:
      return "irfs-kbest";
    case Mode::IrfsDtt:
      return "irfs-dtt";
    case Mode::Marlfs:
      return "marlfs";
    case Mode::KBest:
      return "kbest";
    case Mode::DtRfe:
      return "dtrfe";
    case Mode::Mrmr:
      return "mrmr";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::IrfsHybrid, Mode::IrfsKBest, Mode::IrfsDtt, Mode::Marlfs, Mode::KBest, Mode::DtRfe,
                 Mode::Mrmr}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("unknown mode '" + text +
                    "' (expected irfs-hybrid, irfs-kbest, irfs-dtt, marlfs, kbest, dtrfe or mrmr)");
}

bool is_one_shot(Mode mode) { return mode == Mode::KBest || mode == Mode::DtRfe || mode == Mode::Mrmr; }

std::size_t RunConfig::transfer_point() const {
  return transfer.value_or(std::max<std::size_t>(1, steps / 3));
}

TeachingPlan RunConfig::teaching_plan() const {
  switch (mode) {
    case Mode::IrfsHybrid:
      return {trainer_order[0], trainer_order[1]};
    case Mode::IrfsKBest:
      return {TrainerKind::KBest, TrainerKind::KBest};
    case Mode::IrfsDtt:
      return {TrainerKind::DecisionTree, TrainerKind::DecisionTree};
    default:
      return {};
  }
}

void RunConfig::validate() const {
  if (steps < 1) throw ConfigError("--steps must be at least 1");
  if (transfer && *transfer == 0) throw ConfigError("--transfer must be positive");
  if (!(split > 0.0 && split < 1.0)) throw ConfigError("--split must lie in (0, 1)");
  if (bins < 2) throw ConfigError("--bins must be at least 2");
  if (k && *k == 0) throw ConfigError("--k must be positive");
  learn.validate();
  if (is_one_shot(mode) && (!save_path.empty() || !load_path.empty())) {
    throw ConfigError("--save/--load apply to agent-based modes only");
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["data"] = data_path;
  j["label_col"] = label_column;
  j["has_header"] = has_header ? nlohmann::json(*has_header) : nlohmann::json("auto");
  j["mode"] = to_string(mode);
  j["steps"] = steps;
  j["transfer"] = transfer_point();
  j["seed"] = seed;
  j["split_seed"] = effective_split_seed();
  j["split"] = split;
  j["bins"] = bins;
  if (k) j["k"] = *k;
  j["epsilon"] = learn.epsilon;
  j["gamma"] = learn.gamma;
  j["lr"] = learn.learning_rate;
  j["batch"] = learn.batch_size;
  j["replay"] = learn.replay_capacity;
  j["trainer_order"] = {to_string(trainer_order[0]), to_string(trainer_order[1])};
  j["encoder"] = encoder == EncoderKind::MetaStats ? "stats" : "graph";
  return j;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "data") {
    c.data_path = value;
  } else if (key == "label-col") {
    c.label_column = value;
  } else if (key == "has-header") {
    if (value == "auto") {
      c.has_header.reset();
    } else if (value == "1" || value == "true" || value == "yes") {
      c.has_header = true;
    } else if (value == "0" || value == "false" || value == "no") {
      c.has_header = false;
    } else {
      throw ConfigError("--has-header expects true, false or auto");
    }
  } else if (key == "mode") {
    c.mode = parse_mode(value);
  } else if (key == "steps") {
    c.steps = parse_unsigned<std::size_t>(key, value);
  } else if (key == "transfer") {
    c.transfer = parse_unsigned<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "split-seed") {
    c.split_seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "split") {
    c.split = parse_real(key, value);
  } else if (key == "bins") {
    c.bins = static_cast<int>(parse_unsigned<unsigned>(key, value));
  } else if (key == "k") {
    c.k = parse_unsigned<std::size_t>(key, value);
  } else if (key == "epsilon") {
    c.learn.epsilon = parse_real(key, value);
  } else if (key == "gamma") {
    c.learn.gamma = parse_real(key, value);
  } else if (key == "lr") {
    c.learn.learning_rate = parse_real(key, value);
  } else if (key == "batch") {
    c.learn.batch_size = parse_unsigned<std::size_t>(key, value);
  } else if (key == "replay") {
    c.learn.replay_capacity = parse_unsigned<std::size_t>(key, value);
  } else if (key == "trainer-order") {
    const auto comma = value.find(',');
    if (comma == std::string::npos) throw ConfigError("--trainer-order expects two names, e.g. kbest,dtree");
    c.trainer_order = {parse_trainer(value.substr(0, comma)), parse_trainer(value.substr(comma + 1))};
  } else if (key == "encoder") {
    if (value == "stats") {
      c.encoder = EncoderKind::MetaStats;
    } else if (value == "graph") {
      c.encoder = EncoderKind::Graph;
    } else {
      throw ConfigError("--encoder expects stats or graph");
    }
  } else if (key == "out") {
    c.out_dir = value;
  } else if (key == "save") {
    c.save_path = value;
  } else if (key == "load") {
    c.load_path = value;
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

double RunReport::best_acc_at(std::size_t checkpoint) const {
  if (steps.empty()) throw RangeError("empty report");
  if (is_one_shot(config.mode)) {
    if (checkpoint < 1 || checkpoint > config.steps) {
      throw RangeError("checkpoint " + std::to_string(checkpoint) + " outside [1, " + std::to_string(config.steps) + "]");
    }
    return steps.front().best_acc;
  }
  if (checkpoint < 1 || checkpoint > steps.size()) {
    throw RangeError("checkpoint " + std::to_string(checkpoint) + " outside [1, " + std::to_string(steps.size()) + "]");
  }
  return steps[checkpoint - 1].best_acc;
}

RunReport run(const RunConfig& config, const Dataset& data) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  auto [train, test] = split(data, SplitSpec{config.split, config.effective_split_seed()});
  const BinningSpec bins{config.bins};

  RunReport report;
  report.config = config;
  report.dataset_name = data.name;
  report.num_features = data.num_features;
  report.num_train = train.num_samples;
  report.num_test = test.num_samples;

  if (is_one_shot(config.mode)) {
    const std::size_t k = config.k.value_or(default_baseline_k(data.num_features));
    const auto subset = one_shot_subset(config.mode, train, k, bins);
    const double acc = evaluate_accuracy(train, test, subset, TreeConfig{});
    report.steps.push_back({0, acc, acc, subset.size(), AdviceSource::None, 0});
    report.best_subset = subset;
    report.best_accuracy = acc;
  } else {
    IrfsOptions options;
    options.schedule = {config.transfer_point(), config.steps};
    options.plan = config.teaching_plan();
    options.learn = config.learn;
    options.bins = bins;
    options.seed = config.seed;
    IrfsLoop loop(Environment(std::move(train), std::move(test), TreeConfig{}, config.encoder, config.seed),
                  std::move(options));
    if (!config.load_path.empty()) load_agents(config.load_path, loop.agents());

    BestAccTracker tracker;
    bool have_best = false;
    for (std::size_t t = 0; t < config.steps; ++t) {
      const StepRecord rec = loop.step();
      tracker.push(rec.accuracy);
      report.steps.push_back({t, rec.accuracy, tracker.running_best(t), rec.selected_count(), rec.advice_source,
                              rec.flipped_agents.size()});
      if (!have_best || rec.accuracy > report.best_accuracy) {
        have_best = true;
        report.best_accuracy = rec.accuracy;
        report.best_step = t;
        report.best_subset = selected_indices(rec.advised_actions);
      }
    }
    if (!config.save_path.empty()) save_agents(config.save_path, loop.agents());
  }
  for (std::size_t f : report.best_subset) report.best_subset_names.push_back(data.feature_names[f]);
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!config.out_dir.empty()) write_report(report, config.out_dir);
  return report;
}

RunReport run(const RunConfig& config) {
  config.validate();
  if (config.data_path.empty()) throw ConfigError("--data is required");
  LoadOptions load;
  load.label_column = config.label_column;
  load.has_header = config.has_header;
  const Dataset data = load_csv(config.data_path, load);
  return run(config, data);
}

std::string trace_csv(const RunReport& report) {
  std::ostringstream out;
  out << "step,accuracy,best_acc,n_selected,advice_source,n_flips\n";
  for (const auto& s : report.steps) {
    out << s.step << ',' << fmt_real(s.accuracy) << ',' << fmt_real(s.best_acc) << ',' << s.n_selected << ','
        << to_string(s.advice_source) << ',' << s.n_flips << '\n';
  }
  return out.str();
}

nlohmann::json report_json(const RunReport& report) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = report.config.to_json();
  j["seed"] = report.config.seed;
  j["dataset"] = {{"name", report.dataset_name},
                  {"num_features", report.num_features},
                  {"num_train", report.num_train},
                  {"num_test", report.num_test}};
  auto& steps = j["steps"] = nlohmann::json::array();
  auto& curve = j["best_acc_curve"] = nlohmann::json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"step", s.step},
                     {"accuracy", s.accuracy},
                     {"n_selected", s.n_selected},
                     {"advice_source", to_string(s.advice_source)},
                     {"n_flips", s.n_flips}});
    curve.push_back(s.best_acc);
  }
  j["best_subset"] = {{"indices", report.best_subset},
                      {"names", report.best_subset_names},
                      {"accuracy", report.best_accuracy},
                      {"step", report.best_step}};
  j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j;
}

void write_report(const RunReport& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  const auto base = std::filesystem::path(dir);
  std::ofstream json_out(base / "report.json");
  std::ofstream csv_out(base / "trace.csv");
  if (!json_out || !csv_out) throw IoError("cannot write outputs into '" + dir + "'");
  json_out << report_json(report).dump(2) << '\n';
  csv_out << trace_csv(report);
}

ComparisonTable compare(const std::vector<RunConfig>& configs, std::span<const std::uint64_t> seeds,
                        std::span<const std::size_t> checkpoints, const Dataset* data, unsigned threads) {
  if (configs.empty() || seeds.empty() || checkpoints.empty()) {
    throw ConfigError("compare needs at least one config, seed and checkpoint");
  }
  for (const auto& c : configs) {
    c.validate();
    if (c.data_path != configs.front().data_path || c.split_seed != configs.front().split_seed ||
        c.split != configs.front().split) {
      throw ConfigError("compared configs must share the dataset and split");
    }
    for (std::size_t cp : checkpoints) {
      if (cp < 1 || cp > c.steps) {
        throw RangeError("checkpoint " + std::to_string(cp) + " outside [1, " + std::to_string(c.steps) + "]");
      }
    }
  }

  std::optional<Dataset> loaded;
  if (!data) {
    if (configs.front().data_path.empty()) throw ConfigError("--data is required");
    LoadOptions load;
    load.label_column = configs.front().label_column;
    load.has_header = configs.front().has_header;
    loaded = load_csv(configs.front().data_path, load);
    data = &*loaded;
  }

  const std::size_t jobs = configs.size() * seeds.size();
  ComparisonTable table;
  table.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  table.reports.resize(jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      try {
        RunConfig c = configs[job / seeds.size()];
        c.seed = seeds[job % seeds.size()];
        c.out_dir.clear();
        c.save_path.clear();
        table.reports[job] = run(c, *data);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (std::size_t cp : checkpoints) {
      CompareRow row;
      row.mode = configs[c].mode;
      row.checkpoint = cp;
      row.runs = seeds.size();
      double sum = 0.0;
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        const double v = table.reports[c * seeds.size() + s].best_acc_at(cp);
        sum += v;
        row.min = s == 0 ? v : std::min(row.min, v);
        row.max = s == 0 ? v : std::max(row.max, v);
      }
      row.mean = sum / static_cast<double>(seeds.size());
      table.rows.push_back(row);
    }
  }
  return table;
}

std::string comparison_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "mode,checkpoint,mean_best_acc,min_best_acc,max_best_acc,runs\n";
  for (const auto& r : table.rows) {
    out << to_string(r.mode) << ',' << r.checkpoint << ',' << fmt_real(r.mean) << ',' << fmt_real(r.min) << ','
        << fmt_real(r.max) << ',' << r.runs << '\n';
  }
  return out.str();
}

}  // namespace irfs
