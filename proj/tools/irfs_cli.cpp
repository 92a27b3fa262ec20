// Command-line front end. Talks to the engine only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irfs/irfs.h"

namespace {

struct ConfigDeleter {
  void operator()(irfs_config* c) const { irfs_config_free(c); }
};
struct ReportDeleter {
  void operator()(irfs_report* r) const { irfs_report_free(r); }
};
struct TextDeleter {
  void operator()(irfs_text* t) const { irfs_text_free(t); }
};
struct DatasetDeleter {
  void operator()(irfs_dataset* d) const { irfs_dataset_free(d); }
};

using ConfigPtr = std::unique_ptr<irfs_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<irfs_report, ReportDeleter>;
using TextPtr = std::unique_ptr<irfs_text, TextDeleter>;
using DatasetPtr = std::unique_ptr<irfs_dataset, DatasetDeleter>;

std::string last_error() {
  std::string msg(irfs_last_error(nullptr, 0), '\0');
  irfs_last_error(msg.data(), msg.size() + 1);
  return msg;
}

int report_failure(irfs_status status) {
  std::cerr << "irfs: " << last_error() << '\n';
  return static_cast<int>(status);
}

// Flag values collected as text and forwarded verbatim to irfs_config_set.
struct Flags {
  std::map<std::string, std::string> values;

  void add(CLI::App& app, const std::string& name, const std::string& help) {
    app.add_option_function<std::string>("--" + name, [this, name](const std::string& v) { values[name] = v; }, help);
  }
};

void add_run_flags(CLI::App& app, Flags& flags) {
  flags.add(app, "data", "CSV dataset path");
  flags.add(app, "label-col", "label column name or index (default: last)");
  flags.add(app, "has-header", "true, false or auto (default: auto)");
  flags.add(app, "steps", "exploration steps L (default 1500)");
  flags.add(app, "transfer", "transfer point T (default floor(L/3))");
  flags.add(app, "split-seed", "seed of the train/test split (default: --seed)");
  flags.add(app, "split", "train fraction (default 0.9)");
  flags.add(app, "bins", "quantile bins for mutual information (default 10)");
  flags.add(app, "k", "subset size of one-shot baselines (default floor(N/2))");
  flags.add(app, "epsilon", "greedy probability of epsilon-greedy (default 0.9)");
  flags.add(app, "gamma", "discount factor (default 0.9)");
  flags.add(app, "lr", "Adam learning rate (default 0.01)");
  flags.add(app, "batch", "mini-batch size (default 16)");
  flags.add(app, "replay", "replay memory capacity (default 2000)");
  flags.add(app, "trainer-order", "hybrid trainer order, e.g. kbest,dtree");
  flags.add(app, "encoder", "state encoder: stats or graph");
}

irfs_status build_config(const Flags& flags, ConfigPtr& out) {
  irfs_config* raw = nullptr;
  if (irfs_status s = irfs_config_create(&raw); s != IRFS_OK) return s;
  out.reset(raw);
  for (const auto& [key, value] : flags.values) {
    if (irfs_status s = irfs_config_set(out.get(), key.c_str(), value.c_str()); s != IRFS_OK) return s;
  }
  return IRFS_OK;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

int do_run(const Flags& flags) {
  ConfigPtr config;
  if (irfs_status s = build_config(flags, config); s != IRFS_OK) return report_failure(s);
  irfs_report* raw = nullptr;
  if (irfs_status s = irfs_run(config.get(), &raw); s != IRFS_OK) return report_failure(s);
  ReportPtr report(raw);

  const size_t steps = irfs_report_num_steps(report.get());
  std::vector<size_t> subset(irfs_report_best_subset(report.get(), nullptr, 0));
  irfs_report_best_subset(report.get(), subset.data(), subset.size());
  std::printf("steps: %zu\nbest accuracy: %.6f\nbest subset (%zu):", steps, irfs_report_best_accuracy(report.get()),
              subset.size());
  for (size_t f : subset) std::printf(" %zu", f);
  std::printf("\n");
  if (auto it = flags.values.find("out"); it != flags.values.end()) {
    std::printf("wrote %s/report.json and %s/trace.csv\n", it->second.c_str(), it->second.c_str());
  }
  return 0;
}

int do_compare(const Flags& flags, const std::string& modes, const std::string& seeds_text,
               const std::string& checkpoints_text, const std::string& out_path, unsigned threads) {
  std::vector<ConfigPtr> configs;
  for (const auto& mode : split_list(modes)) {
    Flags per_mode = flags;
    per_mode.values["mode"] = mode;
    ConfigPtr config;
    if (irfs_status s = build_config(per_mode, config); s != IRFS_OK) return report_failure(s);
    configs.push_back(std::move(config));
  }
  std::vector<uint64_t> seeds;
  std::vector<size_t> checkpoints;
  try {
    for (const auto& s : split_list(seeds_text)) seeds.push_back(std::stoull(s));
    for (const auto& c : split_list(checkpoints_text)) checkpoints.push_back(std::stoull(c));
  } catch (const std::exception&) {
    std::cerr << "irfs: --seeds and --checkpoints take comma-separated integers\n";
    return IRFS_ERR_CONFIG;
  }
  std::vector<const irfs_config*> handles;
  for (const auto& c : configs) handles.push_back(c.get());

  irfs_text* raw = nullptr;
  if (irfs_status s = irfs_compare(handles.data(), handles.size(), seeds.data(), seeds.size(), checkpoints.data(),
                                   checkpoints.size(), threads, &raw);
      s != IRFS_OK) {
    return report_failure(s);
  }
  TextPtr csv(raw);
  if (out_path.empty()) {
    std::fwrite(irfs_text_data(csv.get()), 1, irfs_text_size(csv.get()), stdout);
  } else {
    std::FILE* f = std::fopen(out_path.c_str(), "w");
    if (!f) {
      std::cerr << "irfs: cannot write '" << out_path << "'\n";
      return IRFS_ERR_DATA;
    }
    std::fwrite(irfs_text_data(csv.get()), 1, irfs_text_size(csv.get()), f);
    std::fclose(f);
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

int do_info(const std::string& path, const std::string& label_col, const std::string& has_header) {
  const int header = has_header == "true" ? 1 : has_header == "false" ? 0 : -1;
  irfs_dataset* raw = nullptr;
  if (irfs_status s = irfs_dataset_load_csv(path.c_str(), label_col.c_str(), header, &raw); s != IRFS_OK) {
    return report_failure(s);
  }
  DatasetPtr data(raw);
  std::printf("samples: %zu\nfeatures: %zu\nclasses: %zu\n", irfs_dataset_num_samples(data.get()),
              irfs_dataset_num_features(data.get()), irfs_dataset_num_classes(data.get()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive reinforced feature selection"};
  app.require_subcommand(1);

  Flags run_flags;
  auto* run = app.add_subcommand("run", "run one configuration and write report.json + trace.csv");
  add_run_flags(*run, run_flags);
  run_flags.add(*run, "mode", "irfs-hybrid | irfs-kbest | irfs-dtt | marlfs | kbest | dtrfe | mrmr");
  run_flags.add(*run, "seed", "random seed (default 0)");
  run_flags.add(*run, "out", "output directory");
  run_flags.add(*run, "save", "write agent checkpoint after the run");
  run_flags.add(*run, "load", "initialize agents from a checkpoint");

  Flags cmp_flags;
  std::string modes = "irfs-hybrid,marlfs,kbest,dtrfe,mrmr";
  std::string seeds = "0";
  std::string checkpoints;
  std::string cmp_out;
  unsigned threads = 0;
  auto* cmp = app.add_subcommand("compare", "run several modes over several seeds; emit a Best Acc table");
  add_run_flags(*cmp, cmp_flags);
  cmp->add_option("--modes", modes, "comma-separated modes")->capture_default_str();
  cmp->add_option("--seeds", seeds, "comma-separated seeds")->capture_default_str();
  cmp->add_option("--checkpoints", checkpoints, "comma-separated step checkpoints")->required();
  cmp->add_option("--out", cmp_out, "CSV output path (default: stdout)");
  cmp->add_option("--threads", threads, "worker threads (0: all cores)");

  std::string info_path, info_label, info_header = "auto";
  auto* info = app.add_subcommand("info", "load a dataset and print its shape");
  info->add_option("--data", info_path, "CSV dataset path")->required();
  info->add_option("--label-col", info_label, "label column name or index");
  info->add_option("--has-header", info_header, "true, false or auto");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : IRFS_ERR_CONFIG;
  }

  if (*run) return do_run(run_flags);
  if (*cmp) return do_compare(cmp_flags, modes, seeds, checkpoints, cmp_out, threads);
  return do_info(info_path, info_label, info_header);
}
