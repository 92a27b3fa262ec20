#include "irfs/irfs.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "irfs/dataset.hpp"
#include "irfs/errors.hpp"
#include "irfs/harness.hpp"

struct irfs_dataset {
  irfs::Dataset data;
};

struct irfs_config {
  irfs::RunConfig config;
};

struct irfs_report {
  irfs::RunReport report;
};

struct irfs_text {
  std::string value;
};

namespace {

thread_local std::string last_error;

irfs_status fail(irfs_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
irfs_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return IRFS_OK;
  } catch (const irfs::Error& e) {
    return fail(static_cast<irfs_status>(e.category()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(IRFS_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(IRFS_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(IRFS_ERR_RUNTIME, "unknown failure");
  }
}

irfs_status emit_text(std::string value, irfs_text** out) {
  *out = new irfs_text{std::move(value)};
  return IRFS_OK;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

uint32_t irfs_abi_version(void) { return IRFS_ABI_VERSION; }

const char* irfs_version_string(void) { return "1.0.0"; }

size_t irfs_last_error(char* buffer, size_t buffer_size) {
  if (buffer && buffer_size > 0) {
    const size_t n = std::min(buffer_size - 1, last_error.size());
    std::memcpy(buffer, last_error.data(), n);
    buffer[n] = '\0';
  }
  return last_error.size();
}

irfs_status irfs_dataset_load_csv(const char* path, const char* label_column, int has_header, irfs_dataset** out) {
  if (!path || !out) return fail(IRFS_ERR_INVALID_ARGUMENT, "path and out must be non-null");
  *out = nullptr;
  if (has_header < -1 || has_header > 1) return fail(IRFS_ERR_INVALID_ARGUMENT, "has_header must be -1, 0 or 1");
  return guarded([&] {
    irfs::LoadOptions options;
    if (label_column) options.label_column = label_column;
    if (has_header >= 0) options.has_header = has_header != 0;
    *out = new irfs_dataset{irfs::load_csv(path, options)};
  });
}

void irfs_dataset_free(irfs_dataset* dataset) { delete dataset; }

size_t irfs_dataset_num_features(const irfs_dataset* dataset) { return dataset ? dataset->data.num_features : 0; }

size_t irfs_dataset_num_samples(const irfs_dataset* dataset) { return dataset ? dataset->data.num_samples : 0; }

size_t irfs_dataset_num_classes(const irfs_dataset* dataset) { return dataset ? dataset->data.num_classes : 0; }

const char* irfs_dataset_feature_name(const irfs_dataset* dataset, size_t index) {
  if (!dataset || index >= dataset->data.num_features) return nullptr;
  return dataset->data.feature_names[index].c_str();
}

irfs_status irfs_config_create(irfs_config** out) {
  if (!out) return fail(IRFS_ERR_INVALID_ARGUMENT, "out must be non-null");
  *out = new irfs_config{};
  return IRFS_OK;
}

irfs_status irfs_config_clone(const irfs_config* config, irfs_config** out) {
  if (!config || !out) return fail(IRFS_ERR_INVALID_ARGUMENT, "config and out must be non-null");
  *out = new irfs_config{config->config};
  return IRFS_OK;
}

void irfs_config_free(irfs_config* config) { delete config; }

irfs_status irfs_config_set(irfs_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(IRFS_ERR_INVALID_ARGUMENT, "config, key and value must be non-null");
  return guarded([&] { irfs::apply_setting(config->config, key, value); });
}

irfs_status irfs_config_json(const irfs_config* config, irfs_text** out) {
  if (!config || !out) return fail(IRFS_ERR_INVALID_ARGUMENT, "config and out must be non-null");
  return guarded([&] { emit_text(config->config.to_json().dump(2), out); });
}

irfs_status irfs_run(const irfs_config* config, irfs_report** out) {
  if (!config || !out) return fail(IRFS_ERR_INVALID_ARGUMENT, "config and out must be non-null");
  *out = nullptr;
  return guarded([&] { *out = new irfs_report{irfs::run(config->config)}; });
}

irfs_status irfs_run_dataset(const irfs_config* config, const irfs_dataset* dataset, irfs_report** out) {
  if (!config || !dataset || !out) return fail(IRFS_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  *out = nullptr;
  return guarded([&] { *out = new irfs_report{irfs::run(config->config, dataset->data)}; });
}

void irfs_report_free(irfs_report* report) { delete report; }

size_t irfs_report_num_steps(const irfs_report* report) { return report ? report->report.steps.size() : 0; }

double irfs_report_accuracy(const irfs_report* report, size_t step) {
  if (!report || step >= report->report.steps.size()) return kNaN;
  return report->report.steps[step].accuracy;
}

double irfs_report_best_acc(const irfs_report* report, size_t step) {
  if (!report || step >= report->report.steps.size()) return kNaN;
  return report->report.steps[step].best_acc;
}

double irfs_report_best_accuracy(const irfs_report* report) {
  return report ? report->report.best_accuracy : kNaN;
}

size_t irfs_report_best_subset(const irfs_report* report, size_t* indices, size_t capacity) {
  if (!report) return 0;
  const auto& subset = report->report.best_subset;
  if (indices) {
    for (size_t i = 0; i < subset.size() && i < capacity; ++i) indices[i] = subset[i];
  }
  return subset.size();
}

irfs_status irfs_report_trace_csv(const irfs_report* report, irfs_text** out) {
  if (!report || !out) return fail(IRFS_ERR_INVALID_ARGUMENT, "report and out must be non-null");
  return guarded([&] { emit_text(irfs::trace_csv(report->report), out); });
}

irfs_status irfs_report_json(const irfs_report* report, irfs_text** out) {
  if (!report || !out) return fail(IRFS_ERR_INVALID_ARGUMENT, "report and out must be non-null");
  return guarded([&] { emit_text(irfs::report_json(report->report).dump(2), out); });
}

irfs_status irfs_report_write(const irfs_report* report, const char* directory) {
  if (!report || !directory) return fail(IRFS_ERR_INVALID_ARGUMENT, "report and directory must be non-null");
  return guarded([&] { irfs::write_report(report->report, directory); });
}

irfs_status irfs_compare(const irfs_config* const* configs, size_t num_configs, const uint64_t* seeds,
                         size_t num_seeds, const size_t* checkpoints, size_t num_checkpoints, unsigned threads,
                         irfs_text** out_csv) {
  if (!configs || !seeds || !checkpoints || !out_csv) {
    return fail(IRFS_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  }
  return guarded([&] {
    std::vector<irfs::RunConfig> list;
    for (size_t i = 0; i < num_configs; ++i) {
      if (!configs[i]) throw irfs::ConfigError("null config in compare list");
      list.push_back(configs[i]->config);
    }
    const auto table = irfs::compare(list, {seeds, num_seeds}, {checkpoints, num_checkpoints}, nullptr, threads);
    emit_text(irfs::comparison_csv(table), out_csv);
  });
}

const char* irfs_text_data(const irfs_text* text) { return text ? text->value.c_str() : ""; }

size_t irfs_text_size(const irfs_text* text) { return text ? text->value.size() : 0; }

void irfs_text_free(irfs_text* text) { delete text; }

}  // extern "C"
