#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "absorbkit/absorb.hpp"
#include "absorbkit/synth.hpp"
#include "absorbkit/types.hpp"

namespace absorbkit {

struct CsvData {
  Dataset dataset;
  std::optional<std::vector<std::string>> labels;  // raw label tokens, untouched by the algorithm
};

//! Loads a comma-separated numeric file. An optional single header line is
//! skipped when has_header is set; label_column (0-based) is split out of
//! the feature matrix when given.
CsvData load_csv(const std::string& path, bool has_header = false,
                 std::optional<std::size_t> label_column = std::nullopt);

//! Writes the dataset with shortest round-trip decimal formatting, so a
//! following load_csv reproduces every entry exactly.
void save_csv(const Dataset& dataset, const std::string& path);

//! Evaluation numbers attached to a run report when a clean reference is
//! available.
struct ReportExtras {
  std::optional<double> divergence_before;
  std::optional<double> divergence_after;
  std::vector<std::string> snapshot_paths;
};

//! Serializes config echo, per-iteration trace, optional divergences and
//! snapshot listing as one JSON document.
void write_run_report(const AbsorbResult& result, const AbsorbConfig& config,
                      const std::optional<ContaminationReport>& contamination,
                      const std::string& path, const ReportExtras& extras = {});

//! Re-parses a report written by write_run_report.
nlohmann::json read_run_report(const std::string& path);

//! Human-readable backend tag used in config echoes ("gmm:1", "kde:scott", "kde:0.5").
std::string backend_name(const DensityBackend& backend);

//! Inverse of backend_name; throws ConfigInvalid on unknown tags.
DensityBackend parse_backend(const std::string& name);

}  // namespace absorbkit
