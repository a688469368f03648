#include "absorbkit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace absorbkit {

namespace {

//! Splits one CSV line; a trailing '\r' (CRLF input) is dropped.
std::vector<std::string> split_fields(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_field(const std::string& field, std::size_t line_no, std::size_t col_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line_no, col_no);
  }
  return value;
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

CsvData load_csv(const std::string& path, bool has_header,
                 std::optional<std::size_t> label_column) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (has_header && line_no == 1) continue;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;

    const std::vector<std::string> fields = split_fields(line);
    if (width == 0) {
      width = fields.size();
      if (label_column && *label_column >= width) {
        throw ParseError(line_no, *label_column + 1);
      }
    } else if (fields.size() != width) {
      throw InconsistentWidth(line_no, width, fields.size());
    }

    std::vector<double> row;
    row.reserve(width);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (label_column && c == *label_column) {
        labels.push_back(fields[c]);
        continue;
      }
      row.push_back(parse_field(fields[c], line_no, c + 1));
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty() || rows.front().empty()) throw EmptyDataset();

  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }

  CsvData data;
  data.dataset = validate(Dataset(std::move(values)));
  if (label_column) data.labels = std::move(labels);
  return data;
}

void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (Eigen::Index i = 0; i < dataset.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < dataset.values.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(dataset.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::string backend_name(const DensityBackend& backend) {
  if (const auto* gmm = std::get_if<GmmBackend>(&backend)) {
    return "gmm:" + std::to_string(gmm->components);
  }
  const auto& kde = std::get<KdeBackend>(backend);
  if (std::holds_alternative<ScottBandwidth>(kde.bandwidth)) {
    return "kde:scott";
  }
  return "kde:" + format_double(std::get<FixedBandwidth>(kde.bandwidth).value);
}

DensityBackend parse_backend(const std::string& name) {
  if (name.rfind("gmm", 0) == 0) {
    int components = 1;
    if (name.size() > 3) {
      if (name[3] != ':') throw ConfigInvalid("unknown backend: " + name);
      try {
        components = std::stoi(name.substr(4));
      } catch (const std::exception&) {
        throw ConfigInvalid("bad GMM component count in backend: " + name);
      }
    }
    if (components < 1) throw ConfigInvalid("GMM component count must be >= 1");
    return GmmBackend{components};
  }
  if (name.rfind("kde", 0) == 0) {
    if (name.size() == 3 || name == "kde:scott") {
      return KdeBackend{ScottBandwidth{}};
    }
    if (name[3] != ':') throw ConfigInvalid("unknown backend: " + name);
    try {
      const double h = std::stod(name.substr(4));
      if (!(h > 0.0)) throw ConfigInvalid("KDE bandwidth must be > 0");
      return KdeBackend{FixedBandwidth{h}};
    } catch (const ConfigInvalid&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigInvalid("bad KDE bandwidth in backend: " + name);
    }
  }
  throw ConfigInvalid("unknown backend: " + name);
}

void write_run_report(const AbsorbResult& result, const AbsorbConfig& config,
                      const std::optional<ContaminationReport>& contamination,
                      const std::string& path, const ReportExtras& extras) {
  nlohmann::json doc;
  doc["config"] = {
      {"k", config.k},
      {"epsilon", config.epsilon},
      {"max_iterations", config.max_iterations},
      {"density_backend", backend_name(config.density_backend)},
      {"cov_regularization", config.cov_regularization},
      {"seed", config.seed},
  };

  nlohmann::json iterations = nlohmann::json::array();
  for (const IterationRecord& rec : result.trace) {
    iterations.push_back({
        {"iteration", rec.iteration},
        {"step_divergence", rec.step_divergence},
        {"mean_displacement", rec.mean_displacement},
        {"min_weight", rec.min_weight},
        {"max_weight", rec.max_weight},
    });
  }
  doc["iterations"] = std::move(iterations);
  doc["iterations_run"] = result.iterations_run;
  doc["converged"] = result.converged;

  doc["divergence_before"] =
      extras.divergence_before ? nlohmann::json(*extras.divergence_before) : nlohmann::json();
  doc["divergence_after"] =
      extras.divergence_after ? nlohmann::json(*extras.divergence_after) : nlohmann::json();
  if (extras.divergence_before && extras.divergence_after && *extras.divergence_before != 0.0) {
    doc["divergence_ratio"] = *extras.divergence_after / *extras.divergence_before;
  } else {
    doc["divergence_ratio"] = nlohmann::json();
  }

  if (contamination) {
    doc["contamination"] = {
        {"rate", contamination->rate},
        {"noise_sigma", contamination->noise_sigma},
        {"seed", contamination->seed},
        {"outlier_count", contamination->outlier_count()},
        {"outlier_indices", contamination->outlier_indices()},
    };
  } else {
    doc["contamination"] = nlohmann::json();
  }

  doc["snapshots"] = extras.snapshot_paths;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

nlohmann::json read_run_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(static_cast<std::size_t>(e.byte), 1);
  }
  return doc;
}

}  // namespace absorbkit
