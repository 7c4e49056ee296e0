// Copyright 2026 The wvdst Authors
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

// Command-line harness. Exit codes: 0 success, 1 usage error, 2 estimation
// failure, 3 missing calibration. Failures print a single line
//   error: kind=<usage|estimation|missing_calibration> message="..."
// on stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wvdst/wvdst.hpp"

namespace {

using namespace wvdst;

enum ExitCode { kOk = 0, kUsage = 1, kEstimation = 2, kMissingCalibration = 3 };

int fail(ExitCode code, const std::string &message) {
  const char *kind = code == kUsage ? "usage" : code == kEstimation ? "estimation" : "missing_calibration";
  std::string flat = message;
  for (char &c : flat) {
    if (c == '\n' || c == '"') c = ' ';
  }
  std::cerr << "error: kind=" << kind << " message=\"" << flat << "\"\n";
  return code;
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "1.2" is radians; "0.5pi" is a multiple of pi.
double parse_angle(const std::string &s) {
  std::size_t used = 0;
  if (s.size() > 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    const std::string head = s.substr(0, s.size() - 2);
    const double v = std::stod(head, &used);
    if (used != head.size()) throw std::invalid_argument("bad angle '" + s + "'");
    return v * kPi;
  }
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad angle '" + s + "'");
  return v;
}

std::vector<double> parse_theta_grid(const std::string &s) {
  std::vector<double> grid;
  for (const auto &item : split_list(s)) grid.push_back(parse_angle(item));
  if (grid.empty()) throw std::invalid_argument("empty --theta-grid");
  return grid;
}

std::vector<std::size_t> parse_dim_grid(const std::string &s) {
  std::vector<std::size_t> grid;
  for (const auto &item : split_list(s)) {
    std::size_t used = 0;
    const long v = std::stol(item, &used);
    if (used != item.size() || v < 2) throw std::invalid_argument("bad dimension '" + item + "'");
    grid.push_back(static_cast<std::size_t>(v));
  }
  if (grid.empty()) throw std::invalid_argument("empty --dim-grid");
  return grid;
}

OutputFormat parse_format(const std::string &s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown --format '" + s + "'");
}

// Config-file keys mirror the long flags with '-' replaced by '_'.
void apply_config_file(const std::string &path, ExperimentConfig &c) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  const nlohmann::json j = nlohmann::json::parse(in);
  static const std::vector<std::string> known = {"experiment", "dim",  "copies", "n1",         "n2",
                                                 "g1",         "g2",   "reps",   "seed",       "theta_grid",
                                                 "dim_grid",   "out",  "format", "calibration_file", "jobs"};
  for (const auto &[key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  if (j.contains("experiment")) c.experiment = experiment_from_string(j["experiment"].get<std::string>());
  if (j.contains("dim")) c.dim = j["dim"].get<std::size_t>();
  if (j.contains("copies")) c.copies = j["copies"].get<std::uint64_t>();
  if (j.contains("n1")) c.n1 = j["n1"].get<std::uint64_t>();
  if (j.contains("n2")) c.n2 = j["n2"].get<std::uint64_t>();
  if (j.contains("g1")) c.g1 = j["g1"].get<double>();
  if (j.contains("g2")) c.g2 = j["g2"].get<double>();
  if (j.contains("reps")) c.reps = j["reps"].get<std::uint64_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("theta_grid")) c.theta_grid = j["theta_grid"].get<std::vector<double>>();
  if (j.contains("dim_grid")) c.dim_grid = j["dim_grid"].get<std::vector<std::size_t>>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  if (j.contains("format")) c.format = parse_format(j["format"].get<std::string>());
  if (j.contains("calibration_file")) c.calibration_file = j["calibration_file"].get<std::string>();
  if (j.contains("jobs")) c.jobs = j["jobs"].get<unsigned>();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Weak-value direct state tomography simulations"};
  std::string experiment, theta_grid, dim_grid, format, config_file, out, calibration_file;
  std::size_t dim = 0;
  std::uint64_t copies = 0, n1 = 0, n2 = 0, reps = 0, seed = 0;
  double g1 = 0.0, g2 = 0.0;
  unsigned jobs = 1;

  auto *o_exp = app.add_option("--experiment", experiment, "fig1 | fig2 | fig3 | calibrate | single");
  auto *o_dim = app.add_option("--dim", dim, "system dimension (fig1, fig2, calibrate, single)");
  auto *o_copies = app.add_option("--copies", copies, "total copy budget N");
  auto *o_n1 = app.add_option("--n1", n1, "copies for the original-DST step");
  auto *o_n2 = app.add_option("--n2", n2, "copies for the revised-DST step");
  auto *o_g1 = app.add_option("--g1", g1, "coupling of the original-DST step (fig1: the revised-DST coupling)");
  auto *o_g2 = app.add_option("--g2", g2, "coupling of the revised-DST step (default: tabulated per dimension)");
  auto *o_reps = app.add_option("--reps", reps, "repetitions per grid point");
  auto *o_seed = app.add_option("--seed", seed, "master seed");
  auto *o_theta = app.add_option("--theta-grid", theta_grid, "comma list of angles in radians, or with a 'pi' suffix");
  auto *o_dims = app.add_option("--dim-grid", dim_grid, "comma list of dimensions (fig3, calibrate)");
  auto *o_out = app.add_option("--out", out, "output file (default: stdout)");
  auto *o_format = app.add_option("--format", format, "csv | json");
  auto *o_cal = app.add_option("--calibration-file", calibration_file, "calibration table (JSON)");
  auto *o_jobs = app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--config", config_file, "JSON config file; flags override its values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail(kUsage, e.what());
  }

  ExperimentConfig cfg;
  try {
    if (!config_file.empty()) apply_config_file(config_file, cfg);
    if (*o_exp) cfg.experiment = experiment_from_string(experiment);
    if (*o_dim) cfg.dim = dim;
    if (*o_copies) cfg.copies = copies;
    if (*o_n1) cfg.n1 = n1;
    if (*o_n2) cfg.n2 = n2;
    if (*o_g1) cfg.g1 = g1;
    if (*o_g2) cfg.g2 = g2;
    if (*o_reps) cfg.reps = reps;
    if (*o_seed) cfg.seed = seed;
    if (*o_theta) cfg.theta_grid = parse_theta_grid(theta_grid);
    if (*o_dims) cfg.dim_grid = parse_dim_grid(dim_grid);
    if (*o_out) cfg.out = out;
    if (*o_format) cfg.format = parse_format(format);
    if (*o_cal) cfg.calibration_file = calibration_file;
    if (*o_jobs) cfg.jobs = jobs;
    if (!*o_exp && config_file.empty()) throw std::invalid_argument("--experiment is required");
  } catch (const std::exception &e) {
    return fail(kUsage, e.what());
  }

  ResolvedConfig resolved;
  try {
    resolved = resolve(cfg);
  } catch (const std::exception &e) {
    return fail(kUsage, e.what());
  }

  const bool needs_calibration = cfg.experiment == Experiment::kFig2 || cfg.experiment == Experiment::kFig3 ||
                                 cfg.experiment == Experiment::kSingle;
  std::optional<CalibrationTable> calibration;
  if (needs_calibration) {
    if (cfg.calibration_file.empty()) {
      return fail(kMissingCalibration, "hybrid experiment requires --calibration-file");
    }
    try {
      calibration = CalibrationTable::load(cfg.calibration_file);
    } catch (const MissingCalibration &e) {
      return fail(kMissingCalibration, e.what());
    } catch (const std::exception &e) {
      return fail(kUsage, "invalid calibration file " + cfg.calibration_file + ": " + e.what());
    }
  }

  try {
    ExperimentOutput result = run_experiment(resolved, calibration ? &*calibration : nullptr);
    if (cfg.experiment == Experiment::kCalibrate) {
      const std::string path = !cfg.calibration_file.empty() ? cfg.calibration_file : cfg.out;
      if (path.empty()) return fail(kUsage, "calibrate needs --calibration-file or --out");
      if (std::filesystem::exists(path)) {
        CalibrationTable merged = CalibrationTable::load(path);
        merged.merge(result.calibration);
        result.calibration = merged;
      }
      result.calibration.save(path);
      return kOk;
    }
    const std::string text = serialize(result, cfg.format);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      write_file(cfg.out, text);
    }
  } catch (const MissingCalibration &e) {
    return fail(kMissingCalibration, e.what());
  } catch (const EstimationFailure &e) {
    return fail(kEstimation, e.what());
  } catch (const UndefinedPointer &e) {
    return fail(kEstimation, e.what());
  } catch (const std::invalid_argument &e) {
    return fail(kUsage, e.what());
  } catch (const std::exception &e) {
    return fail(kEstimation, e.what());
  }
  return kOk;
}
