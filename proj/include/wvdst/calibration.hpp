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

// Calibrated mean-square errors of the two hybrid steps, persisted as JSON:
//
//   {"format": "wvdst-calibration", "version": 1,
//    "entries": [{"d": 2, "g": 1.2, "N": 4000, "kind": "original",
//                 "mse": ..., "stderr": ..., "reps": ...}, ...]}
//
// "N" is the copy budget of the step; "kind" is "original" or "revised".

#ifndef WVDST_CALIBRATION_HPP
#define WVDST_CALIBRATION_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "wvdst/errors.hpp"

namespace wvdst {

enum class EstimatorKind { kOriginal, kRevised };

inline const char *to_string(EstimatorKind k) { return k == EstimatorKind::kOriginal ? "original" : "revised"; }

inline EstimatorKind estimator_kind_from_string(const std::string &s) {
  if (s == "original") return EstimatorKind::kOriginal;
  if (s == "revised") return EstimatorKind::kRevised;
  throw std::invalid_argument("unknown estimator kind '" + s + "'");
}

struct CalibrationEntry {
  std::size_t dim = 0;
  double g = 0.0;
  std::uint64_t copies = 0;
  EstimatorKind kind = EstimatorKind::kOriginal;
  double mse = 0.0;
  double stderr_ = 0.0;
  std::uint64_t reps = 0;
};

class CalibrationTable {
 public:
  static constexpr int kVersion = 1;

  void insert(const CalibrationEntry &e) {
    if (!(e.mse > 0.0) || e.stderr_ < 0.0) throw std::invalid_argument("CalibrationTable: invalid entry statistics");
    entries_[key(e.dim, e.g, e.copies, e.kind)] = e;
  }

  std::optional<CalibrationEntry> find(std::size_t dim, double g, std::uint64_t copies, EstimatorKind kind) const {
    auto it = entries_.find(key(dim, g, copies, kind));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// Throws MissingCalibration naming the absent key.
  const CalibrationEntry &require(std::size_t dim, double g, std::uint64_t copies, EstimatorKind kind) const {
    auto it = entries_.find(key(dim, g, copies, kind));
    if (it == entries_.end()) {
      std::ostringstream os;
      os << "no calibration entry for d=" << dim << " g=" << g << " N=" << copies << " kind=" << to_string(kind);
      throw MissingCalibration(os.str());
    }
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }

  std::vector<CalibrationEntry> entries() const {
    std::vector<CalibrationEntry> out;
    for (const auto &[k, e] : entries_) out.push_back(e);
    return out;
  }

  void merge(const CalibrationTable &other) {
    for (const auto &[k, e] : other.entries_) entries_[k] = e;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &[k, e] : entries_) {
      arr.push_back({{"d", e.dim},
                     {"g", e.g},
                     {"N", e.copies},
                     {"kind", to_string(e.kind)},
                     {"mse", e.mse},
                     {"stderr", e.stderr_},
                     {"reps", e.reps}});
    }
    return {{"format", "wvdst-calibration"}, {"version", kVersion}, {"entries", arr}};
  }

  static CalibrationTable from_json(const nlohmann::json &j) {
    if (j.value("format", "") != "wvdst-calibration") throw std::runtime_error("calibration file: unknown format");
    if (j.value("version", 0) != kVersion) throw std::runtime_error("calibration file: unsupported version");
    CalibrationTable t;
    for (const auto &e : j.at("entries")) {
      t.insert(CalibrationEntry{e.at("d").get<std::size_t>(), e.at("g").get<double>(), e.at("N").get<std::uint64_t>(),
                                estimator_kind_from_string(e.at("kind").get<std::string>()), e.at("mse").get<double>(),
                                e.at("stderr").get<double>(), e.at("reps").get<std::uint64_t>()});
    }
    return t;
  }

  void save(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write calibration file " + path.string());
    out << to_json().dump(2) << '\n';
  }

  static CalibrationTable load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingCalibration("calibration file not found: " + path.string());
    return from_json(nlohmann::json::parse(in));
  }

 private:
  using Key = std::tuple<std::size_t, long long, std::uint64_t, int>;

  // g is keyed at 1e-9 resolution so 0.4 from a flag and 0.4 from a file coincide.
  static Key key(std::size_t dim, double g, std::uint64_t copies, EstimatorKind kind) {
    return {dim, std::llround(g * 1e9), copies, static_cast<int>(kind)};
  }

  std::map<Key, CalibrationEntry> entries_;
};

}  // namespace wvdst

#endif  // WVDST_CALIBRATION_HPP
