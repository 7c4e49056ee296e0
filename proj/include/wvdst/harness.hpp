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

// Experiment orchestration: the theta sweeps for the revised and hybrid
// estimators, the dimension sweep against conventional baselines, step
// calibration and single-state runs, plus CSV/JSON serialization.
//
// Stream layout: StreamKey(seed).child({experiment, grid index, repetition})
// then child({0}) for the state draw, child({1}) for the estimator's
// measurements and child({2}) for the MUB baseline. Output therefore depends
// only on (config, seed), never on the number of worker threads.

#ifndef WVDST_HARNESS_HPP
#define WVDST_HARNESS_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wvdst/baselines.hpp"
#include "wvdst/bases.hpp"
#include "wvdst/calibration.hpp"
#include "wvdst/dst.hpp"
#include "wvdst/metrics.hpp"
#include "wvdst/parallel.hpp"
#include "wvdst/rng.hpp"
#include "wvdst/sampler.hpp"

namespace wvdst {

enum class Experiment : std::uint64_t { kFig1 = 1, kFig2 = 2, kFig3 = 3, kCalibrate = 4, kSingle = 5 };
enum class OutputFormat { kCsv, kJson };

inline const char *to_string(Experiment e) {
  switch (e) {
    case Experiment::kFig1: return "fig1";
    case Experiment::kFig2: return "fig2";
    case Experiment::kFig3: return "fig3";
    case Experiment::kCalibrate: return "calibrate";
    case Experiment::kSingle: return "single";
  }
  return "?";
}

inline Experiment experiment_from_string(const std::string &s) {
  if (s == "fig1" || s == "fig1-sweep") return Experiment::kFig1;
  if (s == "fig2" || s == "fig2-sweep") return Experiment::kFig2;
  if (s == "fig3" || s == "fig3-dims") return Experiment::kFig3;
  if (s == "calibrate") return Experiment::kCalibrate;
  if (s == "single" || s == "single-run") return Experiment::kSingle;
  throw std::invalid_argument("unknown experiment '" + s + "'");
}

/// Measurement strength of the revised step per dimension (d = 2..15).
inline double default_g2(std::size_t d) {
  if (d >= 2 && d <= 3) return 0.4;
  if (d >= 4 && d <= 8) return 0.6;
  if (d == 9) return 0.7;
  if (d >= 10 && d <= 12) return 0.8;
  if (d >= 13 && d <= 15) return 0.9;
  throw std::invalid_argument("no tabulated g2 for d=" + std::to_string(d) + " (supported 2..15)");
}

/// Evenly spaced grid on [0.02 pi, 0.98 pi].
inline std::vector<double> default_theta_grid(std::size_t points = 33) {
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = kPi * (0.02 + 0.96 * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  return grid;
}

/// Unset optionals take the per-experiment defaults in resolve().
struct ExperimentConfig {
  Experiment experiment = Experiment::kFig1;
  std::optional<std::size_t> dim;
  std::vector<double> theta_grid;
  std::vector<std::size_t> dim_grid;
  std::optional<std::uint64_t> copies, n1, n2;
  std::optional<double> g1, g2;
  std::optional<std::uint64_t> reps;
  std::uint64_t seed = 0;
  std::string out;
  OutputFormat format = OutputFormat::kCsv;
  std::string calibration_file;
  unsigned jobs = 1;
};

/// Fully specified parameters for one run.
struct ResolvedConfig {
  Experiment experiment = Experiment::kFig1;
  std::size_t dim = 2;
  std::vector<double> theta_grid;
  std::vector<std::size_t> dim_grid;
  std::uint64_t copies = 0, n1 = 0, n2 = 0;
  double g1 = 1.2;
  std::optional<double> g2;  // empty: per-dimension default
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

inline ResolvedConfig resolve(const ExperimentConfig &c) {
  ResolvedConfig r;
  r.experiment = c.experiment;
  r.seed = c.seed;
  r.jobs = c.jobs == 0 ? 1 : c.jobs;
  r.dim = c.dim.value_or(2);
  if (r.dim < 2) throw std::invalid_argument("--dim must be >= 2");
  r.g1 = c.g1.value_or(1.2);
  r.g2 = c.g2;
  r.theta_grid = c.theta_grid.empty() ? default_theta_grid() : c.theta_grid;
  r.dim_grid = c.dim_grid;

  const bool per_dim_calibration = c.experiment == Experiment::kCalibrate && !c.dim_grid.empty();
  switch (c.experiment) {
    case Experiment::kFig1:
      r.copies = c.copies.value_or(100);
      r.reps = c.reps.value_or(10000);
      if (r.copies < 2) throw std::invalid_argument("--copies must be >= 2");
      break;
    case Experiment::kFig2:
    case Experiment::kSingle:
    case Experiment::kCalibrate: {
      if (c.experiment == Experiment::kFig2) r.reps = c.reps.value_or(10000);
      if (c.experiment == Experiment::kSingle) r.reps = c.reps.value_or(100);
      if (c.experiment == Experiment::kCalibrate) r.reps = c.reps.value_or(1000);
      if (per_dim_calibration) break;
      if (c.n1 && c.n2) {
        r.n1 = *c.n1;
        r.n2 = *c.n2;
        if (c.copies && *c.copies != r.n1 + r.n2) throw std::invalid_argument("--n1 + --n2 must equal --copies");
        r.copies = r.n1 + r.n2;
      } else if (c.n1 || c.n2) {
        r.copies = c.copies.value_or(20000);
        const std::uint64_t given = c.n1 ? *c.n1 : *c.n2;
        if (given >= r.copies) throw std::invalid_argument("--n1/--n2 must be smaller than --copies");
        r.n1 = c.n1 ? given : r.copies - given;
        r.n2 = r.copies - r.n1;
      } else {
        r.copies = c.copies.value_or(20000);
        r.n1 = r.copies / 5;
        r.n2 = r.copies - r.n1;
      }
      if (r.n1 < 2 * r.dim || r.n2 < 2) throw std::invalid_argument("copy budgets too small for the requested dimension");
      if (!r.g2) r.g2 = r.dim <= 15 ? default_g2(r.dim) : 0.4;
      break;
    }
    case Experiment::kFig3:
      r.reps = c.reps.value_or(1000);
      break;
  }
  if (c.experiment == Experiment::kFig3 || per_dim_calibration) {
    if (r.dim_grid.empty()) {
      for (std::size_t d = 2; d <= 15; ++d) r.dim_grid.push_back(d);
    }
    for (std::size_t d : r.dim_grid) default_g2(d);  // range check
  }
  if (r.reps == 0) throw std::invalid_argument("--reps must be positive");
  if (r.theta_grid.empty()) throw std::invalid_argument("theta grid is empty");
  CouplingStrength{r.g1};
  if (r.g2) CouplingStrength{*r.g2};
  return r;
}

struct ThetaRecord {
  double theta = 0.0;
  MseReport mse;
};

struct DimRecord {
  std::size_t dim = 0;
  std::string strategy;
  double value = 0.0;  // scaled MSE (fig3) or MSE (single)
  double stderr_ = 0.0;
  std::uint64_t reps = 0;
};

struct ExperimentOutput {
  Experiment experiment = Experiment::kFig1;
  std::uint64_t seed = 0;
  std::vector<ThetaRecord> theta_records;
  std::vector<DimRecord> dim_records;
  CalibrationTable calibration;  // populated by the calibrate experiment
};

/// cos(theta/2)|0> + sin(theta/2)|1>, embedded in dimension d.
inline PureState theta_state(double theta, std::size_t d = 2) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  v(0) = std::cos(0.5 * theta);
  v(1) = std::sin(0.5 * theta);
  return PureState::normalized(v);
}

inline StreamKey rep_key(std::uint64_t seed, Experiment e, std::uint64_t grid, std::uint64_t rep) {
  return StreamKey(seed).child({static_cast<std::uint64_t>(e), grid, rep});
}

/// One revised-DST reconstruction of theta_state measuring |0><0| with Fourier postselection.
inline double fig1_trial(double theta, std::size_t d, std::uint64_t copies, double g, const StreamKey &key) {
  const PureState truth = theta_state(theta, d);
  const MubPair mub = fourier_mub(d);
  MonteCarloSource source(DensityMatrix::from_pure(truth), key.child({1}));
  return mse_exact(revised_dst(source, mub.basis_a[0], mub.basis_psi, CouplingStrength{g}, copies), truth);
}

inline std::vector<ThetaRecord> run_fig1(const ResolvedConfig &c) {
  std::vector<ThetaRecord> out;
  for (std::size_t i = 0; i < c.theta_grid.size(); ++i) {
    const double theta = c.theta_grid[i];
    const auto errors = parallel_map(c.reps, c.jobs, [&](std::size_t r) {
      return fig1_trial(theta, c.dim, c.copies, c.g1, rep_key(c.seed, Experiment::kFig1, i, r));
    });
    out.push_back({theta, aggregate(errors, c.copies)});
  }
  return out;
}

inline HybridConfig hybrid_config(std::size_t d, std::uint64_t n1, std::uint64_t n2, double g1, double g2,
                                  const CalibrationTable &calibration) {
  HybridConfig h;
  h.n1 = n1;
  h.n2 = n2;
  h.g1 = g1;
  h.g2 = g2;
  h.weight_e1 = calibration.require(d, g1, n1, EstimatorKind::kOriginal).mse;
  h.weight_e2 = calibration.require(d, g2, n2, EstimatorKind::kRevised).mse;
  return h;
}

inline double hybrid_trial(const PureState &truth, const HybridConfig &h, const MubPair &mub, const StreamKey &key) {
  MonteCarloSource source(DensityMatrix::from_pure(truth), key.child({1}));
  return mse_exact(hybrid_dst(source, h, mub).combined, truth);
}

inline std::vector<ThetaRecord> run_fig2(const ResolvedConfig &c, const CalibrationTable &calibration) {
  const HybridConfig h = hybrid_config(c.dim, c.n1, c.n2, c.g1, *c.g2, calibration);
  const MubPair mub = fourier_mub(c.dim);
  std::vector<ThetaRecord> out;
  for (std::size_t i = 0; i < c.theta_grid.size(); ++i) {
    const PureState truth = theta_state(c.theta_grid[i], c.dim);
    const auto errors = parallel_map(c.reps, c.jobs, [&](std::size_t r) {
      return hybrid_trial(truth, h, mub, rep_key(c.seed, Experiment::kFig2, i, r));
    });
    out.push_back({c.theta_grid[i], aggregate(errors, c.copies)});
  }
  return out;
}

/// Copy budgets of the dimension sweep: N = 10^4 d split 1:4.
struct DimBudget {
  std::uint64_t copies, n1, n2;
  double g2;
};

inline DimBudget fig3_budget(std::size_t d, std::optional<double> g2_override = std::nullopt) {
  const auto dd = static_cast<std::uint64_t>(d);
  return {10000 * dd, 2000 * dd, 8000 * dd, g2_override.value_or(default_g2(d))};
}

inline std::vector<DimRecord> run_fig3(const ResolvedConfig &c, const CalibrationTable &calibration) {
  std::vector<DimRecord> out;
  for (std::size_t d : c.dim_grid) {
    const DimBudget b = fig3_budget(d, c.g2);
    const HybridConfig h = hybrid_config(d, b.n1, b.n2, c.g1, b.g2, calibration);
    const MubPair mub = fourier_mub(d);
    const auto errors = parallel_map(c.reps, c.jobs, [&](std::size_t r) {
      const StreamKey key = rep_key(c.seed, Experiment::kFig3, d, r);
      Engine rng = key.child({0}).engine();
      return hybrid_trial(haar_random_pure(d, rng), h, mub, key);
    });
    const MseReport hybrid = aggregate(errors, b.copies);
    out.push_back({d, "hybrid-dst", hybrid.scaled, hybrid.stderr_ * static_cast<double>(b.copies), c.reps});
    out.push_back({d, "mub-analytic", mub_scaled_mse(d), 0.0, 0});
    if (is_prime(d)) {
      const auto bases = complete_mub_set(d);
      const auto mub_errors = parallel_map(c.reps, c.jobs, [&](std::size_t r) {
        const StreamKey key = rep_key(c.seed, Experiment::kFig3, d, r);
        Engine state_rng = key.child({0}).engine();
        const PureState truth = haar_random_pure(d, state_rng);
        Engine rng = key.child({2}).engine();
        return mse_exact(mub_tomography_once(truth, bases, b.copies, rng), DensityMatrix::from_pure(truth));
      });
      const MseReport sim = aggregate(mub_errors, b.copies);
      out.push_back({d, "mub-simulated", sim.scaled, sim.stderr_ * static_cast<double>(b.copies), c.reps});
    }
    out.push_back({d, "sic-analytic", sic_scaled_mse(d), 0.0, 0});
  }
  return out;
}

/// Entries needed by fig2/single (no dim grid) or fig3 (dim grid).
inline CalibrationTable run_calibrate(const ResolvedConfig &c) {
  CalibrationTable table;
  const StreamKey key = StreamKey(c.seed).child({static_cast<std::uint64_t>(Experiment::kCalibrate)});
  auto add = [&](std::size_t d, std::uint64_t n1, std::uint64_t n2, double g2) {
    table.insert(calibrate(d, c.g1, n1, EstimatorKind::kOriginal, c.reps, key, c.jobs));
    table.insert(calibrate(d, g2, n2, EstimatorKind::kRevised, c.reps, key, c.jobs));
  };
  if (!c.dim_grid.empty()) {
    for (std::size_t d : c.dim_grid) {
      const DimBudget b = fig3_budget(d, c.g2);
      add(d, b.n1, b.n2, b.g2);
    }
  } else {
    add(c.dim, c.n1, c.n2, *c.g2);
  }
  return table;
}

/// Original DST (collapsed to a pure state) on the full budget versus the
/// hybrid pipeline, for one Haar-random state under repeated sampling.
inline std::vector<DimRecord> run_single(const ResolvedConfig &c, const CalibrationTable &calibration) {
  const HybridConfig h = hybrid_config(c.dim, c.n1, c.n2, c.g1, *c.g2, calibration);
  const MubPair mub = fourier_mub(c.dim);
  Engine state_rng = rep_key(c.seed, Experiment::kSingle, 0, 0).child({0}).engine();
  const PureState truth = haar_random_pure(c.dim, state_rng);
  const auto original = parallel_map(c.reps, c.jobs, [&](std::size_t r) {
    MonteCarloSource source(DensityMatrix::from_pure(truth), rep_key(c.seed, Experiment::kSingle, 1, r).child({1}));
    const ComplexMatrix rho_e = hermitize_normalize(original_dst(source, mub, CouplingStrength{c.g1}, c.copies));
    const PureState est = PureState::normalized(mub.basis_a.columns() * collapse_to_pure(rho_e).state.amplitudes());
    return mse_exact(est, truth);
  });
  const auto hybrid = parallel_map(c.reps, c.jobs, [&](std::size_t r) {
    return hybrid_trial(truth, h, mub, rep_key(c.seed, Experiment::kSingle, 2, r));
  });
  const MseReport ro = aggregate(original, c.copies);
  const MseReport rh = aggregate(hybrid, c.copies);
  return {{c.dim, "original-dst", ro.mean, ro.stderr_, c.reps}, {c.dim, "hybrid-dst", rh.mean, rh.stderr_, c.reps}};
}

/// Dispatches on the experiment. Hybrid experiments need `calibration`.
inline ExperimentOutput run_experiment(const ResolvedConfig &c, const CalibrationTable *calibration) {
  ExperimentOutput out;
  out.experiment = c.experiment;
  out.seed = c.seed;
  auto need = [&]() -> const CalibrationTable & {
    if (!calibration) throw MissingCalibration("experiment requires a calibration file");
    return *calibration;
  };
  switch (c.experiment) {
    case Experiment::kFig1: out.theta_records = run_fig1(c); break;
    case Experiment::kFig2: out.theta_records = run_fig2(c, need()); break;
    case Experiment::kFig3: out.dim_records = run_fig3(c, need()); break;
    case Experiment::kSingle: out.dim_records = run_single(c, need()); break;
    case Experiment::kCalibrate: out.calibration = run_calibrate(c); break;
  }
  return out;
}

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string to_csv(const ExperimentOutput &o) {
  std::ostringstream os;
  switch (o.experiment) {
    case Experiment::kFig1:
    case Experiment::kFig2:
      os << "theta_rad,mse_mean,mse_stderr,reps\n";
      for (const auto &r : o.theta_records) {
        os << format_double(r.theta) << ',' << format_double(r.mse.mean) << ',' << format_double(r.mse.stderr_) << ','
           << r.mse.reps << '\n';
      }
      break;
    case Experiment::kFig3:
      os << "dim,strategy,scaled_mse,stderr,reps\n";
      for (const auto &r : o.dim_records) {
        os << r.dim << ',' << r.strategy << ',' << format_double(r.value) << ',' << format_double(r.stderr_) << ','
           << r.reps << '\n';
      }
      break;
    case Experiment::kSingle:
      os << "dim,strategy,mse_mean,mse_stderr,reps\n";
      for (const auto &r : o.dim_records) {
        os << r.dim << ',' << r.strategy << ',' << format_double(r.value) << ',' << format_double(r.stderr_) << ','
           << r.reps << '\n';
      }
      break;
    case Experiment::kCalibrate:
      os << o.calibration.to_json().dump(2) << '\n';
      break;
  }
  return os.str();
}

inline std::string to_json(const ExperimentOutput &o) {
  if (o.experiment == Experiment::kCalibrate) return o.calibration.to_json().dump(2) + "\n";
  nlohmann::json records = nlohmann::json::array();
  for (const auto &r : o.theta_records) {
    records.push_back({{"theta_rad", r.theta}, {"mse_mean", r.mse.mean}, {"mse_stderr", r.mse.stderr_}, {"reps", r.mse.reps}});
  }
  const bool scaled = o.experiment == Experiment::kFig3;
  for (const auto &r : o.dim_records) {
    nlohmann::json j{{"dim", r.dim}, {"strategy", r.strategy}, {"reps", r.reps}};
    j[scaled ? "scaled_mse" : "mse_mean"] = r.value;
    j[scaled ? "stderr" : "mse_stderr"] = r.stderr_;
    records.push_back(j);
  }
  nlohmann::json doc{{"experiment", to_string(o.experiment)}, {"seed", o.seed}, {"records", records}};
  return doc.dump(2) + "\n";
}

inline std::string serialize(const ExperimentOutput &o, OutputFormat f) {
  return f == OutputFormat::kJson ? to_json(o) : to_csv(o);
}

}  // namespace wvdst

#endif  // WVDST_HARNESS_HPP
