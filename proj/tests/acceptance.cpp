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


// Acceptance suite. Prints one "[PASS]" or "[FAIL]" line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "wvdst/wvdst.hpp"

using namespace wvdst;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

DensityMatrix random_mixed(std::size_t d, Engine &rng) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  std::uniform_real_distribution<double> w(0.1, 1.0);
  for (int k = 0; k < 3; ++k) m += w(rng) * haar_random_pure(d, rng).projector();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(m / m.trace().real());
}

// Max-abs amplitude difference after removing the global phase.
double phase_residual(const PureState &est, const PureState &truth) {
  const cd ov = est.overlap(truth);
  const cd phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cd(1.0);
  return (est.amplitudes() * phase - truth.amplitudes()).cwiseAbs().maxCoeff();
}

double fit_slope(const std::vector<double> &x, const std::vector<double> &y) {
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    num += (x[k] - mx) * (y[k] - my);
    den += (x[k] - mx) * (x[k] - mx);
  }
  return num / den;
}

std::size_t nearest(const std::vector<double> &grid, double x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - x) < std::abs(grid[best] - x)) best = i;
  }
  return best;
}

Verdict zero_noise_exactness() {
  Engine rng = StreamKey(101).engine();
  double worst = 0.0;
  for (double g : {0.3, 0.8, 1.2, 2.0}) {
    const CouplingStrength c(g);
    for (std::size_t d = 2; d <= 8; ++d) {
      const MubPair mub = fourier_mub(d);

      const DensityMatrix mixed = random_mixed(d, rng);
      ExactSource mixed_src(mixed);
      worst = std::max(worst, (original_dst(mixed_src, mub, c, 2 * d) - mixed.matrix()).cwiseAbs().maxCoeff());

      const PureState phi = haar_random_pure(d, rng);
      const DensityMatrix pure = DensityMatrix::from_pure(phi);
      ExactSource src(pure);
      worst = std::max(worst, (original_dst(src, mub, c, 2 * d) - pure.matrix()).cwiseAbs().maxCoeff());

      worst = std::max(worst, phase_residual(revised_dst(src, mub.basis_a[0], mub.basis_psi, c, 2), phi));
      const OrthonormalBasis frame = gram_schmidt_extend(haar_random_pure(d, rng));
      worst = std::max(worst, phase_residual(revised_dst(src, probe_state(frame), frame, c, 2), phi));

      HybridConfig h;
      h.n1 = 2 * d;
      h.n2 = 2;
      h.g1 = g;
      h.g2 = g;
      h.weight_e1 = 0.3;
      h.weight_e2 = 0.01;
      worst = std::max(worst, phase_residual(hybrid_dst(src, h, mub).combined, phi));
    }
  }
  return {worst < 1e-10, fmt("max residual %.3g over d=2..8, 4 couplings (limit 1e-10)", worst)};
}

Verdict weak_value_oracle_equivalence() {
  Engine rng = StreamKey(102).engine();
  std::uniform_real_distribution<double> gd(0.01, kPi - 0.01);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 7);
    const DensityMatrix rho = (t % 2 == 0) ? random_mixed(d, rng) : DensityMatrix::from_pure(haar_random_pure(d, rng));
    const PureState a = haar_random_pure(d, rng);
    const PureState psi = haar_random_pure(d, rng);
    const CouplingStrength g(gd(rng));
    const cd w = exact_weak_value(postselected_pointer(rho, a, g, psi), g);
    worst = std::max(worst, std::abs(w - weak_value_oracle(rho, a, psi)));
  }
  return {worst < 1e-10, fmt("max |W - oracle| %.3g over 1000 tuples (limit 1e-10)", worst)};
}

Verdict sum_rule() {
  Engine rng = StreamKey(103).engine();
  double analytic = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 7);
    const DensityMatrix rho = random_mixed(d, rng);
    const MubPair mub = fourier_mub(d);
    const CouplingStrength g(0.1 + 0.025 * t);
    ExactSource src(rho);
    for (std::size_t n = 0; n < d; ++n) {
      const PureState &a = mub.basis_a[n];
      const WeakValueTable tab = src.measure(a, g, mub.basis_psi, 0);
      const cd sum = std::accumulate(tab.pw.begin(), tab.pw.end(), cd(0.0));
      analytic = std::max(analytic, std::abs(sum - a.amplitudes().dot(rho.matrix() * a.amplitudes())));
    }
  }

  // Sampled: the sum over j is the mean pointer reading, so its standard error
  // follows from the two-outcome marginal of each observable.
  const std::uint64_t m = 1000000;
  double worst_z = 0.0;
  for (std::size_t d : {2u, 3u, 5u}) {
    const DensityMatrix rho = random_mixed(d, rng);
    const PureState a = haar_random_pure(d, rng);
    const OrthonormalBasis post = fourier_mub(d).basis_psi;
    const CouplingStrength g(1.2);
    const JointDistribution dy = joint_distribution(rho, a, g, post, deformed_sigma_y(g));
    const JointDistribution dx = joint_distribution(rho, a, g, post, deformed_sigma_x(g));
    Engine ry = StreamKey(1030).child({d, 0}).engine();
    Engine rx = StreamKey(1030).child({d, 1}).engine();
    const WeakValueTable t = estimate_pw(sample_tally(dy, m, ry), sample_tally(dx, m, rx), dy.eigenvalues, dx.eigenvalues, g);
    const cd sum = std::accumulate(t.pw.begin(), t.pw.end(), cd(0.0));
    auto se = [&](const JointDistribution &dist) {
      double p0 = 0.0;
      for (std::size_t j = 0; j < dist.dim; ++j) p0 += dist(j, 0);
      const double gap = std::abs(dist.eigenvalues[0] - dist.eigenvalues[1]);
      return gap * std::sqrt(p0 * (1.0 - p0) / double(m)) / (2.0 * g.value());
    };
    const cd target = a.amplitudes().dot(rho.matrix() * a.amplitudes());
    worst_z = std::max(worst_z, std::abs(sum.real() - target.real()) / se(dy));
    worst_z = std::max(worst_z, std::abs(sum.imag() - target.imag()) / se(dx));
  }
  return {analytic < 1e-12 && worst_z < 5.0,
          fmt("analytic max residual %.3g (limit 1e-12); sampled M=1e6 worst deviation %.2f SE (limit 5)", analytic,
              worst_z)};
}

Verdict approximate_bias_slope() {
  Engine rng = StreamKey(104).engine();
  double lo = 1e9, hi = -1e9;
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 5);
    const DensityMatrix rho = random_mixed(d, rng);
    const PureState a = haar_random_pure(d, rng);
    const PureState psi = haar_random_pure(d, rng);
    const cd exact = weak_value_oracle(rho, a, psi);
    std::vector<double> lx, ly;
    for (double g = 1e-4; g <= 1.0001e-2; g *= std::pow(10.0, 0.25)) {
      const CouplingStrength c(g);
      lx.push_back(std::log(g));
      ly.push_back(std::log(std::abs(approx_weak_value(postselected_pointer(rho, a, c, psi), c) - exact)));
    }
    const double s = fit_slope(lx, ly);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo >= 0.85 && hi <= 1.15, fmt("log-log slopes in [%.4f, %.4f] over 20 tuples (allowed 1 +/- 0.15)", lo, hi)};
}

Verdict mub_baseline() {
  const std::uint64_t n = 10000, reps = 1000;
  bool ok = true;
  std::string detail;
  for (std::size_t d : {2u, 3u, 5u, 7u}) {
    const auto bases = complete_mub_set(d);
    std::vector<double> errs(reps);
    for (std::uint64_t r = 0; r < reps; ++r) {
      const StreamKey key = StreamKey(105).child({d, r});
      Engine state_rng = key.child({0}).engine();
      const PureState phi = haar_random_pure(d, state_rng);
      Engine rng = key.child({2}).engine();
      errs[r] = mse_exact(mub_tomography_once(phi, bases, n, rng), DensityMatrix::from_pure(phi));
    }
    const MseReport rep = aggregate(errs, n);
    const double se = rep.stderr_ * double(n);
    const double target = mub_scaled_mse(d);
    const bool pass = std::abs(rep.scaled - target) <= 3.0 * se;
    ok = ok && pass;
    detail += fmt("d=%zu %.3f+/-%.3f vs %.0f; ", d, rep.scaled, se, target);
  }
  return {ok, detail + "within 3 SE"};
}

Verdict analytic_baselines() {
  const double mub = mub_scaled_mse(15), sic = sic_scaled_mse(15);
  return {mub == 224.0 && sic == 238.0, fmt("mub(15)=%.17g sic(15)=%.17g (expected 224, 238)", mub, sic)};
}

Verdict fig1_shape() {
  ExperimentConfig c;
  c.experiment = Experiment::kFig1;
  c.seed = 107;
  const ResolvedConfig r = resolve(c);
  const auto recs = run_fig1(r);
  std::vector<double> grid;
  for (const auto &rec : recs) grid.push_back(rec.theta);
  const ThetaRecord &half = recs[nearest(grid, 0.5 * kPi)];
  const ThetaRecord &far = recs[nearest(grid, 0.95 * kPi)];
  bool is_min = true;
  for (const auto &rec : recs) {
    const double se = std::hypot(rec.mse.stderr_, half.mse.stderr_);
    if (half.mse.mean > rec.mse.mean + 2.0 * se) is_min = false;
  }
  const double ratio = far.mse.mean / half.mse.mean;
  return {ratio >= 10.0 && is_min,
          fmt("MSE(0.95pi)/MSE(pi/2) = %.2f (need >= 10); pi/2 grid minimum within 2 SE: %s; %zu points, %llu reps",
              ratio, is_min ? "yes" : "no", recs.size(), static_cast<unsigned long long>(r.reps))};
}

Verdict fig2_flatness() {
  ExperimentConfig c;
  c.experiment = Experiment::kFig2;
  c.copies = 20000;
  c.n1 = 4000;
  c.n2 = 16000;
  c.g1 = 1.2;
  c.g2 = 0.4;
  c.reps = 1000;
  c.seed = 108;
  const ResolvedConfig r = resolve(c);
  ExperimentConfig cc = c;
  cc.experiment = Experiment::kCalibrate;
  const CalibrationTable cal = run_calibrate(resolve(cc));
  const auto recs = run_fig2(r, cal);
  double lo = 1e300, hi = 0.0;
  for (const auto &rec : recs) {
    lo = std::min(lo, rec.mse.mean);
    hi = std::max(hi, rec.mse.mean);
  }
  return {hi / lo < 10.0, fmt("max/min MSE = %.3f over %zu angles (limit 10); range [%.3g, %.3g]", hi / lo, recs.size(),
                              lo, hi)};
}

Verdict fig3_headline() {
  ExperimentConfig c;
  c.experiment = Experiment::kFig3;
  c.dim_grid = {2, 5, 10, 15};
  c.reps = 100;
  c.seed = 109;
  ExperimentConfig cc = c;
  cc.experiment = Experiment::kCalibrate;
  cc.reps = 1000;
  const CalibrationTable cal = run_calibrate(resolve(cc));
  const auto recs = run_fig3(resolve(c), cal);
  bool below_mub = true;
  double at15 = -1.0, se15 = 0.0;
  std::string detail;
  for (const auto &rec : recs) {
    if (rec.strategy != "hybrid-dst") continue;
    below_mub = below_mub && rec.value < mub_scaled_mse(15);
    detail += fmt("d=%zu %.2f; ", rec.dim, rec.value);
    if (rec.dim == 15) {
      at15 = rec.value;
      se15 = rec.stderr_;
    }
  }
  const bool near61 = at15 >= 61.0 * 0.7 && at15 <= 61.0 * 1.3;
  return {near61 && below_mub,
          detail + fmt("d=15 SE %.2f; d=15 value %.2f within [42.7, 79.3]: %s; all below 224: %s", se15, at15, near61 ? "yes" : "no",
                       below_mub ? "yes" : "no")};
}

Verdict determinism() {
  auto cal_for = [](ExperimentConfig c) {
    c.experiment = Experiment::kCalibrate;
    c.reps = 100;
    return run_calibrate(resolve(c));
  };
  std::vector<ExperimentConfig> configs;
  {
    ExperimentConfig c;
    c.experiment = Experiment::kFig1;
    c.reps = 40;
    c.theta_grid = {0.2, 1.5, 3.0};
    configs.push_back(c);
  }
  {
    ExperimentConfig c;
    c.experiment = Experiment::kFig2;
    c.copies = 1000;
    c.reps = 20;
    c.theta_grid = {0.4, 2.9};
    configs.push_back(c);
  }
  {
    ExperimentConfig c;
    c.experiment = Experiment::kFig3;
    c.dim_grid = {2, 3};
    c.reps = 10;
    configs.push_back(c);
  }
  {
    ExperimentConfig c;
    c.experiment = Experiment::kSingle;
    c.dim = 3;
    c.copies = 3000;
    c.reps = 10;
    configs.push_back(c);
  }
  {
    ExperimentConfig c;
    c.experiment = Experiment::kCalibrate;
    c.dim = 2;
    c.copies = 500;
    c.reps = 100;
    configs.push_back(c);
  }
  std::size_t compared = 0;
  for (ExperimentConfig c : configs) {
    c.seed = 110;
    const bool hybrid = c.experiment != Experiment::kFig1 && c.experiment != Experiment::kCalibrate;
    const CalibrationTable cal = hybrid ? cal_for(c) : CalibrationTable{};
    std::string reference;
    for (unsigned jobs : {1u, 2u, 4u}) {
      c.jobs = jobs;
      const ExperimentOutput out = run_experiment(resolve(c), hybrid ? &cal : nullptr);
      const std::string text = serialize(out, OutputFormat::kCsv) + serialize(out, OutputFormat::kJson);
      if (jobs == 1) {
        reference = text;
      } else if (text != reference) {
        return {false, fmt("%s output differs between --jobs 1 and --jobs %u", to_string(c.experiment), jobs)};
      }
      ++compared;
    }
  }
  return {true, fmt("%zu runs over 5 experiments and jobs {1,2,4} byte-identical", compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
      {"AC1 zero-noise exactness", zero_noise_exactness},
      {"AC2 weak-value oracle equivalence", weak_value_oracle_equivalence},
      {"AC3 sum rule", sum_rule},
      {"AC4 approximate-estimator bias slope", approximate_bias_slope},
      {"AC5 MUB baseline reproduction", mub_baseline},
      {"AC6 analytic baselines", analytic_baselines},
      {"AC7 single-step sweep shape", fig1_shape},
      {"AC8 hybrid sweep flatness", fig2_flatness},
      {"AC9 dimension sweep headline", fig3_headline},
      {"AC10 determinism across jobs", determinism},
  };
  int failures = 0;
  for (const auto &[name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
