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

// Conventional tomography reference points: closed-form scaled MSEs for
// complete-MUB and SIC tomography, and a Monte Carlo linear-inversion MUB
// tomography simulator for prime dimensions.

#ifndef WVDST_BASELINES_HPP
#define WVDST_BASELINES_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wvdst/bases.hpp"
#include "wvdst/metrics.hpp"
#include "wvdst/parallel.hpp"
#include "wvdst/qmath.hpp"
#include "wvdst/rng.hpp"

namespace wvdst {

enum class BaselineStrategy { kMubAnalytic, kSicAnalytic, kMubSimulated };

struct BaselineResult {
  std::size_t dim = 0;
  BaselineStrategy strategy = BaselineStrategy::kMubAnalytic;
  double scaled_mse = 0.0;
  double stderr_ = 0.0;
};

/// d^2 - 1
inline double mub_scaled_mse(std::size_t d) {
  if (d < 2) throw std::invalid_argument("mub_scaled_mse: d must be >= 2");
  const auto x = static_cast<double>(d);
  return x * x - 1.0;
}

/// d^2 + d - 2
inline double sic_scaled_mse(std::size_t d) {
  if (d < 2) throw std::invalid_argument("sic_scaled_mse: d must be >= 2");
  const auto x = static_cast<double>(d);
  return x * x + x - 2.0;
}

/// Linear-inversion estimate sum_{b,k} f_bk Pi_bk - I from per-basis
/// outcome frequencies f (one row per basis).
inline ComplexMatrix mub_linear_inversion(const std::vector<OrthonormalBasis> &bases,
                                          const std::vector<std::vector<double>> &frequencies) {
  const auto d = static_cast<Eigen::Index>(bases.front().dim());
  ComplexMatrix rho = -ComplexMatrix::Identity(d, d);
  for (std::size_t b = 0; b < bases.size(); ++b) {
    for (std::size_t k = 0; k < bases[b].dim(); ++k) rho += frequencies[b][k] * bases[b][k].projector();
  }
  return rho;
}

/// One tomography run: N/(d+1) copies per basis of the complete set, each
/// outcome drawn by inverse CDF. Returns the estimate.
inline ComplexMatrix mub_tomography_once(const PureState &phi, const std::vector<OrthonormalBasis> &bases,
                                         std::uint64_t copies, Engine &rng) {
  const std::size_t d = phi.dim();
  const std::uint64_t per_basis = copies / (d + 1);
  std::vector<std::vector<double>> freq(bases.size(), std::vector<double>(d, 0.0));
  std::vector<double> cdf(d);
  for (std::size_t b = 0; b < bases.size(); ++b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      acc += std::norm(bases[b][k].overlap(phi));
      cdf[k] = acc;
    }
    std::vector<std::uint64_t> counts(d, 0);
    for (std::uint64_t m = 0; m < per_basis; ++m) {
      const double u = uniform01(rng) * acc;
      auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      ++counts[std::min(k, d - 1)];
    }
    for (std::size_t k = 0; k < d; ++k) freq[b][k] = static_cast<double>(counts[k]) / static_cast<double>(per_basis);
  }
  return mub_linear_inversion(bases, freq);
}

/// Scaled MSE N * E||rho_hat - rho||^2 of linear-inversion MUB tomography for
/// a fixed state; repetition r samples from key.child({r}).
inline BaselineResult mub_tomography_sim(const PureState &phi, std::uint64_t copies, std::uint64_t reps,
                                         const StreamKey &key, unsigned jobs = 1) {
  const std::size_t d = phi.dim();
  const auto bases = complete_mub_set(d);
  if (copies < d + 1) throw std::invalid_argument("mub_tomography_sim: need at least d+1 copies");
  if (reps == 0) throw std::invalid_argument("mub_tomography_sim: reps must be positive");
  const DensityMatrix truth = DensityMatrix::from_pure(phi);
  const std::vector<double> errors = parallel_map(reps, jobs, [&](std::size_t r) {
    Engine rng = key.child({static_cast<std::uint64_t>(r)}).engine();
    return mse_exact(mub_tomography_once(phi, bases, copies, rng), truth);
  });
  const MseReport rep = aggregate(errors, copies);
  return {d, BaselineStrategy::kMubSimulated, rep.scaled, rep.stderr_ * static_cast<double>(copies)};
}

}  // namespace wvdst

#endif  // WVDST_BASELINES_HPP
