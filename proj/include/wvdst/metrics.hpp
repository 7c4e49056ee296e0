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

#ifndef WVDST_METRICS_HPP
#define WVDST_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "wvdst/qmath.hpp"

namespace wvdst {

struct MseReport {
  double mean = 0.0;
  double stderr_ = 0.0;  // standard error of the mean
  std::uint64_t reps = 0;
  double scaled = 0.0;  // mean * copies
  std::uint64_t copies = 0;
};

/// Squared Hilbert-Schmidt distance between an estimate (Hermitian, possibly
/// not PSD) and the true state.
inline double mse_exact(const ComplexMatrix &estimate, const DensityMatrix &truth) {
  if (static_cast<std::size_t>(estimate.rows()) != truth.dim()) throw std::invalid_argument("mse_exact: dim mismatch");
  return frobenius_dist2(estimate, truth.matrix());
}

/// Pure/pure case: 2 (1 - |<estimate|truth>|^2).
inline double mse_exact(const PureState &estimate, const PureState &truth) {
  if (estimate.dim() != truth.dim()) throw std::invalid_argument("mse_exact: dim mismatch");
  return std::max(0.0, 2.0 * (1.0 - fidelity(estimate, truth)));
}

/// tr(rho_r^dag rho_r) - tr(rho^2). Diagnostic only: vanishes for any pair of
/// pure states and can be negative.
inline double mse_purity_shortcut(const ComplexMatrix &estimate, const DensityMatrix &truth) {
  if (static_cast<std::size_t>(estimate.rows()) != truth.dim()) {
    throw std::invalid_argument("mse_purity_shortcut: dim mismatch");
  }
  return (estimate.adjoint() * estimate).trace().real() - (truth.matrix() * truth.matrix()).trace().real();
}

/// Mean, standard error and copy-scaled mean. Sums are compensated so the
/// result does not depend on input order beyond roundoff.
inline MseReport aggregate(std::span<const double> values, std::uint64_t copies) {
  if (values.empty()) throw std::invalid_argument("aggregate: empty value list");
  auto neumaier = [](std::span<const double> xs, auto &&f) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
      const double y = f(x);
      const double t = sum + y;
      comp += (std::abs(sum) >= std::abs(y)) ? (sum - t) + y : (y - t) + sum;
      sum = t;
    }
    return sum + comp;
  };
  const auto n = static_cast<double>(values.size());
  const double mean = neumaier(values, [](double x) { return x; }) / n;
  double se = 0.0;
  if (values.size() > 1) {
    const double ss = neumaier(values, [mean](double x) { return (x - mean) * (x - mean); });
    se = std::sqrt(ss / (n - 1.0) / n);
  }
  return MseReport{mean, se, values.size(), mean * static_cast<double>(copies), copies};
}

}  // namespace wvdst

#endif  // WVDST_METRICS_HPP
