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

// Direct state tomography estimators built on weak-value tables:
//
//  * original_dst  - row-by-row density matrix reconstruction, one projector
//                    |a_n><a_n| per row, postselection in a mutually unbiased basis;
//  * revised_dst   - pure-state reconstruction from a single projector |a><a|;
//  * hybrid_dst    - coarse original estimate, then revised DST with a probe
//                    built to have overlap 1/d with it, combined with
//                    inverse-MSE weights.

#ifndef WVDST_DST_HPP
#define WVDST_DST_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wvdst/bases.hpp"
#include "wvdst/calibration.hpp"
#include "wvdst/coupling.hpp"
#include "wvdst/errors.hpp"
#include "wvdst/metrics.hpp"
#include "wvdst/parallel.hpp"
#include "wvdst/qmath.hpp"
#include "wvdst/rng.hpp"
#include "wvdst/sampler.hpp"

namespace wvdst {

inline constexpr double kReferenceSkip = 1e-8;
inline constexpr double kProbeOverlapMin = 1e-10;
inline constexpr double kAlignmentMin = 1e-6;

/// Row n holds estimates of <a_n|rho|a_m> in the frame of the measured basis.
/// Not Hermitian in general.
using RawRowEstimate = ComplexMatrix;

/// Which row of the hermitized estimate supplies the phase reference when
/// collapsing to a pure state.
struct ReferenceRowPolicy {
  enum class Kind { kArgmaxDiagonal, kFixedIndex };
  Kind kind = Kind::kArgmaxDiagonal;
  std::size_t index = 0;

  static ReferenceRowPolicy argmax_diagonal() { return {}; }
  static ReferenceRowPolicy fixed(std::size_t row) { return {Kind::kFixedIndex, row}; }
};

template <SampleSource Source>
RawRowEstimate original_dst(Source &source, const MubPair &mub, CouplingStrength g, std::uint64_t budget) {
  const std::size_t d = mub.dim();
  if (source.dim() != d) throw std::invalid_argument("original_dst: dimension mismatch");
  if (budget < 2 * d) throw std::invalid_argument("original_dst: budget must be at least 2d copies");
  const std::uint64_t per_observable = budget / (2 * d);
  const ComplexMatrix overlaps = mub.basis_psi.columns().adjoint() * mub.basis_a.columns();  // (j, n) -> <psi_j|a_n>
  const auto n_dim = static_cast<Eigen::Index>(d);
  RawRowEstimate rows(n_dim, n_dim);
  for (Eigen::Index n = 0; n < n_dim; ++n) {
    const WeakValueTable t = source.measure(mub.basis_a[static_cast<std::size_t>(n)], g, mub.basis_psi, per_observable);
    for (Eigen::Index m = 0; m < n_dim; ++m) {
      cd acc = 0.0;
      for (Eigen::Index j = 0; j < n_dim; ++j) acc += overlaps(j, m) / overlaps(j, n) * t.pw[static_cast<std::size_t>(j)];
      rows(n, m) = acc;
    }
  }
  return rows;
}

/// (rho + rho^dag) / tr(rho + rho^dag). Hermitian with unit trace; PSD is not enforced.
inline ComplexMatrix hermitize_normalize(const RawRowEstimate &raw) {
  const ComplexMatrix h = raw + raw.adjoint();
  const double tr = h.trace().real();
  if (std::abs(tr) < kValidationTol) throw EstimationFailure("hermitize_normalize: vanishing trace");
  return h / tr;
}

struct CollapseResult {
  PureState state;
  std::size_t skipped = 0;  // terms dropped for a near-zero reference element
  std::size_t reference_row = 0;
};

/// c_m = sum_n rho_mn rho_nn / rho_rn over terms with |rho_rn| >= 1e-8, then
/// normalized. Amplitudes are in the frame of `rho_e`.
inline CollapseResult collapse_to_pure(const ComplexMatrix &rho_e, ReferenceRowPolicy policy = {}) {
  const Eigen::Index d = rho_e.rows();
  if (d != rho_e.cols() || d < 1) throw std::invalid_argument("collapse_to_pure: not square");
  std::size_t r = policy.index;
  if (policy.kind == ReferenceRowPolicy::Kind::kArgmaxDiagonal) {
    Eigen::Index best = 0;
    rho_e.diagonal().real().maxCoeff(&best);
    r = static_cast<std::size_t>(best);
  } else if (r >= static_cast<std::size_t>(d)) {
    throw std::invalid_argument("collapse_to_pure: reference row out of range");
  }
  const auto ri = static_cast<Eigen::Index>(r);
  ComplexVector c = ComplexVector::Zero(d);
  std::size_t skipped = 0;
  for (Eigen::Index n = 0; n < d; ++n) {
    const cd ref = rho_e(ri, n);
    if (std::abs(ref) < kReferenceSkip) {
      ++skipped;
      continue;
    }
    c += rho_e.col(n) * (rho_e(n, n) / ref);
  }
  if (skipped == static_cast<std::size_t>(d)) throw EstimationFailure("collapse_to_pure: every reference term vanished");
  const double norm = c.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw EstimationFailure("collapse_to_pure: zero amplitude vector");
  return {PureState(c / norm), skipped, r};
}

/// Pure-state reconstruction from the single projector |probe><probe|:
/// amplitude on post[j] is conj(pw[j] / <post_j|probe>), then normalized.
template <SampleSource Source>
PureState revised_dst(Source &source, const PureState &probe, const OrthonormalBasis &post, CouplingStrength g,
                      std::uint64_t budget) {
  const std::size_t d = post.dim();
  if (source.dim() != d || probe.dim() != d) throw std::invalid_argument("revised_dst: dimension mismatch");
  if (budget < 2) throw std::invalid_argument("revised_dst: budget must be at least 2 copies");
  const ComplexVector post_probe = post.columns().adjoint() * probe.amplitudes();  // <psi_j|a>
  for (Eigen::Index j = 0; j < post_probe.size(); ++j) {
    if (std::abs(post_probe(j)) < kProbeOverlapMin) {
      throw std::invalid_argument("revised_dst: invalid probe, <psi_" + std::to_string(j) + "|a> vanishes");
    }
  }
  const WeakValueTable t = source.measure(probe, g, post, budget / 2);
  ComplexVector coeffs(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) coeffs(j) = std::conj(t.pw[static_cast<std::size_t>(j)] / post_probe(j));
  const ComplexVector amplitudes = post.columns() * coeffs;
  const double norm = amplitudes.norm();
  if (!(norm > 1e-12) || !std::isfinite(norm)) {
    throw EstimationFailure("revised_dst: reconstruction norm vanishes (probe orthogonal to the state)");
  }
  return PureState(amplitudes / norm);
}

struct HybridConfig {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  double g1 = 1.2;
  double g2 = 0.4;
  double weight_e1 = 1.0;  // calibrated MSE of step 1
  double weight_e2 = 1.0;  // calibrated MSE of step 2
  ReferenceRowPolicy reference{};

  void validate() const {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("HybridConfig: budgets must be positive");
    if (!(weight_e1 > 0.0) || !(weight_e2 > 0.0)) throw std::invalid_argument("HybridConfig: weights must be positive");
    CouplingStrength{g1};
    CouplingStrength{g2};
  }
};

struct HybridResult {
  PureState coarse;    // step-1 pure estimate
  PureState revised;   // step-2 estimate, phase-aligned to `coarse`
  PureState combined;  // final estimate
  bool fallback = false;
};

template <SampleSource Source>
HybridResult hybrid_dst(Source &source, const HybridConfig &config, const MubPair &mub) {
  config.validate();
  const ComplexMatrix rho_e = hermitize_normalize(original_dst(source, mub, CouplingStrength{config.g1}, config.n1));
  const CollapseResult collapsed = collapse_to_pure(rho_e, config.reference);
  // Step-1 amplitudes are in the basis_a frame; map to computational coordinates.
  const PureState coarse = PureState::normalized(mub.basis_a.columns() * collapsed.state.amplitudes());

  const OrthonormalBasis frame = gram_schmidt_extend(coarse);
  const PureState probe = probe_state(frame);
  const PureState revised = revised_dst(source, probe, frame, CouplingStrength{config.g2}, config.n2);

  const cd overlap = revised.overlap(coarse);
  if (std::abs(overlap) < kAlignmentMin) {
    const PureState &better = config.weight_e1 <= config.weight_e2 ? coarse : revised;
    return {coarse, revised, better, true};
  }
  const PureState aligned(revised.amplitudes() * (overlap / std::abs(overlap)));
  const ComplexVector mix = coarse.amplitudes() / config.weight_e1 + aligned.amplitudes() / config.weight_e2;
  return {coarse, aligned, PureState::normalized(mix), false};
}

/// Mean squared error of one hybrid step over Haar-random pure states. The
/// revised step uses the ideal probe built from the true state's Gram-Schmidt frame.
inline CalibrationEntry calibrate(std::size_t dim, double g, std::uint64_t copies, EstimatorKind kind, std::uint64_t reps,
                                  const StreamKey &key, unsigned jobs = 1, ReferenceRowPolicy reference = {}) {
  if (reps < 100) throw std::invalid_argument("calibrate: at least 100 repetitions required");
  const CouplingStrength coupling{g};
  const MubPair mub = fourier_mub(dim);
  const StreamKey entry_key = key.child({dim, double_bits(g), copies, static_cast<std::uint64_t>(kind)});
  const std::vector<double> errors = parallel_map(reps, jobs, [&](std::size_t r) {
    const StreamKey rep_key = entry_key.child({static_cast<std::uint64_t>(r)});
    Engine state_rng = rep_key.child({0}).engine();
    const PureState truth = haar_random_pure(dim, state_rng);
    MonteCarloSource source(DensityMatrix::from_pure(truth), rep_key.child({1}));
    if (kind == EstimatorKind::kOriginal) {
      const ComplexMatrix rho_e = hermitize_normalize(original_dst(source, mub, coupling, copies));
      const PureState est = PureState::normalized(mub.basis_a.columns() * collapse_to_pure(rho_e, reference).state.amplitudes());
      return mse_exact(est, truth);
    }
    const OrthonormalBasis frame = gram_schmidt_extend(truth);
    return mse_exact(revised_dst(source, probe_state(frame), frame, coupling, copies), truth);
  });
  const MseReport rep = aggregate(errors, copies);
  return CalibrationEntry{dim, g, copies, kind, rep.mean, rep.stderr_, reps};
}

}  // namespace wvdst

#endif  // WVDST_DST_HPP
