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

// Finite-statistics data: joint (postselection, pointer-eigenvalue) outcome
// distributions, seeded multinomial tallies, and the estimates of P_j W_j.

#ifndef WVDST_SAMPLER_HPP
#define WVDST_SAMPLER_HPP

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wvdst/bases.hpp"
#include "wvdst/coupling.hpp"
#include "wvdst/qmath.hpp"
#include "wvdst/rng.hpp"

namespace wvdst {

inline constexpr double kClampSlack = 1e-14;

/// p(j, s) stored at index 2 j + s; s = 0 pairs eigenvalues[0] (the larger).
struct JointDistribution {
  std::size_t dim = 0;
  std::vector<double> probabilities;
  std::array<double, 2> eigenvalues{};

  double operator()(std::size_t j, std::size_t s) const { return probabilities[2 * j + s]; }
};

struct OutcomeTally {
  std::size_t dim = 0;
  std::vector<std::uint64_t> counts;  // index 2 j + s
  std::uint64_t draws = 0;
};

/// Per-postselection-outcome estimates of P_j W_j.
struct WeakValueTable {
  std::vector<cd> pw;
  std::uint64_t copies_per_observable = 0;  // 0 marks exact (infinite-statistics) values
};

namespace detail {

inline JointDistribution joint_from_blocks(const std::vector<ComplexMatrix> &blocks, const ComplexMatrix &pointer_obs) {
  const Eigensystem2 eig = eig_hermitian_2x2(pointer_obs);
  JointDistribution out;
  out.dim = blocks.size();
  out.eigenvalues = eig.values;
  out.probabilities.resize(2 * blocks.size());
  double total = 0.0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    for (std::size_t s = 0; s < 2; ++s) {
      const ComplexVector &e = eig.vectors[s];
      double p = e.dot(blocks[j] * e).real();
      if (p < -kClampSlack) throw std::logic_error("joint_distribution: negative probability beyond roundoff");
      p = std::max(p, 0.0);
      out.probabilities[2 * j + s] = p;
      total += p;
    }
  }
  for (double &p : out.probabilities) p /= total;
  return out;
}

}  // namespace detail

/// Unnormalized postselected pointer blocks for every element of `post`.
inline std::vector<ComplexMatrix> pointer_blocks(const DensityMatrix &rho_s, const PureState &a, CouplingStrength g,
                                                 const OrthonormalBasis &post) {
  if (a.dim() != rho_s.dim() || post.dim() != rho_s.dim()) throw std::invalid_argument("pointer_blocks: dim mismatch");
  const ComplexMatrix &rho = rho_s.matrix();
  const ComplexVector rho_a = rho * a.amplitudes();
  const cd a_rho_a = a.amplitudes().dot(rho_a);
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(post.dim());
  for (std::size_t j = 0; j < post.dim(); ++j) {
    blocks.push_back(postselected_block(rho, rho_a, a_rho_a, a.amplitudes(), post[j].amplitudes(), g.value()));
  }
  return blocks;
}

/// Joint statistics of postselecting |psi_j> and reading the pointer in the
/// eigenbasis of `pointer_obs` (a 2x2 Hermitian observable).
inline JointDistribution joint_distribution(const DensityMatrix &rho_s, const PureState &a, CouplingStrength g,
                                            const OrthonormalBasis &post, const ComplexMatrix &pointer_obs) {
  return detail::joint_from_blocks(pointer_blocks(rho_s, a, g, post), pointer_obs);
}

/// M i.i.d. inverse-CDF draws over the 2d flattened outcomes.
inline OutcomeTally sample_tally(const JointDistribution &dist, std::uint64_t draws, Engine &rng) {
  OutcomeTally t{dist.dim, std::vector<std::uint64_t>(dist.probabilities.size(), 0), draws};
  if (draws == 0) return t;
  std::vector<double> cdf(dist.probabilities.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cdf.size(); ++k) {
    acc += dist.probabilities[k];
    cdf[k] = acc;
  }
  // Last outcome with nonzero mass absorbs the rounding gap at the top of the CDF.
  std::size_t last = cdf.size() - 1;
  while (last > 0 && dist.probabilities[last] == 0.0) --last;
  for (std::uint64_t m = 0; m < draws; ++m) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto k = static_cast<std::size_t>(it - cdf.begin());
    if (k > last) k = last;
    ++t.counts[k];
  }
  return t;
}

/// pw[j] = (1/2g) [-S_y(j) + i S_x(j)] with S_O(j) = sum_s lambda_s c(j, s) / M.
inline WeakValueTable estimate_pw(const OutcomeTally &tally_y, const OutcomeTally &tally_x,
                                  const std::array<double, 2> &eig_y, const std::array<double, 2> &eig_x,
                                  CouplingStrength g) {
  if (tally_y.draws == 0 || tally_x.draws == 0) throw std::invalid_argument("estimate_pw: empty tally");
  if (tally_y.dim != tally_x.dim) throw std::invalid_argument("estimate_pw: tally dimension mismatch");
  WeakValueTable out;
  out.copies_per_observable = tally_y.draws;
  out.pw.resize(tally_y.dim);
  const double my = static_cast<double>(tally_y.draws);
  const double mx = static_cast<double>(tally_x.draws);
  for (std::size_t j = 0; j < tally_y.dim; ++j) {
    const double sy = (eig_y[0] * static_cast<double>(tally_y.counts[2 * j]) +
                       eig_y[1] * static_cast<double>(tally_y.counts[2 * j + 1])) / my;
    const double sx = (eig_x[0] * static_cast<double>(tally_x.counts[2 * j]) +
                       eig_x[1] * static_cast<double>(tally_x.counts[2 * j + 1])) / mx;
    out.pw[j] = cd(-sy, sx) / (2.0 * g.value());
  }
  return out;
}

/// Infinite-statistics counterpart of estimate_pw: exact probabilities replace c/M.
inline WeakValueTable expected_pw(const JointDistribution &dist_y, const JointDistribution &dist_x, CouplingStrength g) {
  WeakValueTable out;
  out.pw.resize(dist_y.dim);
  for (std::size_t j = 0; j < dist_y.dim; ++j) {
    const double sy = dist_y.eigenvalues[0] * dist_y(j, 0) + dist_y.eigenvalues[1] * dist_y(j, 1);
    const double sx = dist_x.eigenvalues[0] * dist_x(j, 0) + dist_x.eigenvalues[1] * dist_x(j, 1);
    out.pw[j] = cd(-sy, sx) / (2.0 * g.value());
  }
  return out;
}

/// Anything that can run the two-pointer-observable measurement of |a><a|
/// followed by postselection in `post` and return the P_j W_j table.
template <class S>
concept SampleSource = requires(S &s, const PureState &a, CouplingStrength g, const OrthonormalBasis &post,
                                std::uint64_t copies) {
  { s.measure(a, g, post, copies) } -> std::same_as<WeakValueTable>;
  { s.dim() } -> std::convertible_to<std::size_t>;
};

/// Zero-noise source: exact outcome probabilities, copy counts ignored.
class ExactSource {
 public:
  explicit ExactSource(DensityMatrix rho_s) : rho_(std::move(rho_s)) {}

  WeakValueTable measure(const PureState &a, CouplingStrength g, const OrthonormalBasis &post, std::uint64_t) {
    const auto blocks = pointer_blocks(rho_, a, g, post);
    return expected_pw(detail::joint_from_blocks(blocks, deformed_sigma_y(g)),
                       detail::joint_from_blocks(blocks, deformed_sigma_x(g)), g);
  }

  std::size_t dim() const { return rho_.dim(); }
  const DensityMatrix &state() const { return rho_; }

 private:
  DensityMatrix rho_;
};

/// Monte Carlo source. Every call to `measure` consumes two observable
/// indices; observable k samples from stream key.child({k}).
class MonteCarloSource {
 public:
  MonteCarloSource(DensityMatrix rho_s, StreamKey key) : rho_(std::move(rho_s)), key_(key) {}

  WeakValueTable measure(const PureState &a, CouplingStrength g, const OrthonormalBasis &post, std::uint64_t copies) {
    const auto blocks = pointer_blocks(rho_, a, g, post);
    const JointDistribution dy = detail::joint_from_blocks(blocks, deformed_sigma_y(g));
    const JointDistribution dx = detail::joint_from_blocks(blocks, deformed_sigma_x(g));
    Engine ry = key_.child({next_observable_++}).engine();
    const OutcomeTally ty = sample_tally(dy, copies, ry);
    Engine rx = key_.child({next_observable_++}).engine();
    const OutcomeTally tx = sample_tally(dx, copies, rx);
    return estimate_pw(ty, tx, dy.eigenvalues, dx.eigenvalues, g);
  }

  std::size_t dim() const { return rho_.dim(); }
  const DensityMatrix &state() const { return rho_; }

 private:
  DensityMatrix rho_;
  StreamKey key_;
  std::uint64_t next_observable_ = 0;
};

}  // namespace wvdst

#endif  // WVDST_SAMPLER_HPP
