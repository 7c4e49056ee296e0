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

#include "wvdst/dst.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"

#include "wvdst/harness.hpp"

using namespace wvdst;

namespace {

DensityMatrix random_mixed(std::size_t d, Engine &rng) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  std::uniform_real_distribution<double> w(0.1, 1.0);
  for (int k = 0; k < 3; ++k) m += w(rng) * haar_random_pure(d, rng).projector();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(m / m.trace().real());
}

double slope(const std::vector<double> &x, const std::vector<double> &y) {
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    num += (x[k] - mx) * (y[k] - my);
    den += (x[k] - mx) * (x[k] - mx);
  }
  return num / den;
}

}  // namespace

TEST(dst, original_exact_at_zero_noise) {
  Engine rng = StreamKey(1).engine();
  for (double g : {0.3, 1.2, 2.0}) {
    for (std::size_t d = 2; d <= 6; ++d) {
      const DensityMatrix rho = random_mixed(d, rng);
      ExactSource src(rho);
      const RawRowEstimate est = original_dst(src, fourier_mub(d), CouplingStrength(g), 2 * d);
      EXPECT_LT((est - rho.matrix()).cwiseAbs().maxCoeff(), 1e-10) << "d=" << d << " g=" << g;
    }
  }
}

TEST(dst, original_projector_state_rows) {
  ExactSource src(DensityMatrix::from_pure(PureState::basis(3, 0)));
  const RawRowEstimate est = original_dst(src, fourier_mub(3), CouplingStrength(1.2), 6);
  ComplexMatrix expect = ComplexMatrix::Zero(3, 3);
  expect(0, 0) = 1.0;
  EXPECT_LT((est - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(dst, original_budget_too_small) {
  ExactSource src(DensityMatrix::maximally_mixed(3));
  EXPECT_THROW(original_dst(src, fourier_mub(3), CouplingStrength(1.0), 5), std::invalid_argument);
}

TEST(dst, original_error_scales_inverse_in_budget) {
  const MubPair mub = fourier_mub(2);
  std::vector<double> lx, ly;
  for (std::uint64_t n : {1000u, 10000u, 100000u}) {
    double acc = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      const StreamKey key = StreamKey(3).child({n, static_cast<std::uint64_t>(r)});
      Engine rng = key.child({0}).engine();
      const DensityMatrix rho = DensityMatrix::from_pure(haar_random_pure(2, rng));
      MonteCarloSource src(rho, key.child({1}));
      acc += mse_exact(hermitize_normalize(original_dst(src, mub, CouplingStrength(1.2), n)), rho);
    }
    lx.push_back(std::log(double(n)));
    ly.push_back(std::log(acc / reps));
  }
  EXPECT_NEAR(slope(lx, ly), -1.0, 0.15);
}

TEST(dst, hermitize_examples) {
  ComplexMatrix valid(2, 2);
  valid << 0.7, cd(0.1, 0.2), cd(0.1, -0.2), 0.3;
  EXPECT_LT((hermitize_normalize(valid) - valid).cwiseAbs().maxCoeff(), 1e-14);

  ComplexMatrix raw(2, 2);
  raw << 1.0, 1.0, 0.0, 1.0;
  ComplexMatrix expect(2, 2);
  expect << 0.5, 0.25, 0.25, 0.5;
  EXPECT_LT((hermitize_normalize(raw) - expect).cwiseAbs().maxCoeff(), 1e-15);

  Engine rng = StreamKey(4).engine();
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix m(3, 3);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = cd(n(rng), n(rng));
    m.diagonal().array() += cd(3.0, 0.0);
    const ComplexMatrix h = hermitize_normalize(m);
    EXPECT_NEAR(h.trace().real(), 1.0, 1e-14);
    EXPECT_LT(hermiticity_residual(h), 1e-15);
  }

  ComplexMatrix traceless(2, 2);
  traceless << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(hermitize_normalize(traceless), EstimationFailure);
}

TEST(dst, collapse_pure_projector_is_exact) {
  Engine rng = StreamKey(5).engine();
  for (std::size_t d = 2; d <= 8; ++d) {
    const PureState phi = haar_random_pure(d, rng);
    for (auto policy : {ReferenceRowPolicy::argmax_diagonal(), ReferenceRowPolicy::fixed(0)}) {
      const CollapseResult c = collapse_to_pure(phi.projector(), policy);
      EXPECT_NEAR(fidelity(c.state, phi), 1.0, 1e-10);
      EXPECT_EQ(c.skipped, 0u);
    }
  }
}

TEST(dst, collapse_maximally_mixed_keeps_reference_direction) {
  // Off-diagonal reference terms vanish, so only the diagonal term survives.
  const CollapseResult c = collapse_to_pure(ComplexMatrix::Identity(4, 4) / 4.0, ReferenceRowPolicy::fixed(2));
  EXPECT_EQ(c.skipped, 3u);
  EXPECT_NEAR(std::abs(c.state[2]), 1.0, 1e-15);
}

TEST(dst, collapse_reference_policies_on_degenerate_row) {
  // Row 0 of |phi><phi| vanishes when <a_0|phi> = 0.
  const PureState phi = PureState::normalized(Eigen::Vector3cd(0.0, 1.0, cd(0.0, 1.0)));
  EXPECT_THROW(collapse_to_pure(phi.projector(), ReferenceRowPolicy::fixed(0)), EstimationFailure);
  const CollapseResult c = collapse_to_pure(phi.projector(), ReferenceRowPolicy::argmax_diagonal());
  EXPECT_NE(c.reference_row, 0u);
  EXPECT_NEAR(fidelity(c.state, phi), 1.0, 1e-12);

  // A nearly degenerate row: fixed-index skips terms, argmax does not.
  const PureState psi = PureState::normalized(Eigen::Vector3cd(1e-5, 1.0, 1e-4));
  const CollapseResult fixed = collapse_to_pure(psi.projector(), ReferenceRowPolicy::fixed(0));
  EXPECT_EQ(fixed.skipped, 2u);
  const CollapseResult best = collapse_to_pure(psi.projector());
  EXPECT_EQ(best.reference_row, 1u);
  EXPECT_EQ(best.skipped, 0u);
  EXPECT_NEAR(fidelity(best.state, psi), 1.0, 1e-10);
}

TEST(dst, revised_exact_at_zero_noise) {
  Engine rng = StreamKey(6).engine();
  for (double g : {0.3, 0.8, 1.2, 2.0}) {
    for (std::size_t d = 2; d <= 8; ++d) {
      const PureState phi = haar_random_pure(d, rng);
      const MubPair mub = fourier_mub(d);
      ExactSource src(DensityMatrix::from_pure(phi));
      const PureState est = revised_dst(src, mub.basis_a[0], mub.basis_psi, CouplingStrength(g), 2);
      EXPECT_NEAR(fidelity(est, phi), 1.0, 1e-10);
    }
  }
}

TEST(dst, revised_flags_orthogonal_probe_state) {
  const MubPair mub = fourier_mub(2);
  ExactSource src(DensityMatrix::from_pure(PureState::basis(2, 1)));
  EXPECT_THROW(revised_dst(src, mub.basis_a[0], mub.basis_psi, CouplingStrength(1.2), 100), EstimationFailure);
}

TEST(dst, revised_rejects_invalid_probe) {
  ExactSource src(DensityMatrix::maximally_mixed(2));
  EXPECT_THROW(revised_dst(src, PureState::basis(2, 0), OrthonormalBasis::computational(2), CouplingStrength(1.0), 100),
               std::invalid_argument);
  EXPECT_THROW(revised_dst(src, probe_state(OrthonormalBasis::computational(2)), OrthonormalBasis::computational(2),
                           CouplingStrength(1.0), 1),
               std::invalid_argument);
}

TEST(dst, hybrid_exact_at_zero_noise) {
  Engine rng = StreamKey(7).engine();
  for (std::size_t d = 2; d <= 8; ++d) {
    const PureState phi = haar_random_pure(d, rng);
    HybridConfig h;
    h.n1 = 2 * d;
    h.n2 = 2;
    h.weight_e1 = 0.3;
    h.weight_e2 = 0.01;
    ExactSource src(DensityMatrix::from_pure(phi));
    const HybridResult r = hybrid_dst(src, h, fourier_mub(d));
    EXPECT_NEAR(fidelity(r.combined, phi), 1.0, 1e-10);
    EXPECT_FALSE(r.fallback);
    EXPECT_NEAR(r.combined.amplitudes().squaredNorm(), 1.0, 1e-12);
  }
}

TEST(dst, hybrid_dominant_weight_follows_coarse_estimate) {
  Engine rng = StreamKey(8).engine();
  const PureState phi = haar_random_pure(3, rng);
  HybridConfig h;
  h.n1 = 600;
  h.n2 = 600;
  h.weight_e1 = 1e-4;
  h.weight_e2 = 1.0;
  MonteCarloSource src(DensityMatrix::from_pure(phi), StreamKey(9));
  const HybridResult r = hybrid_dst(src, h, fourier_mub(3));
  EXPECT_GT(fidelity(r.combined, r.coarse), 0.999);
}

TEST(dst, hybrid_config_validation) {
  HybridConfig h;
  h.n1 = 0;
  h.n2 = 10;
  EXPECT_THROW(h.validate(), std::invalid_argument);
  h.n1 = 10;
  h.weight_e2 = 0.0;
  EXPECT_THROW(h.validate(), std::invalid_argument);
  h.weight_e2 = 1.0;
  h.g2 = 4.0;
  EXPECT_THROW(h.validate(), std::invalid_argument);
}

TEST(dst, hybrid_invariant_under_global_phase) {
  Engine rng = StreamKey(10).engine();
  const PureState phi = haar_random_pure(4, rng);
  const PureState rotated(phi.amplitudes() * std::polar(1.0, 0.7));
  HybridConfig h;
  h.n1 = 4000;
  h.n2 = 16000;
  h.g2 = 0.6;
  h.weight_e1 = 0.02;
  h.weight_e2 = 0.001;
  MonteCarloSource a(DensityMatrix::from_pure(phi), StreamKey(11));
  MonteCarloSource b(DensityMatrix::from_pure(rotated), StreamKey(11));
  const double ma = mse_exact(hybrid_dst(a, h, fourier_mub(4)).combined, phi);
  const double mb = mse_exact(hybrid_dst(b, h, fourier_mub(4)).combined, rotated);
  EXPECT_NEAR(ma, mb, 1e-9);
}

TEST(dst, calibrate_decreases_with_budget) {
  for (EstimatorKind kind : {EstimatorKind::kOriginal, EstimatorKind::kRevised}) {
    double prev = INFINITY, prev_se = 0.0;
    for (std::uint64_t n : {1000u, 10000u, 100000u}) {
      const CalibrationEntry e = calibrate(2, 1.2, n, kind, 200, StreamKey(12));
      EXPECT_GT(e.mse, 0.0);
      EXPECT_LT(e.mse, prev + 2.0 * std::hypot(e.stderr_, prev_se));
      prev = e.mse;
      prev_se = e.stderr_;
    }
  }
}

TEST(dst, calibrate_stderr_shrinks_with_reps) {
  const CalibrationEntry a = calibrate(3, 0.6, 3000, EstimatorKind::kRevised, 1000, StreamKey(13));
  const CalibrationEntry b = calibrate(3, 0.6, 3000, EstimatorKind::kRevised, 2000, StreamKey(13));
  const double ratio = a.stderr_ / b.stderr_;
  EXPECT_GT(ratio, 1.2);
  EXPECT_LT(ratio, 1.7);
  EXPECT_THROW(calibrate(2, 1.2, 100, EstimatorKind::kRevised, 99, StreamKey(1)), std::invalid_argument);
}

TEST(dst, calibrated_revised_error_matches_equal_overlap_sweep_point) {
  // At theta = pi/2 the sweep state is a postselection vector and the probe |0>
  // has overlap 1/d with every vector: the same geometry as the ideal probe.
  const CalibrationEntry e = calibrate(2, 1.2, 100, EstimatorKind::kRevised, 10000, StreamKey(14));
  ExperimentConfig ec;
  ec.experiment = Experiment::kFig1;
  ec.theta_grid = {kPi / 2};
  ec.reps = 10000;
  ec.seed = 15;
  const auto sweep = run_fig1(resolve(ec));
  EXPECT_LT(std::abs(sweep[0].mse.mean - e.mse), 3.0 * std::hypot(sweep[0].mse.stderr_, e.stderr_));
}

TEST(dst, hybrid_error_non_increasing_in_budget) {
  const double theta = 0.7 * kPi;
  double prev = INFINITY, prev_se = 0.0;
  for (std::uint64_t n : {1000u, 10000u, 100000u}) {
    const std::uint64_t n1 = n / 5, n2 = n - n1;
    CalibrationTable cal;
    cal.insert(calibrate(2, 1.2, n1, EstimatorKind::kOriginal, 200, StreamKey(16)));
    cal.insert(calibrate(2, 0.4, n2, EstimatorKind::kRevised, 200, StreamKey(16)));
    const HybridConfig h = hybrid_config(2, n1, n2, 1.2, 0.4, cal);
    std::vector<double> errs;
    for (std::uint64_t r = 0; r < 300; ++r) {
      errs.push_back(hybrid_trial(theta_state(theta), h, fourier_mub(2), StreamKey(17).child({n, r})));
    }
    const MseReport rep = aggregate(errs, n);
    EXPECT_LT(rep.mean, prev + 2.0 * std::hypot(rep.stderr_, prev_se)) << n;
    prev = rep.mean;
    prev_se = rep.stderr_;
  }
}
