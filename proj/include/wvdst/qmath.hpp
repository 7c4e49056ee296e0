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

// Small dense complex linear algebra shared by every other module. Matrices
// are Eigen dynamic-size complex matrices; the value types below add the
// physical invariants (unit norm, Hermitian unit-trace PSD).

#ifndef WVDST_QMATH_HPP
#define WVDST_QMATH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace wvdst {

using cd = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kValidationTol = 1e-12;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cd kI{0.0, 1.0};

inline bool all_finite(const ComplexMatrix &m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

inline double hermiticity_residual(const ComplexMatrix &m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Unit-norm state vector.
class PureState {
 public:
  /// Throws std::invalid_argument unless `amplitudes` has unit norm within 1e-12.
  explicit PureState(ComplexVector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() < 1) throw std::invalid_argument("PureState: empty amplitude vector");
    if (!all_finite(amp_)) throw std::invalid_argument("PureState: non-finite amplitude");
    if (std::abs(amp_.squaredNorm() - 1.0) > kValidationTol) {
      throw std::invalid_argument("PureState: amplitudes not unit norm");
    }
  }

  /// Normalizes `v`; throws std::invalid_argument for a zero vector.
  static PureState normalized(const ComplexVector &v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("PureState: cannot normalize zero vector");
    return PureState(v / n);
  }

  static PureState basis(std::size_t dim, std::size_t k) {
    if (k >= dim) throw std::out_of_range("PureState::basis: index out of range");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return PureState(std::move(v));
  }

  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  const ComplexVector &amplitudes() const { return amp_; }
  cd operator[](std::size_t k) const { return amp_(static_cast<Eigen::Index>(k)); }

  /// <this|other>
  cd overlap(const PureState &other) const { return amp_.dot(other.amp_); }

  ComplexMatrix projector() const { return amp_ * amp_.adjoint(); }

 private:
  ComplexVector amp_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) throw std::invalid_argument("DensityMatrix: not square");
    if (!all_finite(m_)) throw std::invalid_argument("DensityMatrix: non-finite entry");
    if (hermiticity_residual(m_) > kValidationTol) throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - cd(1.0)) > kValidationTol) throw std::invalid_argument("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdSlack) throw std::invalid_argument("DensityMatrix: not PSD");
  }

  static DensityMatrix from_pure(const PureState &s) { return DensityMatrix(s.projector()); }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(dim));
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix &matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

inline ComplexMatrix dagger(const ComplexMatrix &m) { return m.adjoint(); }

/// Squared Hilbert-Schmidt (Frobenius) distance.
inline double frobenius_dist2(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frobenius_dist2: shape mismatch");
  }
  return (a - b).squaredNorm();
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

struct Eigensystem2 {
  std::array<double, 2> values;        // descending
  std::array<ComplexVector, 2> vectors;  // orthonormal, vectors[k] pairs values[k]
};

/// Closed-form spectral decomposition of a 2x2 Hermitian matrix.
inline Eigensystem2 eig_hermitian_2x2(const ComplexMatrix &h) {
  if (h.rows() != 2 || h.cols() != 2) throw std::invalid_argument("eig_hermitian_2x2: not 2x2");
  if (hermiticity_residual(h) > kValidationTol) throw std::invalid_argument("eig_hermitian_2x2: not Hermitian");
  const double a = h(0, 0).real();
  const double c = h(1, 1).real();
  const cd b = h(0, 1);
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), std::abs(b));
  Eigensystem2 out{{mean + radius, mean - radius}, {}};
  if (std::abs(b) == 0.0) {
    ComplexVector e0 = ComplexVector::Zero(2), e1 = ComplexVector::Zero(2);
    e0(0) = 1.0;
    e1(1) = 1.0;
    if (a >= c) {
      out.vectors = {e0, e1};
    } else {
      out.vectors = {e1, e0};
    }
    return out;
  }
  for (int k = 0; k < 2; ++k) {
    const double lambda = out.values[static_cast<std::size_t>(k)];
    // Two algebraically equivalent null vectors of (h - lambda); keep the longer.
    ComplexVector u(2), w(2);
    u << b, lambda - a;
    w << lambda - c, std::conj(b);
    ComplexVector &v = (u.squaredNorm() >= w.squaredNorm()) ? u : w;
    out.vectors[static_cast<std::size_t>(k)] = v / v.norm();
  }
  // Enforce exact orthogonality of the pair (first vector fixes the phase convention).
  const ComplexVector &v0 = out.vectors[0];
  ComplexVector v1(2);
  v1 << -std::conj(v0(1)), std::conj(v0(0));
  const cd phase = v1.dot(out.vectors[1]);
  out.vectors[1] = v1 * (std::abs(phase) > 0.0 ? phase / std::abs(phase) : cd(1.0));
  return out;
}

/// Haar-uniform pure state: normalized vector of i.i.d. standard complex Gaussians.
template <class Engine>
PureState haar_random_pure(std::size_t dim, Engine &rng) {
  if (dim < 2) throw std::invalid_argument("haar_random_pure: dim must be >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = cd(re, im);
  }
  return PureState::normalized(v);
}

/// |<a|b>|^2
inline double fidelity(const PureState &a, const PureState &b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dim mismatch");
  return std::norm(a.overlap(b));
}

}  // namespace wvdst

#endif  // WVDST_QMATH_HPP
