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

// Measurement and postselection bases.

#ifndef WVDST_BASES_HPP
#define WVDST_BASES_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wvdst/errors.hpp"
#include "wvdst/qmath.hpp"

namespace wvdst {

inline constexpr double kBasisTol = 1e-10;

class OrthonormalBasis {
 public:
  /// Throws std::invalid_argument unless the vectors form an orthonormal
  /// basis (Gram matrix equals identity within 1e-10).
  explicit OrthonormalBasis(std::vector<PureState> vectors) : vectors_(std::move(vectors)) {
    const std::size_t d = vectors_.size();
    if (d == 0) throw std::invalid_argument("OrthonormalBasis: empty");
    columns_.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) {
      if (vectors_[k].dim() != d) throw std::invalid_argument("OrthonormalBasis: vector count != dimension");
      columns_.col(static_cast<Eigen::Index>(k)) = vectors_[k].amplitudes();
    }
    const ComplexMatrix gram = columns_.adjoint() * columns_;
    const auto n = static_cast<Eigen::Index>(d);
    if ((gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kBasisTol) {
      throw std::invalid_argument("OrthonormalBasis: vectors not orthonormal");
    }
  }

  static OrthonormalBasis computational(std::size_t dim) {
    std::vector<PureState> v;
    v.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) v.push_back(PureState::basis(dim, k));
    return OrthonormalBasis(std::move(v));
  }

  std::size_t dim() const { return vectors_.size(); }
  const PureState &operator[](std::size_t k) const { return vectors_[k]; }
  const std::vector<PureState> &vectors() const { return vectors_; }
  /// Basis vectors as matrix columns.
  const ComplexMatrix &columns() const { return columns_; }

 private:
  std::vector<PureState> vectors_;
  ComplexMatrix columns_;
};

/// A pair of mutually unbiased bases: |<psi_j|a_n>| = 1/sqrt(d) for all n, j.
struct MubPair {
  OrthonormalBasis basis_a;
  OrthonormalBasis basis_psi;

  MubPair(OrthonormalBasis a, OrthonormalBasis psi) : basis_a(std::move(a)), basis_psi(std::move(psi)) {
    if (basis_a.dim() != basis_psi.dim()) throw std::invalid_argument("MubPair: dimension mismatch");
    const ComplexMatrix overlaps = basis_psi.columns().adjoint() * basis_a.columns();
    const double target = 1.0 / std::sqrt(static_cast<double>(basis_a.dim()));
    if ((overlaps.cwiseAbs().array() - target).abs().maxCoeff() > kBasisTol) {
      throw std::invalid_argument("MubPair: bases are not mutually unbiased");
    }
  }

  std::size_t dim() const { return basis_a.dim(); }
};

inline ComplexVector unit_phase_vector(std::size_t dim, const std::vector<long long> &exponents, long long modulus) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t n = 0; n < dim; ++n) {
    const long long e = ((exponents[n] % modulus) + modulus) % modulus;
    v(static_cast<Eigen::Index>(n)) = std::polar(norm, 2.0 * kPi * static_cast<double>(e) / static_cast<double>(modulus));
  }
  return v;
}

/// Computational basis {|a_n>} paired with the Fourier basis
/// <psi_j|a_n> = exp(2 pi i j n / d) / sqrt(d).
inline MubPair fourier_mub(std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("fourier_mub: dim must be >= 2");
  const auto d = static_cast<long long>(dim);
  std::vector<PureState> psi;
  psi.reserve(dim);
  for (long long j = 0; j < d; ++j) {
    std::vector<long long> e(dim);
    for (long long n = 0; n < d; ++n) e[static_cast<std::size_t>(n)] = -j * n;  // <a_n|psi_j> is the conjugate phase
    psi.emplace_back(unit_phase_vector(dim, e, d));
  }
  return MubPair(OrthonormalBasis::computational(dim), OrthonormalBasis(std::move(psi)));
}

/// Orthonormal basis whose first element is exactly `v`. The remaining
/// directions are seeded from computational basis vectors in order; a
/// candidate whose residual after projection is below 1e-8 is skipped.
inline OrthonormalBasis gram_schmidt_extend(const PureState &v) {
  const std::size_t d = v.dim();
  std::vector<PureState> out;
  out.reserve(d);
  out.push_back(v);
  for (std::size_t k = 0; k < d && out.size() < d; ++k) {
    ComplexVector w = ComplexVector::Zero(static_cast<Eigen::Index>(d));
    w(static_cast<Eigen::Index>(k)) = 1.0;
    // Two projection passes keep the Gram matrix at roundoff level.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto &u : out) w -= u.amplitudes() * u.amplitudes().dot(w);
    }
    const double r = w.norm();
    if (r < 1e-8) continue;
    out.emplace_back(w / r);
  }
  if (out.size() != d) throw EstimationFailure("gram_schmidt_extend: could not complete basis");
  return OrthonormalBasis(std::move(out));
}

/// Uniform superposition of the basis vectors; |<b_i|a>|^2 = 1/d for every element.
inline PureState probe_state(const OrthonormalBasis &basis) {
  const ComplexVector sum = basis.columns().rowwise().sum();
  return PureState::normalized(sum);
}

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

/// d + 1 pairwise mutually unbiased bases for prime d: the computational
/// basis plus d bases with quadratic phases w^(k n^2 + j n). For d = 2 the
/// set is the eigenbases of sigma_z, sigma_x and sigma_y.
inline std::vector<OrthonormalBasis> complete_mub_set(std::size_t dim) {
  if (!is_prime(dim)) {
    throw UnsupportedDimension("complete_mub_set: dimension " + std::to_string(dim) + " is not prime");
  }
  std::vector<OrthonormalBasis> sets;
  sets.reserve(dim + 1);
  sets.push_back(OrthonormalBasis::computational(dim));
  const auto d = static_cast<long long>(dim);
  if (dim == 2) {
    // phases in units of 2 pi / 4: x basis (0, 2), y basis (1, 3)
    for (long long k = 0; k < 2; ++k) {
      std::vector<PureState> vs;
      for (long long j = 0; j < 2; ++j) vs.emplace_back(unit_phase_vector(2, {0, k + 2 * j}, 4));
      sets.emplace_back(std::move(vs));
    }
    return sets;
  }
  for (long long k = 0; k < d; ++k) {
    std::vector<PureState> vs;
    vs.reserve(dim);
    for (long long j = 0; j < d; ++j) {
      std::vector<long long> e(dim);
      for (long long n = 0; n < d; ++n) e[static_cast<std::size_t>(n)] = (k * n % d) * n + j * n;
      vs.emplace_back(unit_phase_vector(dim, e, d));
    }
    sets.emplace_back(std::move(vs));
  }
  return sets;
}

}  // namespace wvdst

#endif  // WVDST_BASES_HPP
