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

// Exact system-pointer physics for a qubit pointer prepared in |0><0| and an
// impulsive coupling exp(-i g |a><a| (x) sigma_x). Pointer index is the fast
// (least significant) index of the joint (2d)-dimensional space.

#ifndef WVDST_COUPLING_HPP
#define WVDST_COUPLING_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "wvdst/errors.hpp"
#include "wvdst/qmath.hpp"

namespace wvdst {

inline constexpr double kProbabilityCutoff = 1e-14;

class CouplingStrength {
 public:
  /// Throws std::invalid_argument unless 0 < g < pi.
  explicit CouplingStrength(double g) : g_(g) {
    if (!(g > 0.0 && g < kPi)) {
      throw std::invalid_argument("CouplingStrength: g must lie in (0, pi), got " + std::to_string(g));
    }
  }
  double value() const { return g_; }

 private:
  double g_;
};

/// Closed-form U = I (x) I + |a><a| (x) (cos g I - i sin g sigma_x - I).
inline ComplexMatrix interaction_unitary(const PureState &a, CouplingStrength g) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  const double gv = g.value();
  const ComplexMatrix kick = std::cos(gv) * ComplexMatrix::Identity(2, 2) - kI * std::sin(gv) * pauli_x() -
                             ComplexMatrix::Identity(2, 2);
  return ComplexMatrix::Identity(2 * d, 2 * d) + Eigen::kroneckerProduct(a.projector(), kick).eval();
}

struct PostselectedPointer {
  double probability = 0.0;
  std::optional<DensityMatrix> pointer;  // empty when probability < 1e-14

  bool defined() const { return pointer.has_value(); }
};

inline PostselectedPointer pointer_from_block(const ComplexMatrix &block) {
  PostselectedPointer out;
  out.probability = block.trace().real();
  if (out.probability < kProbabilityCutoff) return out;
  const ComplexMatrix herm = 0.5 * (block + block.adjoint());
  out.pointer.emplace(herm / herm.trace().real());
  return out;
}

/// Unnormalized pointer block <psi| U (rho (x) |0><0|) U^dag |psi> built from
/// the full (2d)x(2d) unitary.
inline ComplexMatrix postselected_block_dense(const DensityMatrix &rho_s, const PureState &a, CouplingStrength g,
                                              const PureState &psi) {
  const auto d = static_cast<Eigen::Index>(rho_s.dim());
  if (a.dim() != rho_s.dim() || psi.dim() != rho_s.dim()) throw std::invalid_argument("postselected_pointer: dim mismatch");
  ComplexMatrix pointer0 = ComplexMatrix::Zero(2, 2);
  pointer0(0, 0) = 1.0;
  const ComplexMatrix u = interaction_unitary(a, g);
  const ComplexMatrix joint = u * Eigen::kroneckerProduct(rho_s.matrix(), pointer0).eval() * u.adjoint();
  ComplexMatrix post = ComplexMatrix::Zero(2 * d, 2);
  for (Eigen::Index x = 0; x < d; ++x) {
    post(2 * x, 0) = psi.amplitudes()(x);
    post(2 * x + 1, 1) = psi.amplitudes()(x);
  }
  return post.adjoint() * joint * post;
}

/// Same block in closed form: with b = <psi|a>, kick k = (cos g - 1)|0> - i sin g |1>,
/// M = <psi|rho|psi> |0><0| + b<a|rho|psi> k<0| + h.c. + |b|^2 <a|rho|a> k k^dag.
inline ComplexMatrix postselected_block(const ComplexMatrix &rho, const ComplexVector &rho_a, cd a_rho_a,
                                        const ComplexVector &a, const ComplexVector &psi, double g) {
  const cd q = psi.dot(rho * psi);
  const cd b = psi.dot(a);
  const cd beta = b * rho_a.dot(psi);  // b <a|rho|psi>, rho Hermitian
  ComplexVector k(2), e0(2);
  k << std::cos(g) - 1.0, -kI * std::sin(g);
  e0 << 1.0, 0.0;
  return q * e0 * e0.adjoint() + beta * k * e0.adjoint() + std::conj(beta) * e0 * k.adjoint() +
         std::norm(b) * a_rho_a * k * k.adjoint();
}

/// Pointer state conditioned on postselecting |psi> (initial pointer |0><0|).
inline PostselectedPointer postselected_pointer(const DensityMatrix &rho_s, const PureState &a, CouplingStrength g,
                                                const PureState &psi) {
  return pointer_from_block(postselected_block_dense(rho_s, a, g, psi));
}

/// sigma_y'(g) = (g / sin g) [sigma_y - tan(g/2) (I - sigma_z)]
inline ComplexMatrix deformed_sigma_y(CouplingStrength g) {
  const double gv = g.value();
  return (gv / std::sin(gv)) * (pauli_y() - std::tan(0.5 * gv) * (ComplexMatrix::Identity(2, 2) - pauli_z()));
}

/// sigma_x'(g) = (g / sin g) sigma_x
inline ComplexMatrix deformed_sigma_x(CouplingStrength g) {
  const double gv = g.value();
  return (gv / std::sin(gv)) * pauli_x();
}

/// (1/2g) [-tr(m sigma_y') + i tr(m sigma_x')]. Applied to an unnormalized
/// block this yields P_j W_j; applied to the normalized pointer, W_j.
inline cd deformed_readout(const ComplexMatrix &m, CouplingStrength g) {
  const cd ty = (m * deformed_sigma_y(g)).trace();
  const cd tx = (m * deformed_sigma_x(g)).trace();
  return (-ty.real() + kI * tx.real()) / (2.0 * g.value());
}

inline const DensityMatrix &require_defined(const PostselectedPointer &p) {
  if (!p.defined()) throw UndefinedPointer("postselection probability below cutoff; pointer undefined");
  return *p.pointer;
}

/// Weak value from the exact pointer through the coupling-deformed observables.
/// The readout of the normalized pointer carries the kicked postselection rate
/// tr(block); it is rescaled to the undisturbed <psi|rho|psi>, which the 2x2
/// pointer determines: <psi|rho|psi> / tr(block) = 1 + 2(1 - cos g) Re R - 2 rho_11 / (1 + cos g).
inline cd exact_weak_value(const PostselectedPointer &pointer, CouplingStrength g) {
  const ComplexMatrix &m = require_defined(pointer).matrix();
  const cd readout = deformed_readout(m, g);
  const double c = std::cos(g.value());
  const double ratio = 1.0 + 2.0 * (1.0 - c) * readout.real() - 2.0 * m(1, 1).real() / (1.0 + c);
  if (!(ratio > kProbabilityCutoff)) throw UndefinedPointer("exact_weak_value: vanishing undisturbed postselection probability");
  return readout / ratio;
}

/// W = <psi|a><a|rho|psi> / <psi|rho|psi>, evaluated directly.
inline cd weak_value_oracle(const DensityMatrix &rho_s, const PureState &a, const PureState &psi) {
  const ComplexVector rho_psi = rho_s.matrix() * psi.amplitudes();
  const double p = psi.amplitudes().dot(rho_psi).real();
  if (p <= kProbabilityCutoff) throw UndefinedPointer("weak_value_oracle: vanishing postselection probability");
  return psi.overlap(a) * a.amplitudes().dot(rho_psi) / p;
}

/// First-order estimate with undeformed Paulis; biased at O(g).
inline cd approx_weak_value(const PostselectedPointer &pointer, CouplingStrength g) {
  const ComplexMatrix &m = require_defined(pointer).matrix();
  const cd ty = (m * pauli_y()).trace();
  const cd tx = (m * pauli_x()).trace();
  return (-ty.real() + kI * tx.real()) / (2.0 * g.value());
}

}  // namespace wvdst

#endif  // WVDST_COUPLING_HPP
