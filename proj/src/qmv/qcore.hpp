// Copyright 2026 The qmlverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact single-qubit numerics: pure states, density matrices, Bloch
// geometry, the three mutually unbiased measurement bases, Born-rule
// sampling, linear-inversion tomography and state distances.
//
// Everything here is a 2x2 closed form. Values are immutable; the only
// mutation is the caller-owned RandomStream passed to sample_outcome.

#pragma once

#include <array>
#include <complex>
#include <span>
#include <string_view>

#include "qmv/random.hpp"

namespace qmv::qcore {

using Complex = std::complex<double>;

inline constexpr double kInvariantTol = 1e-9;
inline constexpr double kExactTol = 1e-12;

/// Normalized single-qubit state alpha|0> + beta|1>.
class PureQubit {
 public:
  /// Validates |alpha|^2 + |beta|^2 = 1 within 1e-9 and finiteness.
  PureQubit(Complex alpha, Complex beta);

  /// Normalizes an arbitrary nonzero vector.
  static PureQubit normalized(Complex alpha, Complex beta);

  static PureQubit zero() { return PureQubit(1.0, 0.0); }
  static PureQubit one() { return PureQubit(0.0, 1.0); }
  static PureQubit plus();
  static PureQubit minus();
  static PureQubit plus_i();
  static PureQubit minus_i();

  Complex alpha() const noexcept { return alpha_; }
  Complex beta() const noexcept { return beta_; }

 private:
  struct Unchecked {};
  PureQubit(Complex alpha, Complex beta, Unchecked) : alpha_(alpha), beta_(beta) {}

  Complex alpha_;
  Complex beta_;
};

/// Bloch vector (rx, ry, rz) with |r| <= 1 + 1e-9.
struct BlochVector {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;

  double norm() const noexcept;
  double dot(const BlochVector& o) const noexcept { return rx * o.rx + ry * o.ry + rz * o.rz; }
};

/// 2x2 Hermitian, positive semidefinite, trace-one matrix.
class QubitDensity {
 public:
  /// Row-major entries. Validates Hermiticity, unit trace and PSD (1e-9).
  static QubitDensity from_entries(Complex m00, Complex m01, Complex m10, Complex m11);

  static QubitDensity pure(const PureQubit& psi);
  static QubitDensity maximally_mixed();

  /// w * a + (1 - w) * b, w in [0, 1].
  static QubitDensity mix(const QubitDensity& a, const QubitDensity& b, double w);

  /// Uniform average. Empty input is rejected.
  static QubitDensity average(std::span<const QubitDensity> items);

  Complex m00() const noexcept { return m_[0]; }
  Complex m01() const noexcept { return m_[1]; }
  Complex m10() const noexcept { return m_[2]; }
  Complex m11() const noexcept { return m_[3]; }
  const std::array<Complex, 4>& entries() const noexcept { return m_; }

  double trace() const noexcept { return m_[0].real() + m_[3].real(); }
  double det() const noexcept;
  double purity() const noexcept;

  /// Largest entrywise |difference|.
  double max_abs_diff(const QubitDensity& o) const noexcept;

  bool operator==(const QubitDensity&) const = default;

 private:
  explicit QubitDensity(const std::array<Complex, 4>& m) : m_(m) {}
  friend QubitDensity bloch_to_density(const BlochVector&);

  std::array<Complex, 4> m_;
};

enum class MeasBasis { Standard = 0, Hadamard = 1, Circular = 2 };

inline constexpr std::array<MeasBasis, 3> kAllBases = {MeasBasis::Standard, MeasBasis::Hadamard,
                                                       MeasBasis::Circular};

std::string_view to_string(MeasBasis b) noexcept;

/// Frequencies of the + outcome (|0>, |+>, |+i>) in each basis.
struct ProbTriple {
  double p0 = 0.5;
  double pPlus = 0.5;
  double pPlusI = 0.5;
};

/// 1/2 (I + r . sigma). Rejects non-finite components and |r| > 1 + 1e-9.
QubitDensity bloch_to_density(const BlochVector& r);

/// (tr(rho sx), tr(rho sy), tr(rho sz)).
BlochVector density_to_bloch(const QubitDensity& rho);

/// tr(rho P+) where P+ projects on |0>, |+> or |+i>. Clamped to [0, 1].
double born_probability(const QubitDensity& rho, MeasBasis basis);

/// Exact (p0, pPlus, pPlusI) for rho.
ProbTriple exact_probabilities(const QubitDensity& rho);

/// Destructive projective measurement: returns 0 with probability
/// born_probability(rho, basis), otherwise 1. Each call consumes one copy.
int sample_outcome(const QubitDensity& rho, MeasBasis basis, RandomStream& rng);

/// Linear-inversion tomography, r = (2 pPlus - 1, 2 pPlusI - 1, 2 p0 - 1).
/// Estimates with |r| > 1 are projected radially onto the unit sphere.
QubitDensity reconstruct_density(const ProbTriple& p);

/// Uhlmann fidelity via the qubit closed form
///   F = tr(A B) + 2 sqrt(det A det B),
/// clamped to [0, 1].
double fidelity(const QubitDensity& a, const QubitDensity& b);

/// arccos(sqrt(clamp(f, 0, 1))), in [0, pi/2].
double bures_angle(double f);

/// 1/2 tr|A - B|.
double trace_distance(const QubitDensity& a, const QubitDensity& b);

/// sqrt(tr(A^2) + tr(B^2) - 2 tr(A B)).
double hs_distance(const QubitDensity& a, const QubitDensity& b);

/// Re tr(A B).
double trace_product(const QubitDensity& a, const QubitDensity& b) noexcept;

/// |<a|b>|^2, clamped to [0, 1].
double overlap(const PureQubit& a, const PureQubit& b);

/// Haar-random pure state.
PureQubit haar_random_pure(RandomStream& rng);

/// Uniform random unit vector on the sphere.
BlochVector random_unit_axis(RandomStream& rng);

/// exp(-i angle/2 n.sigma) |psi>, n a unit axis.
PureQubit rotate(const PureQubit& psi, const BlochVector& axis, double angle);

}  // namespace qmv::qcore
