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

#include "qmv/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmv/errors.hpp"

namespace qmv::qcore {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

PureQubit::PureQubit(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
  if (!finite(alpha) || !finite(beta)) throw ValidationError("PureQubit: non-finite amplitude");
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(n2 - 1.0) > kInvariantTol) {
    throw ValidationError("PureQubit: state is not normalized (|a|^2+|b|^2 = " + std::to_string(n2) +
                          ")");
  }
}

PureQubit PureQubit::normalized(Complex alpha, Complex beta) {
  if (!finite(alpha) || !finite(beta)) throw ValidationError("PureQubit: non-finite amplitude");
  const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(n > 0.0)) throw ValidationError("PureQubit: cannot normalize the zero vector");
  return PureQubit(alpha / n, beta / n, Unchecked{});
}

PureQubit PureQubit::plus() { return PureQubit(kInvSqrt2, kInvSqrt2); }
PureQubit PureQubit::minus() { return PureQubit(kInvSqrt2, -kInvSqrt2); }
PureQubit PureQubit::plus_i() { return PureQubit(kInvSqrt2, Complex(0.0, kInvSqrt2)); }
PureQubit PureQubit::minus_i() { return PureQubit(kInvSqrt2, Complex(0.0, -kInvSqrt2)); }

double BlochVector::norm() const noexcept { return std::sqrt(rx * rx + ry * ry + rz * rz); }

QubitDensity QubitDensity::from_entries(Complex m00, Complex m01, Complex m10, Complex m11) {
  if (!finite(m00) || !finite(m01) || !finite(m10) || !finite(m11)) {
    throw ValidationError("QubitDensity: non-finite entry");
  }
  if (std::abs(m00.imag()) > kExactTol || std::abs(m11.imag()) > kExactTol) {
    throw ValidationError("QubitDensity: diagonal entries must be real");
  }
  if (std::abs(m10 - std::conj(m01)) > kInvariantTol) {
    throw ValidationError("QubitDensity: matrix is not Hermitian");
  }
  const double tr = m00.real() + m11.real();
  if (std::abs(tr - 1.0) > kInvariantTol) {
    throw ValidationError("QubitDensity: trace " + std::to_string(tr) + " != 1");
  }
  const double half_gap = 0.5 * (m00.real() - m11.real());
  const double min_eig = 0.5 * tr - std::sqrt(half_gap * half_gap + std::norm(m01));
  if (min_eig < -kInvariantTol) {
    throw ValidationError("QubitDensity: matrix is not positive semidefinite");
  }
  return QubitDensity({Complex(m00.real(), 0.0), m01, std::conj(m01), Complex(m11.real(), 0.0)});
}

QubitDensity QubitDensity::pure(const PureQubit& psi) {
  const Complex a = psi.alpha();
  const Complex b = psi.beta();
  const Complex off = a * std::conj(b);
  return QubitDensity({Complex(std::norm(a), 0.0), off, std::conj(off), Complex(std::norm(b), 0.0)});
}

QubitDensity QubitDensity::maximally_mixed() {
  return QubitDensity({Complex(0.5, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(0.5, 0.0)});
}

QubitDensity QubitDensity::mix(const QubitDensity& a, const QubitDensity& b, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("QubitDensity::mix: weight outside [0, 1]");
  std::array<Complex, 4> m;
  for (std::size_t k = 0; k < 4; ++k) m[k] = w * a.m_[k] + (1.0 - w) * b.m_[k];
  return QubitDensity(m);
}

QubitDensity QubitDensity::average(std::span<const QubitDensity> items) {
  if (items.empty()) throw ValidationError("QubitDensity::average: empty ensemble");
  std::array<Complex, 4> sum{};
  for (const auto& d : items) {
    for (std::size_t k = 0; k < 4; ++k) sum[k] += d.m_[k];
  }
  const double inv = 1.0 / static_cast<double>(items.size());
  for (auto& z : sum) z *= inv;
  return QubitDensity(sum);
}

double QubitDensity::det() const noexcept {
  return m_[0].real() * m_[3].real() - std::norm(m_[1]);
}

double QubitDensity::purity() const noexcept {
  const double a = m_[0].real();
  const double d = m_[3].real();
  return a * a + d * d + 2.0 * std::norm(m_[1]);
}

double QubitDensity::max_abs_diff(const QubitDensity& o) const noexcept {
  double worst = 0.0;
  for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(m_[k] - o.m_[k]));
  return worst;
}

std::string_view to_string(MeasBasis b) noexcept {
  switch (b) {
    case MeasBasis::Standard:
      return "standard";
    case MeasBasis::Hadamard:
      return "hadamard";
    case MeasBasis::Circular:
      return "circular";
  }
  return "?";
}

QubitDensity bloch_to_density(const BlochVector& r) {
  if (!std::isfinite(r.rx) || !std::isfinite(r.ry) || !std::isfinite(r.rz)) {
    throw ValidationError("bloch_to_density: non-finite component");
  }
  if (r.norm() > 1.0 + kInvariantTol) {
    throw ValidationError("bloch_to_density: |r| exceeds 1");
  }
  const Complex off(0.5 * r.rx, -0.5 * r.ry);
  return QubitDensity({Complex(0.5 * (1.0 + r.rz), 0.0), off, std::conj(off),
                       Complex(0.5 * (1.0 - r.rz), 0.0)});
}

BlochVector density_to_bloch(const QubitDensity& rho) {
  const Complex m10 = rho.m10();
  return {2.0 * m10.real(), 2.0 * m10.imag(), rho.m00().real() - rho.m11().real()};
}

double born_probability(const QubitDensity& rho, MeasBasis basis) {
  switch (basis) {
    case MeasBasis::Standard:
      return clamp01(rho.m00().real());
    case MeasBasis::Hadamard:
      return clamp01(0.5 + rho.m01().real());
    case MeasBasis::Circular:
      return clamp01(0.5 + rho.m10().imag());
  }
  return 0.5;
}

ProbTriple exact_probabilities(const QubitDensity& rho) {
  return {born_probability(rho, MeasBasis::Standard), born_probability(rho, MeasBasis::Hadamard),
          born_probability(rho, MeasBasis::Circular)};
}

int sample_outcome(const QubitDensity& rho, MeasBasis basis, RandomStream& rng) {
  return rng.uniform() < born_probability(rho, basis) ? 0 : 1;
}

QubitDensity reconstruct_density(const ProbTriple& p) {
  for (double v : {p.p0, p.pPlus, p.pPlusI}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("reconstruct_density: probability outside [0, 1]");
    }
  }
  BlochVector r{2.0 * p.pPlus - 1.0, 2.0 * p.pPlusI - 1.0, 2.0 * p.p0 - 1.0};
  const double n = r.norm();
  if (n > 1.0) {
    r.rx /= n;
    r.ry /= n;
    r.rz /= n;
  }
  return bloch_to_density(r);
}

double trace_product(const QubitDensity& a, const QubitDensity& b) noexcept {
  // tr(AB) = sum_ij A_ij B_ji
  const Complex t = a.m00() * b.m00() + a.m01() * b.m10() + a.m10() * b.m01() + a.m11() * b.m11();
  return t.real();
}

double fidelity(const QubitDensity& a, const QubitDensity& b) {
  const double da = std::max(0.0, a.det());
  const double db = std::max(0.0, b.det());
  return clamp01(trace_product(a, b) + 2.0 * std::sqrt(da * db));
}

double bures_angle(double f) {
  if (std::isnan(f)) throw ValidationError("bures_angle: fidelity is NaN");
  return std::acos(std::clamp(std::sqrt(clamp01(f)), -1.0, 1.0));
}

double trace_distance(const QubitDensity& a, const QubitDensity& b) {
  const double d00 = a.m00().real() - b.m00().real();
  const double d11 = a.m11().real() - b.m11().real();
  const Complex d01 = a.m01() - b.m01();
  const double mean = 0.5 * (d00 + d11);
  const double half_gap = 0.5 * (d00 - d11);
  const double radius = std::sqrt(half_gap * half_gap + std::norm(d01));
  return 0.5 * (std::abs(mean + radius) + std::abs(mean - radius));
}

double hs_distance(const QubitDensity& a, const QubitDensity& b) {
  return std::sqrt(std::max(0.0, a.purity() + b.purity() - 2.0 * trace_product(a, b)));
}

double overlap(const PureQubit& a, const PureQubit& b) {
  const Complex ip = std::conj(a.alpha()) * b.alpha() + std::conj(a.beta()) * b.beta();
  return clamp01(std::norm(ip));
}

PureQubit haar_random_pure(RandomStream& rng) {
  // Normalized complex Gaussian vectors are Haar distributed.
  for (;;) {
    const Complex a(rng.normal(), rng.normal());
    const Complex b(rng.normal(), rng.normal());
    if (std::norm(a) + std::norm(b) > 1e-24) return PureQubit::normalized(a, b);
  }
}

BlochVector random_unit_axis(RandomStream& rng) {
  for (;;) {
    BlochVector v{rng.normal(), rng.normal(), rng.normal()};
    const double n = v.norm();
    if (n > 1e-12) return {v.rx / n, v.ry / n, v.rz / n};
  }
}

PureQubit rotate(const PureQubit& psi, const BlochVector& axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const Complex i(0.0, 1.0);
  const Complex u00 = c - i * s * axis.rz;
  const Complex u01 = -i * s * Complex(axis.rx, -axis.ry);
  const Complex u10 = -i * s * Complex(axis.rx, axis.ry);
  const Complex u11 = c + i * s * axis.rz;
  return PureQubit::normalized(u00 * psi.alpha() + u01 * psi.beta(),
                               u10 * psi.alpha() + u11 * psi.beta());
}

}  // namespace qmv::qcore
