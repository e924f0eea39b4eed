// Copyright 2026 The seqcert Authors
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

// Two-qubit pure states, single-qubit observables, the weak sigma_x
// measurement and the Schmidt decomposition.
//
// Amplitudes are ordered |00>, |01>, |10>, |11> with Alice's qubit first.
// Internally a state is handled as its amplitude matrix C(a, b) = amp[2a+b],
// so that a local operator A (x) B acts as C -> A C B^T.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "seqcert/errors.hpp"
#include "seqcert/linalg.hpp"

namespace seqcert {

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kDegenerateBranchNorm = 1e-15;

class TwoQubitState {
  public:
    /// Builds a state from amplitudes that must already be normalized.
    static TwoQubitState from_amplitudes(const std::array<Complex, 4>& amps) {
        const double n2 = squared_norm(amps);
        if (!(std::abs(n2 - 1.0) <= kNormTolerance)) {
            throw DomainError("TwoQubitState: amplitudes are not normalized (norm^2 = " +
                              std::to_string(n2) + ")");
        }
        return TwoQubitState(amps);
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    static TwoQubitState normalized(const std::array<Complex, 4>& amps) {
        const double n = std::sqrt(squared_norm(amps));
        if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("TwoQubitState: cannot normalize a zero vector");
        std::array<Complex, 4> out{};
        for (int k = 0; k < 4; ++k) out[k] = amps[k] / n;
        return TwoQubitState(out);
    }

    static TwoQubitState from_matrix(const Mat2& c) { return from_amplitudes(c.m); }

    const std::array<Complex, 4>& amplitudes() const { return amps_; }
    const Complex& operator[](int k) const { return amps_[k]; }

    /// Amplitude matrix C(a, b).
    Mat2 matrix() const { return Mat2{amps_}; }

    static double squared_norm(const std::array<Complex, 4>& amps) {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        return s;
    }

  private:
    explicit TwoQubitState(const std::array<Complex, 4>& amps) : amps_(amps) {}
    std::array<Complex, 4> amps_;
};

/// |<a|b>|^2
inline double fidelity(const TwoQubitState& a, const TwoQubitState& b) {
    Complex ip{0.0};
    for (int k = 0; k < 4; ++k) ip += std::conj(a[k]) * b[k];
    return std::norm(ip);
}

/// cos(theta)|00> + sin(theta)|11>, theta in [0, pi/2].
inline TwoQubitState make_state(double theta) {
    if (!(theta >= 0.0 && theta <= kPi / 2)) {
        throw DomainError("make_state: theta must lie in [0, pi/2]");
    }
    return TwoQubitState::normalized({Complex{std::cos(theta)}, Complex{0.0}, Complex{0.0}, Complex{std::sin(theta)}});
}

/// A +-1-valued qubit observable n . sigma with |n| = 1.
class BlochObservable {
  public:
    explicit BlochObservable(const Vec3& n) : n_(n) {
        if (!(std::abs(n.norm() - 1.0) <= kNormTolerance)) {
            throw DomainError("BlochObservable: direction must be a unit vector");
        }
    }

    /// Normalizes any nonzero direction.
    static BlochObservable along(const Vec3& v) {
        const double len = v.norm();
        if (!(len > 0.0)) throw DomainError("BlochObservable: zero direction");
        return BlochObservable(Vec3{v.x / len, v.y / len, v.z / len});
    }

    /// Bloch vector of a Hermitian, traceless, involutive 2x2 matrix.
    static BlochObservable from_matrix(const Mat2& h) {
        const Vec3 v{0.5 * (h(0, 1) + h(1, 0)).real(), 0.5 * (h(1, 0) - h(0, 1)).imag(),
                     0.5 * (h(0, 0) - h(1, 1)).real()};
        return along(v);
    }

    static BlochObservable sigma_x() { return BlochObservable(Vec3{1, 0, 0}); }
    static BlochObservable sigma_y() { return BlochObservable(Vec3{0, 1, 0}); }
    static BlochObservable sigma_z() { return BlochObservable(Vec3{0, 0, 1}); }

    /// Unit vector in the x-z plane at polar angle phi from +z.
    static BlochObservable in_xz_plane(double phi) { return BlochObservable::along(Vec3{std::sin(phi), 0.0, std::cos(phi)}); }

    const Vec3& direction() const { return n_; }

    Mat2 matrix() const {
        return Mat2{{Complex{n_.z}, Complex{n_.x, -n_.y}, Complex{n_.x, n_.y}, Complex{-n_.z}}};
    }

    /// U (n . sigma) U^dagger
    BlochObservable conjugated(const Mat2& u) const { return from_matrix(u * matrix() * u.adjoint()); }

  private:
    Vec3 n_;
};

/// Either the identity or a Bloch observable; the operand type of expectation().
class LocalObservable {
  public:
    LocalObservable(const BlochObservable& obs) : obs_(obs) {}  // NOLINT(implicit)
    static LocalObservable identity() { return LocalObservable(); }

    bool is_identity() const { return !obs_.has_value(); }
    Mat2 matrix() const { return obs_ ? obs_->matrix() : Mat2::identity(); }

  private:
    LocalObservable() = default;
    std::optional<BlochObservable> obs_;
};

enum class Outcome { plus, minus };

inline constexpr int sign(Outcome o) { return o == Outcome::plus ? +1 : -1; }
inline constexpr char symbol(Outcome o) { return o == Outcome::plus ? '+' : '-'; }

/// The weak sigma_x measurement with Kraus operators
///   M_{+-} = cos(xi) |+-><+-| + sin(xi) |-+><-+|,   xi in [0, pi/4].
/// xi = 0 is the projective sigma_x measurement, xi = pi/4 does not interact.
class KrausPair {
  public:
    explicit KrausPair(double xi) : xi_(xi) {
        if (!(xi >= 0.0 && xi <= kPi / 4)) throw DomainError("KrausPair: xi must lie in [0, pi/4]");
    }

    double xi() const { return xi_; }

    Mat2 kraus(Outcome o) const {
        // M = (cos + sin)/2 * 1 +- (cos - sin)/2 * sigma_x
        const double c = std::cos(xi_);
        const double s = std::sin(xi_);
        const double diag = 0.5 * (c + s);
        const double off = 0.5 * (c - s) * sign(o);
        return Mat2{{Complex{diag}, Complex{off}, Complex{off}, Complex{diag}}};
    }

    /// E_{+-} = M^dagger M = (1 +- cos(2 xi) sigma_x) / 2
    Mat2 effect(Outcome o) const {
        const double off = 0.5 * std::cos(2.0 * xi_) * sign(o);
        return Mat2{{Complex{0.5}, Complex{off}, Complex{off}, Complex{0.5}}};
    }

    /// E_+ - E_- = cos(2 xi) sigma_x
    double damping() const { return std::cos(2.0 * xi_); }

  private:
    double xi_;
};

/// (A (x) B)|psi>, unnormalized amplitude matrix.
inline Mat2 apply_local(const Mat2& c, const Mat2& a, const Mat2& b) { return a * c * b.transpose(); }

/// <psi| A (x) B |psi> = Tr(C^dagger A C B^T).
inline Complex expectation_complex(const TwoQubitState& psi, const Mat2& a, const Mat2& b) {
    const Mat2 c = psi.matrix();
    const Mat2 ac = apply_local(c, a, b);
    Complex s{0.0};
    for (int k = 0; k < 4; ++k) s += std::conj(c.m[k]) * ac.m[k];
    return s;
}

inline double expectation(const TwoQubitState& psi, const LocalObservable& a, const LocalObservable& b) {
    return std::clamp(expectation_complex(psi, a.matrix(), b.matrix()).real(), -1.0, 1.0);
}

struct PostMeasurement {
    TwoQubitState state;
    double probability;
};

/// Applies (1 (x) M) to psi and renormalizes.
inline PostMeasurement apply_bob_operator(const TwoQubitState& psi, const Mat2& m) {
    const Mat2 out = apply_local(psi.matrix(), Mat2::identity(), m);
    const double p = TwoQubitState::squared_norm(out.m);
    if (!(std::sqrt(p) >= kDegenerateBranchNorm)) {
        throw DegenerateBranchError("measurement branch has zero probability");
    }
    return {TwoQubitState::normalized(out.m), p};
}

inline PostMeasurement apply_kraus_bob(const TwoQubitState& psi, const KrausPair& k, Outcome outcome) {
    return apply_bob_operator(psi, k.kraus(outcome));
}

/// (uA (x) uB)(cos theta |00> + sin theta |11>), theta in [0, pi/4].
struct SchmidtForm {
    double theta = 0.0;
    Mat2 uA = Mat2::identity();
    Mat2 uB = Mat2::identity();

    TwoQubitState reconstruct() const {
        const Mat2 d{{Complex{std::cos(theta)}, Complex{0.0}, Complex{0.0}, Complex{std::sin(theta)}}};
        return TwoQubitState::normalized(apply_local(d, uA, uB).m);
    }
};

namespace detail {

// Rotates v so that its first component of largest modulus is real positive.
inline void fix_phase(Complex& v0, Complex& v1) {
    const double m0 = std::abs(v0);
    const double m1 = std::abs(v1);
    const Complex& pivot = (m0 >= m1 * (1.0 - 1e-12)) ? v0 : v1;
    const double mp = std::abs(pivot);
    if (mp == 0.0) return;
    const Complex ph = std::conj(pivot) / mp;
    v0 *= ph;
    v1 *= ph;
}

inline Complex unit_phase(Complex z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : Complex{1.0};
}

// Completes the unit row w1 to a unitary with determinant `det_phase`.
inline Mat2 complete_rows(Complex w10, Complex w11, Complex det_phase) {
    const double len = std::sqrt(std::norm(w10) + std::norm(w11));
    w10 /= len;
    w11 /= len;
    const Complex w20 = -det_phase * std::conj(w11);
    const Complex w21 = det_phase * std::conj(w10);
    return Mat2{{w10, w11, w20, w21}};
}

}  // namespace detail

inline constexpr double kSchmidtDegeneracy = 1e-12;

/// Schmidt decomposition of a two-qubit pure state.
///
/// Coefficients are ordered descending. Each column of uA is rotated so its
/// first component of largest modulus is real and positive; uB absorbs the
/// compensating phases so the reconstruction is exact (no global phase).
/// When the coefficients coincide, uA is the identity.
inline SchmidtForm schmidt(const TwoQubitState& psi) {
    const Mat2 c = psi.matrix();
    // rho_A = C C^dagger = [[a, b], [b*, d]]
    const double a = std::norm(c(0, 0)) + std::norm(c(0, 1));
    const double d = std::norm(c(1, 0)) + std::norm(c(1, 1));
    const Complex b = c(0, 0) * std::conj(c(1, 0)) + c(0, 1) * std::conj(c(1, 1));

    const double lmax = 0.5 * (a + d) + std::hypot(0.5 * (a - d), std::abs(b));
    const double s1 = std::sqrt(lmax);
    const Complex detc = c.det();
    const double s2 = std::abs(detc) / s1;

    SchmidtForm out;
    out.theta = std::atan2(s2, s1);

    if (s1 - s2 <= kSchmidtDegeneracy) {
        out.uA = Mat2::identity();
        out.uB = detail::complete_rows(c(0, 0), c(0, 1), detail::unit_phase(detc)).transpose();
        return out;
    }

    const double phi = 0.5 * std::atan2(2.0 * std::abs(b), a - d);
    const Complex e = std::conj(detail::unit_phase(b));  // e^{-i chi}
    Complex u10{std::cos(phi)}, u11 = e * std::sin(phi);
    Complex u20{-std::sin(phi)}, u21 = e * std::cos(phi);
    detail::fix_phase(u10, u11);
    detail::fix_phase(u20, u21);
    out.uA = Mat2{{u10, u20, u11, u21}};

    // First row of uB^T is u1^dagger C / s1; the second is fixed by orthogonality
    // and det(uB) = det(C) / (det(uA) s1 s2).
    const Complex w10 = (std::conj(u10) * c(0, 0) + std::conj(u11) * c(1, 0)) / s1;
    const Complex w11 = (std::conj(u10) * c(0, 1) + std::conj(u11) * c(1, 1)) / s1;
    const Complex det_phase = std::abs(detc) > 0.0 ? detail::unit_phase(detc / out.uA.det()) : Complex{1.0};
    out.uB = detail::complete_rows(w10, w11, det_phase).transpose();
    return out;
}

/// Schmidt angle of the post-measurement state of cos(theta)|00> + sin(theta)|11>
/// after the weak sigma_x measurement with parameter xi (either outcome):
///   sin^2 theta' = x / (2 (1 + sqrt(1 - x))),  x = sin^2(2 theta) sin^2(2 xi).
/// sqrt(x) is formed as a product so nothing is squared near underflow.
inline double branch_angle_stable(double theta, double xi) {
    if (!(theta >= 0.0 && theta <= kPi / 4)) throw DomainError("branch_angle_stable: theta must lie in [0, pi/4]");
    if (!(xi >= 0.0 && xi <= kPi / 4)) throw DomainError("branch_angle_stable: xi must lie in [0, pi/4]");
    const double y = std::sin(2.0 * theta) * std::sin(2.0 * xi);
    const double root = std::sqrt(std::max(0.0, (1.0 - y) * (1.0 + y)));
    const double s = y / std::sqrt(2.0 * (1.0 + root));
    return std::asin(std::min(1.0, s));
}

}  // namespace seqcert
