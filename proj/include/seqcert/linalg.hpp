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

// Fixed-size complex linear algebra for single-qubit operators.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace seqcert {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

/// Row-major 2x2 complex matrix.
struct Mat2 {
    std::array<Complex, 4> m{};

    constexpr Complex& operator()(int r, int c) { return m[2 * r + c]; }
    constexpr const Complex& operator()(int r, int c) const { return m[2 * r + c]; }

    static constexpr Mat2 identity() { return Mat2{{Complex{1}, Complex{0}, Complex{0}, Complex{1}}}; }

    Mat2 adjoint() const {
        return Mat2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
    }
    Mat2 transpose() const { return Mat2{{m[0], m[2], m[1], m[3]}}; }
    Mat2 conj() const { return Mat2{{std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])}}; }

    Complex det() const { return m[0] * m[3] - m[1] * m[2]; }
    Complex trace() const { return m[0] + m[3]; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
            }
        }
        return r;
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int k = 0; k < 4; ++k) r.m[k] = a.m[k] + b.m[k];
        return r;
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int k = 0; k < 4; ++k) r.m[k] = a.m[k] - b.m[k];
        return r;
    }
    friend Mat2 operator*(Complex s, const Mat2& a) {
        Mat2 r;
        for (int k = 0; k < 4; ++k) r.m[k] = s * a.m[k];
        return r;
    }
};

namespace pauli {
inline constexpr Mat2 I = Mat2::identity();
inline constexpr Mat2 X{{Complex{0}, Complex{1}, Complex{1}, Complex{0}}};
inline constexpr Mat2 Y{{Complex{0}, Complex{0, -1}, Complex{0, 1}, Complex{0}}};
inline constexpr Mat2 Z{{Complex{1}, Complex{0}, Complex{0}, Complex{-1}}};
}  // namespace pauli

/// Largest entrywise deviation of U^dagger U from the identity.
inline double unitarity_error(const Mat2& u) {
    const Mat2 d = u.adjoint() * u - Mat2::identity();
    double worst = 0.0;
    for (const auto& e : d.m) worst = std::max(worst, std::abs(e));
    return worst;
}

/// Real 2x2 rotation [[cos a, -sin a], [sin a, cos a]].
inline Mat2 rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return Mat2{{Complex{c}, Complex{-s}, Complex{s}, Complex{c}}};
}

}  // namespace seqcert
