// Copyright 2026 The homsync Authors
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

#include "homsync/wigner.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "homsync/error.hpp"

namespace homsync {
namespace {

double factorial_ratio(int n, int m) {
    // n! / m! for n <= m
    double r = 1.0;
    for (int k = n + 1; k <= m; ++k) r /= k;
    return r;
}

// sum over rho_{(m1 m2),(n1 n2)} W_{m1 n1} W_{m2 n2}
double contract(const CMatrix& rho, const CMatrix& w1, const CMatrix& w2, const FockCutoff& c) {
    const int d = c.dim();
    Complex acc = 0.0;
    for (int m1 = 0; m1 < d; ++m1)
        for (int m2 = 0; m2 < d; ++m2)
            for (int n1 = 0; n1 < d; ++n1)
                for (int n2 = 0; n2 < d; ++n2)
                    acc += rho(c.index(m1, m2), c.index(n1, n2)) * w1(m1, n1) * w2(m2, n2);
    return acc.real();
}

}  // namespace

// For m >= n:
//   W_mn = (-1)^n / pi * sqrt(n!/m!) * (sqrt(2)(x - i p))^(m-n) * e^{-r^2} L_n^(m-n)(2 r^2)
// and W_nm = conj(W_mn).
Complex fock_wigner_element(int m, int n, double x, double p) {
    if (m < 0 || n < 0) throw ConfigError("Wigner element indices must be non-negative");
    if (m < n) return std::conj(fock_wigner_element(n, m, x, p));
    const double r2 = x * x + p * p;
    const int k = m - n;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double radial = sign / std::numbers::pi * std::sqrt(factorial_ratio(n, m)) * std::exp(-r2) *
                          std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(k), 2.0 * r2);
    return radial * std::pow(Complex(std::sqrt(2.0) * x, -std::sqrt(2.0) * p), k);
}

Complex fock_wigner_element(int m, int n, double x, double p, FockCutoff cutoff) {
    if (m > cutoff.n_max() || n > cutoff.n_max()) throw ConfigError("Wigner element index above cutoff");
    return fock_wigner_element(m, n, x, p);
}

CMatrix fock_wigner_table(int n_max, double x, double p) {
    CMatrix w(n_max + 1, n_max + 1);
    for (int m = 0; m <= n_max; ++m) {
        for (int n = 0; n <= m; ++n) {
            w(m, n) = fock_wigner_element(m, n, x, p);
            w(n, m) = std::conj(w(m, n));
        }
    }
    return w;
}

double single_mode_wigner(const SingleModeState& state, double x, double p) {
    const CMatrix w = fock_wigner_table(state.cutoff().n_max(), x, p);
    // sum_mn rho_mn W_mn
    return state.rho().cwiseProduct(w).sum().real();
}

double two_mode_wigner(const TwoModeState& state, double x1, double p1, double x2, double p2) {
    const int n_max = state.cutoff().n_max();
    return contract(state.rho(), fock_wigner_table(n_max, x1, p1), fock_wigner_table(n_max, x2, p2),
                    state.cutoff());
}

const char* axis_name(PhaseAxis axis) {
    switch (axis) {
        case PhaseAxis::kX1: return "x1";
        case PhaseAxis::kP1: return "p1";
        case PhaseAxis::kX2: return "x2";
        case PhaseAxis::kP2: return "p2";
    }
    return "?";
}

PhaseAxis parse_axis(const std::string& name) {
    if (name == "x1") return PhaseAxis::kX1;
    if (name == "p1") return PhaseAxis::kP1;
    if (name == "x2") return PhaseAxis::kX2;
    if (name == "p2") return PhaseAxis::kP2;
    throw ConfigError("unknown phase-space axis '" + name + "'");
}

void SlicePlane::validate() const {
    if (row_axis == col_axis) throw ConfigError("slice plane needs two distinct axes");
    for (double v : fixed)
        if (!std::isfinite(v)) throw ConfigError("slice plane fixed values must be finite");
}

int AxisGrid::size() const { return static_cast<int>(std::lround((hi - lo) / step)) + 1; }

void AxisGrid::validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo) || !(step > 0.0)) {
        throw ConfigError("axis grid needs finite lo < hi and step > 0");
    }
}

WignerSlice wigner_slice(const TwoModeState& state, const SlicePlane& plane, const AxisGrid& rows,
                         const AxisGrid& cols) {
    plane.validate();
    rows.validate();
    cols.validate();
    WignerSlice slice{plane, rows, cols, Eigen::MatrixXd(rows.size(), cols.size())};
    const int n_max = state.cutoff().n_max();
    const auto r = static_cast<int>(plane.row_axis);
    const auto c = static_cast<int>(plane.col_axis);
    for (int i = 0; i < rows.size(); ++i) {
        std::array<double, 4> z = plane.fixed;
        z[r] = rows.at(i);
        for (int j = 0; j < cols.size(); ++j) {
            z[c] = cols.at(j);
            const CMatrix w1 = fock_wigner_table(n_max, z[0], z[1]);
            const CMatrix w2 = fock_wigner_table(n_max, z[2], z[3]);
            slice.values(i, j) = contract(state.rho(), w1, w2, state.cutoff());
        }
    }
    Eigen::Index ri = 0, ci = 0;
    slice.min_value = slice.values.minCoeff(&ri, &ci);
    slice.min_row = rows.at(static_cast<int>(ri));
    slice.min_col = cols.at(static_cast<int>(ci));
    slice.max_value = slice.values.maxCoeff(&ri, &ci);
    slice.max_row = rows.at(static_cast<int>(ri));
    slice.max_col = cols.at(static_cast<int>(ci));
    return slice;
}

}  // namespace homsync
