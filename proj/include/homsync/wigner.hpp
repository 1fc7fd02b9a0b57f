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

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "homsync/fock.hpp"

namespace homsync {

/// Wigner transform of |m><n| (hbar = 1, vacuum peak 1/pi) via the
/// associated-Laguerre closed form.
Complex fock_wigner_element(int m, int n, double x, double p);
/// Same, but rejects indices above the cutoff.
Complex fock_wigner_element(int m, int n, double x, double p, FockCutoff cutoff);

/// All elements W_mn(x, p) for m, n <= n_max.
CMatrix fock_wigner_table(int n_max, double x, double p);

double single_mode_wigner(const SingleModeState& state, double x, double p);
double two_mode_wigner(const TwoModeState& state, double x1, double p1, double x2, double p2);

enum class PhaseAxis { kX1 = 0, kP1 = 1, kX2 = 2, kP2 = 3 };

const char* axis_name(PhaseAxis axis);
/// Parses "x1", "p1", "x2" or "p2".
PhaseAxis parse_axis(const std::string& name);

/// Two varying axes; the other two coordinates are taken from `fixed`.
struct SlicePlane {
    PhaseAxis row_axis = PhaseAxis::kX1;
    PhaseAxis col_axis = PhaseAxis::kX2;
    std::array<double, 4> fixed{0.0, 0.0, 0.0, 0.0};  // indexed by PhaseAxis

    void validate() const;
};

struct AxisGrid {
    double lo = -3.0;
    double hi = 3.0;
    double step = 0.05;

    int size() const;
    /// lo + step * i, snapped to 1e-12 so printed coordinates stay short.
    double at(int i) const { return std::nearbyint((lo + step * i) * 1e12) / 1e12; }
    void validate() const;
};

struct WignerSlice {
    SlicePlane plane;
    AxisGrid rows;
    AxisGrid cols;
    Eigen::MatrixXd values;  // rows x cols
    double min_value = 0.0;
    double min_row = 0.0;
    double min_col = 0.0;
    double max_value = 0.0;
    double max_row = 0.0;
    double max_col = 0.0;
};

WignerSlice wigner_slice(const TwoModeState& state, const SlicePlane& plane, const AxisGrid& rows = {},
                         const AxisGrid& cols = {});

}  // namespace homsync
