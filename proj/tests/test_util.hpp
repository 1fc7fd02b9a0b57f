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

#include <cstdint>
#include <random>

#include "homsync/fock.hpp"

namespace homsync::fixtures {

/// Random mixed two-mode state supported on n1 + n2 <= max_total.
inline TwoModeState random_two_mode(FockCutoff cutoff, int max_total, std::uint64_t seed, int rank = 3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const int dim = cutoff.two_mode_dim();
    CMatrix a = CMatrix::Zero(dim, rank);
    for (int n1 = 0; n1 < cutoff.dim(); ++n1) {
        for (int n2 = 0; n2 < cutoff.dim(); ++n2) {
            if (n1 + n2 > max_total) continue;
            for (int k = 0; k < rank; ++k) a(cutoff.index(n1, n2), k) = Complex(g(rng), g(rng));
        }
    }
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return TwoModeState(cutoff, rho);
}

/// Random mixed single-mode state on photon numbers 0..max_n.
inline SingleModeState random_single_mode(FockCutoff cutoff, int max_n, std::uint64_t seed, int rank = 2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CMatrix a = CMatrix::Zero(cutoff.dim(), rank);
    for (int n = 0; n <= max_n; ++n) {
        for (int k = 0; k < rank; ++k) a(n, k) = Complex(g(rng), g(rng));
    }
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return SingleModeState(cutoff, rho);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace homsync::fixtures
