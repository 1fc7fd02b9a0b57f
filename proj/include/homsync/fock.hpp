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

// Truncated Fock-space states of one and two bosonic modes and the
// linear-optical maps acting on them.
//
// Two-mode basis ordering: index = n1 * (n_max + 1) + n2.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace homsync {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Leaked probability above which truncating operations refuse to continue.
inline constexpr double kDefaultLeakTolerance = 1e-6;

enum class Mode { kFirst = 1, kSecond = 2 };

/// Mode from a 1-based integer; throws ConfigError for anything but 1 or 2.
Mode mode_from_int(int mode);

class FockCutoff {
   public:
    explicit FockCutoff(int n_max = 5);

    int n_max() const { return n_max_; }
    /// Basis size of one mode.
    int dim() const { return n_max_ + 1; }
    int two_mode_dim() const { return dim() * dim(); }
    int index(int n1, int n2) const { return n1 * dim() + n2; }

    friend bool operator==(const FockCutoff&, const FockCutoff&) = default;

   private:
    int n_max_;
};

struct ValidationTolerances {
    double hermitian = 1e-12;
    double trace = 1e-10;
    double eigenvalue = -1e-10;
};

class SingleModeState {
   public:
    /// Takes ownership of `rho`; checks shape and Hermiticity only.
    SingleModeState(FockCutoff cutoff, CMatrix rho);

    static SingleModeState fock(FockCutoff cutoff, int n);
    /// Number-diagonal state with populations `probs` (missing entries are 0).
    static SingleModeState diagonal(FockCutoff cutoff, const std::vector<double>& probs);

    const FockCutoff& cutoff() const { return cutoff_; }
    const CMatrix& rho() const { return rho_; }
    double population(int n) const { return rho_(n, n).real(); }
    double trace() const { return rho_.trace().real(); }
    double purity() const;
    bool is_number_diagonal(double tol = 1e-12) const;

    /// Throws NumericalError if trace or positivity is violated.
    void validate(const ValidationTolerances& tol = {}) const;

   private:
    FockCutoff cutoff_;
    CMatrix rho_;
};

class TwoModeState {
   public:
    /// Takes ownership of `rho`; checks shape and Hermiticity only.
    TwoModeState(FockCutoff cutoff, CMatrix rho);

    static TwoModeState fock(FockCutoff cutoff, int n1, int n2);
    static TwoModeState pure(FockCutoff cutoff, const CVector& psi);
    static TwoModeState product(const SingleModeState& first, const SingleModeState& second);

    const FockCutoff& cutoff() const { return cutoff_; }
    const CMatrix& rho() const { return rho_; }
    Complex element(int m1, int m2, int n1, int n2) const {
        return rho_(cutoff_.index(m1, m2), cutoff_.index(n1, n2));
    }
    double population(int n1, int n2) const { return element(n1, n2, n1, n2).real(); }
    double trace() const { return rho_.trace().real(); }
    double purity() const;
    /// <psi|rho|psi> for a normalized pure state.
    double fidelity(const CVector& psi) const;

    void validate(const ValidationTolerances& tol = {}) const;

   private:
    FockCutoff cutoff_;
    CMatrix rho_;
};

/// Number-diagonal source with up to two photons.
struct SourceModel {
    double p0 = 0.0;
    double p1 = 1.0;
    double p2 = 0.0;

    /// Throws ConfigError unless all are in [0,1] and sum to 1 within 1e-12.
    void validate() const;
    SingleModeState state(FockCutoff cutoff) const;
    /// Source with given p1 and p2; p0 takes the remainder.
    static SourceModel from_p1_p2(double p1, double p2);
};

/// (|2,0> - e^{2i theta}|0,2>)/sqrt(2).
CVector hom_vector(FockCutoff cutoff, double theta_rad);
TwoModeState hom_state(FockCutoff cutoff, double theta_rad = 0.0);

/// <m1, m2| B |n1, n2> for the beam splitter with intensity transmittance t.
/// Photon number is conserved, so the result is zero unless m1+m2 == n1+n2.
double beam_splitter_amplitude(int n1, int n2, int m1, int m2, double transmittance);

/// Output amplitudes of B|n1, n2>, indexed by the photon number m1 in the
/// first mode (the second holds n1 + n2 - m1). Untruncated.
std::vector<double> beam_splitter_output(int n1, int n2, double transmittance);

/// Matrix of B on the truncated two-mode basis.
CMatrix beam_splitter_matrix(FockCutoff cutoff, double transmittance);

/// B rho B^dagger. Convention: at transmittance 1/2, B|1,1> = |HOM(0)>.
/// Throws NumericalError when more than `leak_tolerance` probability leaves
/// the truncated space.
TwoModeState beam_splitter_apply(const TwoModeState& state, double transmittance,
                                 double leak_tolerance = kDefaultLeakTolerance);

/// B^dagger rho B, the inverse of beam_splitter_apply.
TwoModeState beam_splitter_inverse_apply(const TwoModeState& state, double transmittance,
                                         double leak_tolerance = kDefaultLeakTolerance);

/// Conjugation by exp(i theta n) on one mode.
TwoModeState phase_shift_apply(const TwoModeState& state, Mode mode, double theta_rad);
SingleModeState phase_shift_apply(const SingleModeState& state, double theta_rad);

/// Pure-loss channel of transmissivity eta (Kraus form).
SingleModeState loss_channel(const SingleModeState& state, double eta);

SingleModeState partial_trace(const TwoModeState& state, Mode keep);

/// Interference of two number-diagonal inputs at a balanced beam splitter
/// whose temporal modes overlap with |<f1|f2>|^2 = overlap. The second
/// input's photons split into the first input's mode (amplitude
/// sqrt(overlap)) and an orthogonal mode; photons in the orthogonal mode are
/// counted in their spatial output port but carry no coherence with the
/// matched part.
TwoModeState hom_with_overlap(const SingleModeState& rho1, const SingleModeState& rho2,
                              double overlap, double leak_tolerance = kDefaultLeakTolerance);

}  // namespace homsync
