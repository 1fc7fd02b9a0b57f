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

#include "homsync/fock.hpp"

#include <cmath>
#include <string>

#include "homsync/error.hpp"

namespace homsync {
namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

// x^k with 0^0 = 1.
double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

void check_square(const CMatrix& rho, int dim, const char* what) {
    if (rho.rows() != dim || rho.cols() != dim) {
        throw ConfigError(std::string(what) + ": density matrix must be " + std::to_string(dim) + "x" +
                          std::to_string(dim) + ", got " + std::to_string(rho.rows()) + "x" +
                          std::to_string(rho.cols()));
    }
}

void check_hermitian(const CMatrix& rho, double tol, const char* what) {
    double err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (err > tol) {
        throw NumericalError(std::string(what) + ": matrix is not Hermitian (max deviation " +
                             std::to_string(err) + ")");
    }
}

void validate_density(const CMatrix& rho, const ValidationTolerances& tol, const char* what) {
    check_hermitian(rho, tol.hermitian, what);
    double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
        throw NumericalError(std::string(what) + ": trace " + std::to_string(tr) + " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < tol.eigenvalue) {
        throw NumericalError(std::string(what) + ": negative eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()));
    }
}

void check_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
    }
}

// Symmetrize away the rounding asymmetry left by products like B rho B^dagger.
CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

CMatrix conjugate_by(const CMatrix& u, const CMatrix& rho) { return u * rho * u.adjoint(); }

TwoModeState apply_truncated_unitary(const TwoModeState& state, const CMatrix& u, double leak_tolerance,
                                     const char* what) {
    CMatrix out = hermitian_part(conjugate_by(u, state.rho()));
    double leaked = state.trace() - out.trace().real();
    if (leaked > leak_tolerance) {
        throw NumericalError(std::string(what) + ": probability " + std::to_string(leaked) +
                             " leaked beyond n_max = " + std::to_string(state.cutoff().n_max()) +
                             "; increase the cutoff");
    }
    return TwoModeState(state.cutoff(), std::move(out));
}

}  // namespace

Mode mode_from_int(int mode) {
    if (mode == 1) return Mode::kFirst;
    if (mode == 2) return Mode::kSecond;
    throw ConfigError("mode must be 1 or 2, got " + std::to_string(mode));
}

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
    if (n_max < 2) throw ConfigError("n_max must be at least 2, got " + std::to_string(n_max));
}

// ---------------------------------------------------------------------------
// SingleModeState

SingleModeState::SingleModeState(FockCutoff cutoff, CMatrix rho) : cutoff_(cutoff), rho_(std::move(rho)) {
    check_square(rho_, cutoff_.dim(), "SingleModeState");
    check_hermitian(rho_, 1e-10, "SingleModeState");
}

SingleModeState SingleModeState::fock(FockCutoff cutoff, int n) {
    if (n < 0 || n > cutoff.n_max()) throw ConfigError("photon number out of range");
    CMatrix rho = CMatrix::Zero(cutoff.dim(), cutoff.dim());
    rho(n, n) = 1.0;
    return SingleModeState(cutoff, std::move(rho));
}

SingleModeState SingleModeState::diagonal(FockCutoff cutoff, const std::vector<double>& probs) {
    if (static_cast<int>(probs.size()) > cutoff.dim()) {
        throw ConfigError("more populations than the cutoff allows");
    }
    CMatrix rho = CMatrix::Zero(cutoff.dim(), cutoff.dim());
    for (size_t n = 0; n < probs.size(); ++n) rho(n, n) = probs[n];
    return SingleModeState(cutoff, std::move(rho));
}

double SingleModeState::purity() const { return (rho_ * rho_).trace().real(); }

bool SingleModeState::is_number_diagonal(double tol) const {
    for (int i = 0; i < rho_.rows(); ++i)
        for (int j = 0; j < rho_.cols(); ++j)
            if (i != j && std::abs(rho_(i, j)) > tol) return false;
    return true;
}

void SingleModeState::validate(const ValidationTolerances& tol) const {
    validate_density(rho_, tol, "SingleModeState");
}

// ---------------------------------------------------------------------------
// TwoModeState

TwoModeState::TwoModeState(FockCutoff cutoff, CMatrix rho) : cutoff_(cutoff), rho_(std::move(rho)) {
    check_square(rho_, cutoff_.two_mode_dim(), "TwoModeState");
    check_hermitian(rho_, 1e-10, "TwoModeState");
}

TwoModeState TwoModeState::fock(FockCutoff cutoff, int n1, int n2) {
    if (n1 < 0 || n2 < 0 || n1 > cutoff.n_max() || n2 > cutoff.n_max()) {
        throw ConfigError("photon number out of range");
    }
    CVector psi = CVector::Zero(cutoff.two_mode_dim());
    psi(cutoff.index(n1, n2)) = 1.0;
    return pure(cutoff, psi);
}

TwoModeState TwoModeState::pure(FockCutoff cutoff, const CVector& psi) {
    if (psi.size() != cutoff.two_mode_dim()) throw ConfigError("state vector has wrong dimension");
    return TwoModeState(cutoff, psi * psi.adjoint());
}

TwoModeState TwoModeState::product(const SingleModeState& first, const SingleModeState& second) {
    if (!(first.cutoff() == second.cutoff())) throw ConfigError("product of states with different cutoffs");
    const FockCutoff c = first.cutoff();
    const int d = c.dim();
    CMatrix rho(c.two_mode_dim(), c.two_mode_dim());
    for (int m1 = 0; m1 < d; ++m1)
        for (int m2 = 0; m2 < d; ++m2)
            for (int n1 = 0; n1 < d; ++n1)
                for (int n2 = 0; n2 < d; ++n2)
                    rho(c.index(m1, m2), c.index(n1, n2)) = first.rho()(m1, n1) * second.rho()(m2, n2);
    return TwoModeState(c, std::move(rho));
}

double TwoModeState::purity() const { return (rho_ * rho_).trace().real(); }

double TwoModeState::fidelity(const CVector& psi) const { return psi.dot(rho_ * psi).real(); }

void TwoModeState::validate(const ValidationTolerances& tol) const {
    validate_density(rho_, tol, "TwoModeState");
}

// ---------------------------------------------------------------------------

void SourceModel::validate() const {
    check_unit_interval(p0, "p0");
    check_unit_interval(p1, "p1");
    check_unit_interval(p2, "p2");
    if (std::abs(p0 + p1 + p2 - 1.0) > 1e-12) {
        throw ConfigError("source probabilities must sum to 1, got " + std::to_string(p0 + p1 + p2));
    }
}

SingleModeState SourceModel::state(FockCutoff cutoff) const {
    validate();
    return SingleModeState::diagonal(cutoff, {p0, p1, p2});
}

SourceModel SourceModel::from_p1_p2(double p1, double p2) {
    SourceModel s{1.0 - p1 - p2, p1, p2};
    s.validate();
    return s;
}

CVector hom_vector(FockCutoff cutoff, double theta_rad) {
    CVector psi = CVector::Zero(cutoff.two_mode_dim());
    const double s = 1.0 / std::sqrt(2.0);
    psi(cutoff.index(2, 0)) = s;
    psi(cutoff.index(0, 2)) = -s * std::exp(Complex(0.0, 2.0 * theta_rad));
    return psi;
}

TwoModeState hom_state(FockCutoff cutoff, double theta_rad) {
    return TwoModeState::pure(cutoff, hom_vector(cutoff, theta_rad));
}

// B a1^dag B^dag = sqrt(t) a1^dag - sqrt(r) a2^dag
// B a2^dag B^dag = sqrt(r) a1^dag + sqrt(t) a2^dag
std::vector<double> beam_splitter_output(int n1, int n2, double transmittance) {
    check_unit_interval(transmittance, "transmittance");
    const double st = std::sqrt(transmittance);
    const double sr = std::sqrt(1.0 - transmittance);
    const int total = n1 + n2;
    std::vector<double> out(total + 1, 0.0);
    const double norm_in = 1.0 / std::sqrt(factorial(n1) * factorial(n2));
    for (int j = 0; j <= n1; ++j) {
        // j photons from the first input stay in mode 1.
        const double a = binomial(n1, j) * ipow(st, j) * ipow(-sr, n1 - j);
        if (a == 0.0) continue;
        for (int k = 0; k <= n2; ++k) {
            // k photons from the second input go to mode 1.
            const double b = binomial(n2, k) * ipow(sr, k) * ipow(st, n2 - k);
            const int m1 = j + k;
            out[m1] += a * b;
        }
    }
    for (int m1 = 0; m1 <= total; ++m1) {
        out[m1] *= norm_in * std::sqrt(factorial(m1) * factorial(total - m1));
    }
    return out;
}

double beam_splitter_amplitude(int n1, int n2, int m1, int m2, double transmittance) {
    if (m1 + m2 != n1 + n2 || m1 < 0 || m2 < 0) return 0.0;
    return beam_splitter_output(n1, n2, transmittance)[m1];
}

CMatrix beam_splitter_matrix(FockCutoff cutoff, double transmittance) {
    check_unit_interval(transmittance, "transmittance");
    const int d = cutoff.dim();
    CMatrix b = CMatrix::Zero(cutoff.two_mode_dim(), cutoff.two_mode_dim());
    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            const auto out = beam_splitter_output(n1, n2, transmittance);
            const int total = n1 + n2;
            for (int m1 = 0; m1 <= total; ++m1) {
                const int m2 = total - m1;
                if (m1 < d && m2 < d) b(cutoff.index(m1, m2), cutoff.index(n1, n2)) = out[m1];
            }
        }
    }
    return b;
}

TwoModeState beam_splitter_apply(const TwoModeState& state, double transmittance, double leak_tolerance) {
    return apply_truncated_unitary(state, beam_splitter_matrix(state.cutoff(), transmittance), leak_tolerance,
                                   "beam_splitter_apply");
}

TwoModeState beam_splitter_inverse_apply(const TwoModeState& state, double transmittance,
                                         double leak_tolerance) {
    return apply_truncated_unitary(state, beam_splitter_matrix(state.cutoff(), transmittance).adjoint(),
                                   leak_tolerance, "beam_splitter_inverse_apply");
}

TwoModeState phase_shift_apply(const TwoModeState& state, Mode mode, double theta_rad) {
    const FockCutoff& c = state.cutoff();
    CVector phase(c.two_mode_dim());
    for (int n1 = 0; n1 < c.dim(); ++n1) {
        for (int n2 = 0; n2 < c.dim(); ++n2) {
            const int n = mode == Mode::kFirst ? n1 : n2;
            phase(c.index(n1, n2)) = std::exp(Complex(0.0, theta_rad * n));
        }
    }
    CMatrix rho = phase.asDiagonal() * state.rho() * phase.conjugate().asDiagonal();
    return TwoModeState(c, std::move(rho));
}

SingleModeState phase_shift_apply(const SingleModeState& state, double theta_rad) {
    const int d = state.cutoff().dim();
    CVector phase(d);
    for (int n = 0; n < d; ++n) phase(n) = std::exp(Complex(0.0, theta_rad * n));
    CMatrix rho = phase.asDiagonal() * state.rho() * phase.conjugate().asDiagonal();
    return SingleModeState(state.cutoff(), std::move(rho));
}

// Kraus operators K_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|.
SingleModeState loss_channel(const SingleModeState& state, double eta) {
    check_unit_interval(eta, "eta");
    const int d = state.cutoff().dim();
    CMatrix out = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        CMatrix kraus = CMatrix::Zero(d, d);
        for (int n = k; n < d; ++n) {
            kraus(n - k, n) = std::sqrt(binomial(n, k) * ipow(eta, n - k) * ipow(1.0 - eta, k));
        }
        out += kraus * state.rho() * kraus.adjoint();
    }
    return SingleModeState(state.cutoff(), hermitian_part(out));
}

SingleModeState partial_trace(const TwoModeState& state, Mode keep) {
    const FockCutoff& c = state.cutoff();
    const int d = c.dim();
    CMatrix out = CMatrix::Zero(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            Complex acc = 0.0;
            for (int k = 0; k < d; ++k) {
                acc += keep == Mode::kFirst ? state.element(m, k, n, k) : state.element(k, m, k, n);
            }
            out(m, n) = acc;
        }
    }
    return SingleModeState(c, std::move(out));
}

TwoModeState hom_with_overlap(const SingleModeState& rho1, const SingleModeState& rho2, double overlap,
                              double leak_tolerance) {
    check_unit_interval(overlap, "overlap");
    if (!(rho1.cutoff() == rho2.cutoff())) throw ConfigError("inputs have different cutoffs");
    if (!rho1.is_number_diagonal() || !rho2.is_number_diagonal()) {
        throw ConfigError("hom_with_overlap supports number-diagonal inputs only");
    }
    const FockCutoff c = rho1.cutoff();
    const int d = c.dim();
    CMatrix out = CMatrix::Zero(c.two_mode_dim(), c.two_mode_dim());
    double leaked = 0.0;
    CVector phi(c.two_mode_dim());

    for (int n1 = 0; n1 < d; ++n1) {
        const double q1 = rho1.population(n1);
        if (q1 == 0.0) continue;
        for (int n2 = 0; n2 < d; ++n2) {
            const double q2 = rho2.population(n2);
            if (q2 == 0.0) continue;
            // k of the second input's photons share the first input's temporal mode.
            for (int k = 0; k <= n2; ++k) {
                const double split = binomial(n2, k) * ipow(overlap, k) * ipow(1.0 - overlap, n2 - k);
                if (split == 0.0) continue;
                const auto matched = beam_splitter_output(n1, k, 0.5);
                const auto orthogonal = beam_splitter_output(0, n2 - k, 0.5);
                const int matched_total = n1 + k;
                const int orth_total = n2 - k;
                // The orthogonal-mode configuration is which-path information:
                // each one contributes incoherently.
                for (int o1 = 0; o1 <= orth_total; ++o1) {
                    const double orth_prob = orthogonal[o1] * orthogonal[o1];
                    if (orth_prob == 0.0) continue;
                    const int o2 = orth_total - o1;
                    const double weight = q1 * q2 * split * orth_prob;
                    phi.setZero();
                    for (int m1 = 0; m1 <= matched_total; ++m1) {
                        const double amp = matched[m1];
                        if (amp == 0.0) continue;
                        const int t1 = m1 + o1;
                        const int t2 = matched_total - m1 + o2;
                        if (t1 >= d || t2 >= d) {
                            leaked += weight * amp * amp;
                            continue;
                        }
                        phi(c.index(t1, t2)) = amp;
                    }
                    out += weight * phi * phi.adjoint();
                }
            }
        }
    }
    if (leaked > leak_tolerance) {
        throw NumericalError("hom_with_overlap: probability " + std::to_string(leaked) +
                             " leaked beyond n_max = " + std::to_string(c.n_max()) + "; increase the cutoff");
    }
    return TwoModeState(c, hermitian_part(out));
}

}  // namespace homsync
