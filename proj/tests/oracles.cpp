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

#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace homsync::oracle {
namespace {

using Monomial = std::array<int, 4>;  // exponents of a1f, a1g, a2f, a2g
using Poly = std::map<Monomial, double>;

Poly times_linear(const Poly& poly, const std::array<double, 4>& form) {
    Poly out;
    for (const auto& [mono, coeff] : poly) {
        for (int k = 0; k < 4; ++k) {
            if (form[k] == 0.0) continue;
            Monomial m = mono;
            ++m[k];
            out[m] += coeff * form[k];
        }
    }
    return out;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

std::vector<std::vector<double>> four_mode_counts(int n1, int n2, double overlap) {
    const double r = std::sqrt(0.5), t = std::sqrt(0.5);
    const double c = std::sqrt(overlap), s = std::sqrt(1.0 - overlap);
    // a1f -> t a1f - r a2f; input 2 photon: c a2f + s a2g, each -> r a1 + t a2.
    const std::array<double, 4> first{t, 0.0, -r, 0.0};
    const std::array<double, 4> second{c * r, s * r, c * t, s * t};
    Poly poly{{Monomial{0, 0, 0, 0}, 1.0}};
    for (int i = 0; i < n1; ++i) poly = times_linear(poly, first);
    for (int i = 0; i < n2; ++i) poly = times_linear(poly, second);
    const int total = n1 + n2;
    std::vector<std::vector<double>> out(total + 1, std::vector<double>(total + 1, 0.0));
    const double input_norm = 1.0 / std::sqrt(factorial(n1) * factorial(n2));
    for (const auto& [m, coeff] : poly) {
        double amp = coeff * input_norm;
        for (int k : m) amp *= std::sqrt(factorial(k));
        out[m[0] + m[1]][m[2] + m[3]] += amp * amp;
    }
    return out;
}

std::vector<std::vector<double>> four_mode_counts(const std::vector<double>& p1, const std::vector<double>& p2,
                                                  double overlap) {
    const int size = static_cast<int>(p1.size() + p2.size());
    std::vector<std::vector<double>> out(size, std::vector<double>(size, 0.0));
    for (size_t a = 0; a < p1.size(); ++a) {
        for (size_t b = 0; b < p2.size(); ++b) {
            if (p1[a] * p2[b] == 0.0) continue;
            const auto part = four_mode_counts(static_cast<int>(a), static_cast<int>(b), overlap);
            for (size_t i = 0; i < part.size(); ++i) {
                for (size_t j = 0; j < part.size(); ++j) out[i][j] += p1[a] * p2[b] * part[i][j];
            }
        }
    }
    return out;
}

double hermite_psi(int n, double x) {
    double h_prev = 0.0, h = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = 2.0 * x * h - 2.0 * k * h_prev;
        h_prev = h;
        h = next;
    }
    const double norm = std::sqrt(std::pow(2.0, n) * factorial(n) * std::sqrt(M_PI));
    return h * std::exp(-0.5 * x * x) / norm;
}

Complex wigner_integral(int m, int n, double x, double p) {
    // (1/pi) * integral psi_m(x - y) psi_n(x + y) exp(2 i p y) dy
    const double step = 0.002, limit = 14.0;
    Complex sum = 0.0;
    for (double y = -limit; y <= limit; y += step) {
        sum += hermite_psi(m, x - y) * hermite_psi(n, x + y) * std::exp(Complex(0.0, 2.0 * p * y));
    }
    return sum * step / M_PI;
}

double log_negativity_svd(const TwoModeState& state, int transposed_mode) {
    const auto& c = state.cutoff();
    const int d = c.dim();
    CMatrix pt(c.two_mode_dim(), c.two_mode_dim());
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            for (int e = 0; e < d; ++e) {
                for (int f = 0; f < d; ++f) {
                    // <a b| rho^T |e f>
                    pt(c.index(a, b), c.index(e, f)) = transposed_mode == 1 ? state.rho()(c.index(e, b), c.index(a, f))
                                                                            : state.rho()(c.index(a, f), c.index(e, b));
                }
            }
        }
    }
    Eigen::JacobiSVD<CMatrix> svd(pt);
    return std::log2(svd.singularValues().sum());
}

double skellam_visibility(double mu, int n_max) {
    std::vector<double> p(n_max + 1);
    for (int n = 0; n <= n_max; ++n) p[n] = std::exp(-mu) * std::pow(mu, n) / factorial(n);
    double diff = 0.0, total = 0.0;
    for (int a = 0; a <= n_max; ++a) {
        for (int b = 0; b <= n_max; ++b) {
            diff += p[a] * p[b] * std::abs(a - b);
            total += p[a] * p[b] * (a + b);
        }
    }
    return diff / total;
}

double ks_pvalue(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    const double sn = std::sqrt(n);
    return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_pvalue_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

}  // namespace homsync::oracle
