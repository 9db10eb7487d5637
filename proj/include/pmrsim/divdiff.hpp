// Copyright 2026 The pmrsim Authors
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

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pmrsim/alpha.hpp"
#include "pmrsim/dense.hpp"
#include "pmrsim/errors.hpp"

namespace pmrsim {

using cplx = std::complex<double>;

/// Inputs x_0..x_q and time parameter tau of e^{-i tau [x_0, ..., x_q]}.
struct DdInput {
    std::vector<double> inputs;
    double tau = 1.0;

    int order() const { return static_cast<int>(inputs.size()) - 1; }

    void validate() const {
        require(!inputs.empty(), ErrorKind::Contract, "divided difference needs at least one input");
        for (double x : inputs) require(std::isfinite(x), ErrorKind::Contract, "non-finite divided-difference input");
        require(std::isfinite(tau), ErrorKind::Contract, "non-finite tau");
    }
};

inline constexpr std::uint64_t kDefaultDdBudget = 10'000'000;
/// |tau| * (spread + 1) above which the exact evaluation refuses.
inline constexpr double kDdMaxScaledSpan = 1e8;

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

/// (-i)^q
inline cplx minus_i_pow(int q) {
    static constexpr cplx table[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return table[q & 3];
}

/// C(n, k) as a double; exact for the small arguments used here.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

/// e^{-i tau [x_0..x_q]} as the (0, q) entry of the exponential of the
/// bidiagonal matrix tau (-i diag(x - m) + superdiag(1)), m the midpoint,
/// by scaling and squaring a truncated Taylor series.
inline cplx dd_exp_exact(const DdInput &in) {
    in.validate();
    const int q = in.order();
    const auto [lo, hi] = std::minmax_element(in.inputs.begin(), in.inputs.end());
    const double mid = 0.5 * (*lo + *hi);
    const double tau = in.tau;
    if (q == 0) return std::exp(cplx(0.0, -tau * in.inputs[0]));
    if (tau == 0.0) return 0.0;
    const double scaled = std::abs(tau) * (0.5 * (*hi - *lo) + 1.0);
    require(scaled <= kDdMaxScaledSpan, ErrorKind::Budget,
            "dd_exp_exact: |tau| * spread = " + std::to_string(scaled) + " outside the supported range");

    const int dim = q + 1;
    Matrix b = Matrix::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        b(j, j) = cplx(0.0, -tau * (in.inputs[j] - mid));
        if (j + 1 < dim) b(j, j + 1) = tau;
    }
    int squarings = 0;
    if (scaled > 0.25) squarings = static_cast<int>(std::ceil(std::log2(scaled / 0.25)));
    b /= std::ldexp(1.0, squarings);

    // exp(b) is upper triangular; q + 20 Taylor terms reach full relative
    // accuracy on the (0, q) entry once ||b|| <= 1/4.
    Matrix term = Matrix::Identity(dim, dim);
    Matrix acc = term;
    for (int k = 1; k <= q + 20; ++k) {
        term = (term * b) / static_cast<double>(k);
        acc += term;
    }
    for (int s = 0; s < squarings; ++s) acc = acc * acc;
    return std::exp(cplx(0.0, -tau * mid)) * minus_i_pow(q) * acc(0, q);
}

/// The textbook ratio form Sum_j e^{-i tau x_j} / Prod_{k != j}(x_j - x_k).
/// Only meaningful for well-separated distinct inputs.
inline cplx dd_exp_ratio_form(const DdInput &in) {
    in.validate();
    const int q = in.order();
    cplx sum{};
    for (int j = 0; j <= q; ++j) {
        double denom = 1.0;
        for (int k = 0; k <= q; ++k) {
            if (k == j) continue;
            const double d = in.inputs[j] - in.inputs[k];
            require(d != 0.0, ErrorKind::Contract, "ratio form requires distinct inputs");
            denom *= d;
        }
        sum += std::exp(cplx(0.0, -in.tau * in.inputs[j])) / denom;
    }
    return sum;
}

/// High-precision evaluation of the Taylor form
/// Sum_m (-i tau)^{q+m} / (q+m)! h_m(x_0..x_q), h_m the complete homogeneous
/// symmetric polynomial. Independent of dd_exp_exact; oracle scale q <= 12.
template <unsigned Digits = 40>
cplx dd_exp_oracle(const DdInput &in) {
    using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;
    in.validate();
    const int q = in.order();
    require(q <= 12, ErrorKind::Budget, "dd_exp_oracle: order above oracle scale (q <= 12)");
    double amax = 0.0;
    for (double x : in.inputs) amax = std::max(amax, std::abs(x));
    const double tau = std::abs(in.tau);

    // Term bound tau^{q+m}/(q+m)! C(q+m, m) amax^m; stop once it is far below 10^-Digits.
    int terms = 1;
    {
        const double target = -static_cast<double>(Digits) * std::log(10.0) - 10.0;
        for (int m = 1; m < 100000; ++m) {
            const double lg = (q + m) * std::log(std::max(tau, 1e-300)) - std::lgamma(q + m + 1.0) +
                              std::lgamma(q + m + 1.0) - std::lgamma(q + 1.0) - std::lgamma(m + 1.0) +
                              m * std::log(std::max(amax, 1e-300));
            terms = m + 1;
            if (m > tau * amax * (q + 1) && lg < target) break;
        }
    }

    std::vector<Real> h(static_cast<std::size_t>(terms), Real(0));
    h[0] = 1;
    for (double x : in.inputs) {
        const Real xv(x);
        for (int m = 1; m < terms; ++m) h[m] += xv * h[m - 1];
    }

    // (-i tau)^n / n!, tracked as real magnitude and quarter-turn phase.
    Real re(0), im(0);
    Real coef(1);
    const Real tv(in.tau);
    for (int n = 1; n <= q; ++n) coef = coef * tv / n;
    for (int m = 0; m < terms; ++m) {
        const int n = q + m;
        if (m > 0) coef = coef * tv / n;
        const Real v = coef * h[m];
        switch (n & 3) {
            case 0: re += v; break;
            case 1: im -= v; break;
            case 2: re -= v; break;
            case 3: im += v; break;
        }
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

/// (-i tau)^q / q! e^{-i tau mean(x)}
inline cplx mean_phase_approx(const DdInput &in) {
    in.validate();
    const int q = in.order();
    const double mean = std::accumulate(in.inputs.begin(), in.inputs.end(), 0.0) / (q + 1);
    return std::pow(in.tau, q) / factorial(q) * minus_i_pow(q) * std::exp(cplx(0.0, -in.tau * mean));
}

namespace detail {

inline void check_split_budget(int q, int K, std::uint64_t budget, const char *what) {
    require(K >= 1, ErrorKind::Contract, std::string(what) + ": K must be >= 1");
    const double count = binomial(q + K - 1, K - 1);
    require(count <= static_cast<double>(budget), ErrorKind::Budget,
            std::string(what) + ": " + std::to_string(static_cast<std::uint64_t>(count)) +
                " ordered split points exceed the budget " + std::to_string(budget));
}

/// Visits 0 <= j_1 <= ... <= j_{K-1} <= q as the boundary list (0, j_1, ..., j_{K-1}, q).
template <class Fn>
void for_each_split(int q, int K, Fn &&fn) {
    std::vector<int> bounds(static_cast<std::size_t>(K) + 1, 0);
    bounds[K] = q;
    auto rec = [&](auto &&self, int pos, int lo) -> void {
        if (pos == K) {
            fn(static_cast<const std::vector<int> &>(bounds));
            return;
        }
        for (int v = lo; v <= q; ++v) {
            bounds[pos] = v;
            self(self, pos + 1, v);
        }
    };
    rec(rec, 1, 0);
}

}  // namespace detail

/// Sum over 0 <= j_1 <= ... <= j_{K-1} <= q of the product of the K block
/// divided differences at tau/K, blocks sharing their end points.
inline cplx leibniz_kfold_split(const DdInput &in, int K, std::uint64_t budget = kDefaultDdBudget) {
    in.validate();
    const int q = in.order();
    detail::check_split_budget(q, K, budget, "leibniz_kfold_split");
    if (K == 1) return dd_exp_exact(in);
    const double delta = in.tau / K;
    // Block values over [a, b] are reused across splits.
    std::vector<cplx> block(static_cast<std::size_t>((q + 1) * (q + 1)));
    for (int a = 0; a <= q; ++a)
        for (int b = a; b <= q; ++b) {
            DdInput sub{{in.inputs.begin() + a, in.inputs.begin() + b + 1}, delta};
            block[a * (q + 1) + b] = dd_exp_exact(sub);
        }
    cplx sum{};
    detail::for_each_split(q, K, [&](const std::vector<int> &bd) {
        cplx prod = 1.0;
        for (int l = 1; l <= K; ++l) prod *= block[bd[l - 1] * (q + 1) + bd[l]];
        sum += prod;
    });
    return sum;
}

/// The K-block approximation as an ordered-partition sum:
/// (-i delta)^q / q! Sum_j multinomial(q; j) Prod_l e^{-i delta xbar_l}.
inline cplx ehat_partition(const DdInput &in, int K, std::uint64_t budget = kDefaultDdBudget) {
    in.validate();
    const int q = in.order();
    detail::check_split_budget(q, K, budget, "ehat_partition");
    const double delta = in.tau / K;
    std::vector<double> prefix(static_cast<std::size_t>(q) + 2, 0.0);
    for (int s = 0; s <= q; ++s) prefix[s + 1] = prefix[s] + in.inputs[s];
    const double qfact = factorial(q);
    cplx sum{};
    for_each_composition(q, K, [&](const std::vector<int> &j) {
        double multinomial = qfact;
        double phase = 0.0;
        int start = 0;
        for (int jl : j) {
            multinomial /= factorial(jl);
            phase += (prefix[start + jl + 1] - prefix[start]) / (jl + 1);
            start += jl;
        }
        sum += std::round(multinomial) * std::exp(cplx(0.0, -delta * phase));
    });
    return std::pow(delta, q) / qfact * minus_i_pow(q) * sum;
}

/// The K-block approximation as a sum of phases over all K^q index tuples:
/// (-i delta)^q / q! Sum_k e^{-i delta Sum_s alpha_s(k) x_s}.
inline cplx ehat_ktuple(const DdInput &in, int K, std::uint64_t budget = kDefaultDdBudget) {
    in.validate();
    const int q = in.order();
    require(K >= 1, ErrorKind::Contract, "ehat_ktuple: K must be >= 1");
    const double count = std::pow(static_cast<double>(K), q);
    require(count <= static_cast<double>(budget), ErrorKind::Budget,
            "ehat_ktuple: K^q = " + std::to_string(static_cast<std::uint64_t>(count)) + " tuples exceed the budget " +
                std::to_string(budget));
    const double delta = in.tau / K;
    std::vector<int> occ(static_cast<std::size_t>(K));
    std::vector<double> alpha;
    cplx sum{};
    for_each_ktuple(q, K, [&](const std::vector<int> &k) {
        std::fill(occ.begin(), occ.end(), 0);
        for (int v : k) ++occ[v - 1];
        alpha_values(occ, alpha);
        double phase = 0.0;
        for (int s = 0; s <= q; ++s) phase += alpha[s] * in.inputs[s];
        sum += std::exp(cplx(0.0, -delta * phase));
    });
    return std::pow(delta, q) / factorial(q) * minus_i_pow(q) * sum;
}

/// (dt^q / q!) (dt dE / 2K)^2
inline double dd_error_bound(int q, double dt, double dE, int K) {
    const double theta = dt * dE / (2.0 * K);
    return std::pow(dt, q) / factorial(q) * theta * theta;
}

/// The variant with K^2 inside the square, (dt^q / q!) (dt dE / 2K^2)^2, for reporting.
inline double dd_error_bound_k2(int q, double dt, double dE, int K) {
    const double theta = dt * dE / (2.0 * K * K);
    return std::pow(dt, q) / factorial(q) * theta * theta;
}

struct WorstCase {
    cplx exact;
    cplx ehat;
    double ratio;  ///< exact / ehat = (sin theta / theta)^q, theta = dt dE / 2K
};

/// Closed forms at the equally spaced inputs 0, dE, ..., q dE.
inline WorstCase worst_case_closed_forms(int q, double dt, double dE, int K) {
    require(dE > 0.0, ErrorKind::Contract, "worst_case_closed_forms: dE must be positive");
    const double half = dt * dE / 2.0;
    const double theta = half / K;
    const cplx rot = std::exp(cplx(0.0, -half));
    const cplx exact_base = cplx(0.0, -2.0) * rot / dE * std::sin(half);
    const cplx ehat_base = cplx(0.0, -2.0) * dt * rot / (2.0 * K * std::sin(theta)) * std::sin(half);
    const double qf = factorial(q);
    return {std::pow(exact_base, q) / qf, std::pow(ehat_base, q) / qf, std::pow(std::sin(theta) / theta, q)};
}

/// Inputs x_0 = 0, x_{j+1} = x_j + g_j with g_j uniform in [-dE, dE].
inline DdInput random_gap_input(int q, double dt, double dE, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> gap(-dE, dE);
    DdInput in;
    in.tau = dt;
    in.inputs.push_back(0.0);
    for (int j = 0; j < q; ++j) in.inputs.push_back(in.inputs.back() + gap(rng));
    return in;
}

struct BoundSweepRow {
    int q = 0;
    int K = 1;
    int samples = 0;
    double max_error = 0.0;   ///< max |exact - ehat| over random inputs
    double bound = 0.0;       ///< dd_error_bound
    double max_ratio = 0.0;   ///< max error / bound
    double worst_case = 0.0;  ///< |exact - ehat| at equally spaced inputs
    bool holds = true;        ///< max_error <= bound
};

/// Random-input check of the divided-difference bound for q = 0..q_max and each K.
inline std::vector<BoundSweepRow> verify_dd_bound(int q_max, double dt, double dE, const std::vector<int> &Ks, int samples,
                                                  std::uint64_t seed, std::uint64_t budget = kDefaultDdBudget) {
    require(q_max >= 0 && samples >= 1, ErrorKind::Contract, "verify_dd_bound: need q_max >= 0 and samples >= 1");
    require(dt > 0.0 && dE > 0.0, ErrorKind::Contract, "verify_dd_bound: dt and dE must be positive");
    std::mt19937_64 rng(seed);
    std::vector<BoundSweepRow> rows;
    for (int K : Ks) {
        require(is_power_of_two(K), ErrorKind::Contract, "verify_dd_bound: K must be a power of two");
        for (int q = 0; q <= q_max; ++q) {
            BoundSweepRow row;
            row.q = q;
            row.K = K;
            row.samples = samples;
            row.bound = dd_error_bound(q, dt, dE, K);
            const WorstCase wc = worst_case_closed_forms(q, dt, dE, K);
            row.worst_case = std::abs(wc.exact - wc.ehat);
            for (int i = 0; i < samples; ++i) {
                const DdInput in = random_gap_input(q, dt, dE, rng);
                const double err = std::abs(dd_exp_exact(in) - ehat_ktuple(in, K, budget));
                row.max_error = std::max(row.max_error, err);
            }
            row.max_ratio = row.bound > 0.0 ? row.max_error / row.bound : 0.0;
            row.holds = row.max_error <= row.bound;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace pmrsim
