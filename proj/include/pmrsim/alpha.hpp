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

#include <boost/rational.hpp>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pmrsim/errors.hpp"

namespace pmrsim {

using Rational = boost::rational<std::int64_t>;

inline bool is_power_of_two(std::int64_t k) { return k >= 1 && (k & (k - 1)) == 0; }

inline int log2_exact(std::int64_t k) {
    require(is_power_of_two(k), ErrorKind::Contract, "K = " + std::to_string(k) + " is not a power of two");
    int r = 0;
    while ((std::int64_t{1} << r) < k) ++r;
    return r;
}

/// Ordered subdivision indices k_1..k_q, each in [1, K].
struct KTuple {
    std::vector<int> k;
    int K = 1;

    std::size_t order() const { return k.size(); }

    void validate() const {
        require(is_power_of_two(K), ErrorKind::Contract, "KTuple: K must be a power of two");
        for (int v : k)
            require(v >= 1 && v <= K, ErrorKind::Contract,
                    "KTuple: index " + std::to_string(v) + " outside [1, " + std::to_string(K) + "]");
    }

    /// j_l = #{m : k_m = l}, l = 1..K (stored at l-1).
    std::vector<int> occupation() const {
        std::vector<int> j(static_cast<std::size_t>(K), 0);
        for (int v : k) ++j[static_cast<std::size_t>(v - 1)];
        return j;
    }

    /// Sigma_0..Sigma_K, Sigma_l = j_1 + ... + j_l.
    std::vector<int> partial_sums() const {
        const auto j = occupation();
        std::vector<int> sigma(static_cast<std::size_t>(K) + 1, 0);
        for (int l = 1; l <= K; ++l) sigma[l] = sigma[l - 1] + j[l - 1];
        return sigma;
    }
};

struct AlphaWorkspace {
    std::vector<int> sigma;          ///< Sigma_0..Sigma_K
    std::vector<Rational> alpha;     ///< membership-sum weights, s = 0..q
    std::vector<int> lmin;           ///< smallest l with s in [Sigma_l, Sigma_{l+1}]
    std::vector<int> lmax;           ///< largest l with s in [Sigma_{l-1}, Sigma_l]
    std::vector<Rational> alpha_minmax;  ///< the literal three-term min/max expression
    std::vector<bool> minmax_mismatch;
    bool any_mismatch = false;
};

/// Smallest l in [0, K-1] with Sigma_{l+1} >= s.
inline int alpha_lmin(const std::vector<int> &sigma, int s) {
    const int K = static_cast<int>(sigma.size()) - 1;
    for (int l = 0; l < K; ++l)
        if (sigma[l + 1] >= s) return l;
    return K - 1;
}

/// Largest l in [1, K] with Sigma_{l-1} <= s.
inline int alpha_lmax(const std::vector<int> &sigma, int s) {
    const int K = static_cast<int>(sigma.size()) - 1;
    for (int l = K; l >= 1; --l)
        if (sigma[l - 1] <= s) return l;
    return 1;
}

/// The weight of input s recovered from the first and last covering blocks:
/// a single covering block contributes 1/w, otherwise the two end blocks
/// contribute their reciprocals and every block strictly between them is
/// empty and contributes 1.
inline Rational alpha_from_bounds(const std::vector<int> &sigma, int s) {
    const int lo = alpha_lmin(sigma, s), hi = alpha_lmax(sigma, s);
    const Rational first(1, sigma[lo + 1] - sigma[lo] + 1);
    if (hi - lo == 1) return first;
    const Rational last(1, sigma[hi] - sigma[hi - 1] + 1);
    return first + last + Rational(hi - lo - 2);
}

/// alpha_s = Sum_{l : s in [Sigma_{l-1}, Sigma_l]} 1 / (Sigma_l - Sigma_{l-1} + 1), exact.
inline AlphaWorkspace alpha_coeffs(const KTuple &kt) {
    kt.validate();
    AlphaWorkspace w;
    w.sigma = kt.partial_sums();
    const int q = static_cast<int>(kt.order());
    w.alpha.assign(static_cast<std::size_t>(q) + 1, Rational(0));
    for (int l = 1; l <= kt.K; ++l) {
        const int a = w.sigma[l - 1], b = w.sigma[l];
        const Rational weight(1, b - a + 1);
        for (int s = a; s <= b; ++s) w.alpha[s] += weight;
    }
    for (int s = 0; s <= q; ++s) {
        const int lo = alpha_lmin(w.sigma, s), hi = alpha_lmax(w.sigma, s);
        w.lmin.push_back(lo);
        w.lmax.push_back(hi);
        const Rational literal = Rational(1, w.sigma[lo + 1] - w.sigma[lo] + 1) +
                                 Rational(1, w.sigma[hi] - w.sigma[hi - 1] + 1) + Rational(hi - lo - 2);
        w.alpha_minmax.push_back(literal);
        const bool mismatch = literal != w.alpha[s];
        w.minmax_mismatch.push_back(mismatch);
        w.any_mismatch = w.any_mismatch || mismatch;
    }
    return w;
}

/// alpha_s as doubles from the occupation numbers; hot path for tuple sums.
inline void alpha_values(const std::vector<int> &occupation, std::vector<double> &alpha) {
    int q = 0;
    for (int j : occupation) q += j;
    alpha.assign(static_cast<std::size_t>(q) + 1, 0.0);
    int start = 0;
    for (int j : occupation) {
        const double weight = 1.0 / (j + 1);
        for (int s = start; s <= start + j; ++s) alpha[s] += weight;
        start += j;
    }
}

/// Visits every tuple in [1, K]^q in lexicographic order.
template <class Fn>
void for_each_ktuple(int q, int K, Fn &&fn) {
    std::vector<int> k(static_cast<std::size_t>(q), 1);
    while (true) {
        fn(static_cast<const std::vector<int> &>(k));
        int pos = q - 1;
        while (pos >= 0 && k[pos] == K) k[pos--] = 1;
        if (pos < 0) return;
        ++k[pos];
    }
}

/// Visits every composition (j_1..j_K), j_l >= 0, Sum j_l = q, in lexicographic order.
template <class Fn>
void for_each_composition(int q, int K, Fn &&fn) {
    std::vector<int> j(static_cast<std::size_t>(K), 0);
    auto rec = [&](auto &&self, int pos, int remaining) -> void {
        if (pos == K - 1) {
            j[pos] = remaining;
            fn(static_cast<const std::vector<int> &>(j));
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            j[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, q);
}

}  // namespace pmrsim
