#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <vector>

#include "qclab/errors.hpp"

namespace qclab::fft {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

// Table of e^{-2 pi i k / n} for k < n/2, built once per transform size.
inline const std::vector<cplx>& roots(std::size_t n) {
    static std::map<std::size_t, std::vector<cplx>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(ang), std::sin(ang)};
    }
    return cache.emplace(n, std::move(w)).first->second;
}

inline void bit_reverse(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

} // namespace detail

/// In-place radix-2 transform. Forward: X_k = sum_j x_j e^{-2 pi i jk/n};
/// inverse applies the conjugate kernel and the 1/n factor.
inline void transform(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw config_error("fft: size must be a power of two");
    if (n == 1) return;
    detail::bit_reverse(a);
    const auto& w = detail::roots(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx tw = w[k * stride];
                if (inverse) tw = std::conj(tw);
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * tw;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

inline void forward(std::vector<cplx>& a) { transform(a, false); }
inline void inverse(std::vector<cplx>& a) { transform(a, true); }

/// Angular wavenumber of FFT bin j on a grid of n points with spacing dx,
/// in the standard order 0, 1, ..., n/2-1, -n/2, ..., -1.
inline double wavenumber(std::size_t j, std::size_t n, double dx) {
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
    auto sj = static_cast<std::ptrdiff_t>(j);
    auto half = static_cast<std::ptrdiff_t>(n / 2);
    if (sj >= half) sj -= static_cast<std::ptrdiff_t>(n);
    return dk * static_cast<double>(sj);
}

} // namespace qclab::fft
