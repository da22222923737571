#pragma once

// OFDM source model: random frequency-domain symbols, unitary IDFT, cyclic
// prefix. With i.i.d. complex Gaussian subcarrier symbols the time-domain
// body samples are again i.i.d. complex Gaussian, which the closed-form
// analyses rely on.

#include <cmath>
#include <vector>

#include "ambc/rng.hpp"
#include "ambc/types.hpp"

namespace ambc {

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform. sign = -1 gives the forward DFT,
// sign = +1 the inverse (both unnormalized).
inline void fft_radix2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Direct O(n^2) transform for sizes that are not a power of two.
inline std::vector<cplx> dft_direct(const std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double ang =
                sign * 2.0 * M_PI * static_cast<double>(k * t % n) / static_cast<double>(n);
            acc += a[t] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace detail

// Unitary DFT (1/sqrt(n) scaling both directions).
inline std::vector<cplx> dft_unitary(std::vector<cplx> a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0) throw invariant_error("dft_unitary: empty input");
    const int sign = inverse ? +1 : -1;
    if (detail::is_pow2(n)) {
        detail::fft_radix2(a, sign);
    } else {
        a = detail::dft_direct(a, sign);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : a) x *= scale;
    return a;
}

// One OFDM symbol body (N samples, no prefix) from i.i.d. unit-variance
// complex Gaussian subcarrier symbols, scaled to average power p.
inline std::vector<cplx> ofdm_symbol_body(const OfdmConfig& cfg, Rng& rng) {
    std::vector<cplx> freq(static_cast<std::size_t>(cfg.n));
    for (auto& d : freq) d = rng.next_cscg(1.0);
    std::vector<cplx> body = dft_unitary(std::move(freq), true);
    const double amp = std::sqrt(cfg.p);
    for (auto& x : body) x *= amp;
    return body;
}

// num_symbols consecutive OFDM symbols with cyclic prefixes, starting at
// global index 0: each symbol occupies N + Nc samples, prefix first.
inline ComplexSignal generate_ofdm_frame(const OfdmConfig& cfg, int num_symbols, Rng& rng) {
    cfg.validate();
    if (num_symbols < 1) throw invariant_error("generate_ofdm_frame: need at least one symbol");
    ComplexSignal out;
    out.start_index = 0;
    out.samples.reserve(static_cast<std::size_t>(num_symbols) * cfg.symbol_len());
    for (int s = 0; s < num_symbols; ++s) {
        const std::vector<cplx> body = ofdm_symbol_body(cfg, rng);
        for (int i = cfg.n - cfg.nc; i < cfg.n; ++i) out.samples.push_back(body[i]);
        out.samples.insert(out.samples.end(), body.begin(), body.end());
    }
    return out;
}

}  // namespace ambc
