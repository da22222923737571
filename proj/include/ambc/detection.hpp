#pragma once

// Receiver-side detection. The proposed detector differences each received
// sample against its cyclic-prefix partner one FFT length later: inside the
// window [l-1, nc+d-1] of every OFDM period the carrier and the direct link
// cancel, leaving only the BD's sign modulation plus noise. The normalized
// window power pooled over a BD symbol is the test statistic. A
// conventional energy detector (on-off keying with differential encoding)
// is included as the benchmark.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ambc/types.hpp"

namespace ambc {

// Detector window description derived from geometry. In genie mode the true
// d and l are used; estimated mode passes d_hat and l_hat instead.
inline DetectorConfig make_detector_config(const OfdmConfig& cfg, int d, int l, int k) {
    DetectorConfig det;
    det.window_first = l - 1;
    det.window_last = cfg.nc + d - 1;
    det.j = det.window_last - det.window_first + 1;
    det.k = k;
    det.validate();
    return det;
}

// Pooled squared difference over one BD symbol (k OFDM periods), divided by
// j*k samples and by the difference-noise power sigma_v2. symbol_start is
// the global index of the BD symbol's first OFDM period boundary.
inline double test_statistic(const ComplexSignal& y, const OfdmConfig& cfg,
                             const DetectorConfig& det, std::int64_t symbol_start,
                             double sigma_v2) {
    if (sigma_v2 <= 0.0) throw invariant_error("test_statistic: sigma_v2 must be positive");
    const int p = cfg.symbol_len();
    const std::int64_t first = symbol_start + det.window_first;
    const std::int64_t last =
        symbol_start + static_cast<std::int64_t>(det.k - 1) * p + det.window_last + cfg.n;
    if (!y.covers(first, last))
        throw alignment_error("test_statistic: signal does not cover the detection windows");
    double acc = 0.0;
    for (int k = 0; k < det.k; ++k) {
        const std::int64_t base = symbol_start + static_cast<std::int64_t>(k) * p;
        const std::size_t off = static_cast<std::size_t>(base + det.window_first - y.start_index);
        for (int n = 0; n < det.j; ++n) {
            const cplx z = y.samples[off + static_cast<std::size_t>(n)] -
                           y.samples[off + static_cast<std::size_t>(n) + static_cast<std::size_t>(cfg.n)];
            acc += std::norm(z);
        }
    }
    return acc / (static_cast<double>(det.pooled_j()) * sigma_v2);
}

// Threshold test: statistic above epsilon decides bit 1.
inline int ml_detect(double statistic, double epsilon) {
    return statistic > epsilon ? 1 : 0;
}

// Weighted sum of per-antenna statistics.
inline double combine_statistics(const std::vector<double>& stats, const CombinerWeights& w) {
    w.validate();
    if (stats.size() != w.theta.size())
        throw invariant_error("combine_statistics: statistic/weight count mismatch");
    double acc = 0.0;
    for (std::size_t m = 0; m < stats.size(); ++m) acc += w.theta[m] * stats[m];
    return acc;
}

// Equal-gain weights: 1/sqrt(M) each.
inline CombinerWeights egc_weights(int m) {
    if (m < 1) throw invariant_error("egc_weights: need at least one antenna");
    CombinerWeights w;
    w.theta.assign(static_cast<std::size_t>(m), 1.0 / std::sqrt(static_cast<double>(m)));
    return w;
}

// Maximum-ratio-style weights: proportional to the per-antenna detection
// SNR, L2-normalized. Degenerates to equal gain if every gamma is zero.
inline CombinerWeights mrc_weights(const std::vector<double>& gammas) {
    if (gammas.empty()) throw invariant_error("mrc_weights: need at least one antenna");
    double norm2 = 0.0;
    for (double g : gammas) {
        if (g < 0.0) throw invariant_error("mrc_weights: negative gamma");
        norm2 += g * g;
    }
    if (norm2 == 0.0) return egc_weights(static_cast<int>(gammas.size()));
    CombinerWeights w;
    w.theta.resize(gammas.size());
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t m = 0; m < gammas.size(); ++m) w.theta[m] = gammas[m] * inv;
    return w;
}

// Selection combining: all weight on the strongest antenna, ties broken
// toward the lowest index.
inline CombinerWeights sc_weights(const std::vector<double>& gammas) {
    if (gammas.empty()) throw invariant_error("sc_weights: need at least one antenna");
    std::size_t best = 0;
    for (std::size_t m = 1; m < gammas.size(); ++m)
        if (gammas[m] > gammas[best]) best = m;
    CombinerWeights w;
    w.theta.assign(gammas.size(), 0.0);
    w.theta[best] = 1.0;
    return w;
}

// Benchmark energy detector pieces. The BD signals by switching its
// reflection on and off per BD symbol; information is carried in level
// changes (differential), so the receiver decides a level per BD symbol
// and XORs consecutive levels.

// Mean received power over one BD symbol.
inline double energy_level(const ComplexSignal& y, const OfdmConfig& cfg, int k,
                           std::int64_t symbol_start) {
    const std::int64_t count = static_cast<std::int64_t>(k) * cfg.symbol_len();
    if (!y.covers(symbol_start, symbol_start + count - 1))
        throw alignment_error("energy_level: signal does not cover the BD symbol");
    const std::size_t off = static_cast<std::size_t>(symbol_start - y.start_index);
    double acc = 0.0;
    for (std::int64_t i = 0; i < count; ++i)
        acc += std::norm(y.samples[off + static_cast<std::size_t>(i)]);
    return acc / static_cast<double>(count);
}

// Decision threshold trained from known on/off symbols: midpoint of the two
// level means.
inline double benchmark_threshold(const std::vector<double>& on_levels,
                                  const std::vector<double>& off_levels) {
    if (on_levels.empty() || off_levels.empty())
        throw invariant_error("benchmark_threshold: need training levels for both states");
    double on = 0.0, off = 0.0;
    for (double v : on_levels) on += v;
    for (double v : off_levels) off += v;
    on /= static_cast<double>(on_levels.size());
    off /= static_cast<double>(off_levels.size());
    return 0.5 * (on + off);
}

// Differential encoding of data bits into on/off states, continuing from
// the given initial state.
inline std::vector<int> differential_encode(const std::vector<int>& bits, int initial_state) {
    std::vector<int> states;
    states.reserve(bits.size());
    int state = initial_state;
    for (int b : bits) {
        state ^= b;
        states.push_back(state);
    }
    return states;
}

// Bits back out of detected levels; prev_level is the level decided for the
// symbol immediately before the first data symbol.
inline std::vector<int> differential_decode(const std::vector<int>& levels, int prev_level) {
    std::vector<int> bits;
    bits.reserve(levels.size());
    int prev = prev_level;
    for (int l : levels) {
        bits.push_back(l ^ prev);
        prev = l;
    }
    return bits;
}

}  // namespace ambc
