#pragma once

// Backscatter device model: the piecewise-constant reflection waveform and
// its application to the signal impinging on the device. One BD symbol
// carries one bit over K OFDM symbol periods. Bit 0 reflects constantly;
// bit 1 flips the reflection sign halfway through every OFDM period, which
// is what the difference detector at the receiver keys on.

#include <cstdint>
#include <vector>

#include "ambc/types.hpp"

namespace ambc {

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
    std::int64_t r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) r += b;
    return r;
}

}  // namespace detail

// Reflection value at global sample n. The schedule is anchored at the
// device's own delay estimate dh_hat: data transmission begins
// warmup_symbols OFDM periods after that anchor, and each bit occupies k
// consecutive periods. Outside the data span the device reflects
// constantly (+1).
inline double bd_reflection_value(std::int64_t n, std::int64_t dh_hat, int warmup_symbols,
                                  int k, const std::vector<int>& bits, int symbol_len) {
    const std::int64_t rel = n - dh_hat;
    const std::int64_t m = detail::floor_div(rel, symbol_len);
    if (m < warmup_symbols) return 1.0;
    const std::int64_t bit_idx = (m - warmup_symbols) / k;
    if (bit_idx >= static_cast<std::int64_t>(bits.size())) return 1.0;
    if (bits[static_cast<std::size_t>(bit_idx)] == 0) return 1.0;
    const std::int64_t phase = detail::floor_mod(rel, symbol_len);
    return phase < symbol_len / 2 ? 1.0 : -1.0;
}

// The reflection waveform over a given timeline span, as a (real-valued)
// signal that can be multiplied against the incident one.
inline ComplexSignal bd_waveform(const OfdmConfig& cfg, const BdConfig& bd,
                                 const std::vector<int>& bits, std::int64_t dh_hat,
                                 int warmup_symbols, std::int64_t span_first,
                                 std::int64_t span_count) {
    cfg.validate();
    bd.validate();
    if (span_count <= 0) throw invariant_error("bd_waveform: empty span");
    if (warmup_symbols < 0) throw invariant_error("bd_waveform: negative warmup");
    for (int b : bits)
        if (b != 0 && b != 1) throw invariant_error("bd_waveform: bits must be 0 or 1");
    ComplexSignal x;
    x.start_index = span_first;
    x.samples.resize(static_cast<std::size_t>(span_count));
    const int p = cfg.symbol_len();
    for (std::int64_t i = 0; i < span_count; ++i) {
        x.samples[static_cast<std::size_t>(i)] =
            cplx(bd_reflection_value(span_first + i, dh_hat, warmup_symbols, bd.k, bits, p), 0.0);
    }
    return x;
}

// On-off reflection waveform for the benchmark scheme: one level (0 or 1)
// per BD symbol, each spanning k OFDM periods, anchored like bd_waveform.
// Outside the scheduled span the device reflects constantly.
inline ComplexSignal bd_level_waveform(const OfdmConfig& cfg, const BdConfig& bd,
                                       const std::vector<int>& levels, std::int64_t dh_hat,
                                       int warmup_symbols, std::int64_t span_first,
                                       std::int64_t span_count) {
    cfg.validate();
    bd.validate();
    if (span_count <= 0) throw invariant_error("bd_level_waveform: empty span");
    for (int l : levels)
        if (l != 0 && l != 1) throw invariant_error("bd_level_waveform: levels must be 0 or 1");
    ComplexSignal x;
    x.start_index = span_first;
    x.samples.resize(static_cast<std::size_t>(span_count));
    const int p = cfg.symbol_len();
    for (std::int64_t i = 0; i < span_count; ++i) {
        const std::int64_t m = detail::floor_div(span_first + i - dh_hat, p);
        double v = 1.0;
        if (m >= warmup_symbols) {
            const std::int64_t idx = (m - warmup_symbols) / bd.k;
            if (idx < static_cast<std::int64_t>(levels.size()))
                v = static_cast<double>(levels[static_cast<std::size_t>(idx)]);
        }
        x.samples[static_cast<std::size_t>(i)] = cplx(v, 0.0);
    }
    return x;
}

// Signal leaving the device: reflection coefficient alpha times the
// incident signal times the reflection waveform, sample by sample. The
// waveform must cover the incident signal's extent.
inline ComplexSignal backscatter(const ComplexSignal& incident, const ComplexSignal& reflection,
                                 cplx alpha) {
    if (incident.samples.empty()) throw invariant_error("backscatter: empty incident signal");
    if (!reflection.covers(incident.start_index, incident.end_index() - 1))
        throw alignment_error("backscatter: reflection waveform does not cover incident signal");
    ComplexSignal out;
    out.start_index = incident.start_index;
    out.samples.resize(incident.samples.size());
    for (std::size_t i = 0; i < incident.samples.size(); ++i) {
        const std::int64_t n = incident.start_index + static_cast<std::int64_t>(i);
        out.samples[i] = alpha * incident.samples[i] * reflection.at(n);
    }
    return out;
}

}  // namespace ambc
