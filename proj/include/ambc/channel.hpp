#pragma once

// Multipath channel primitives: free-space path gain, Rayleigh CIR draws
// with an exponential power-delay profile, convolution against a timeline
// signal, and the discrete timing geometry implied by a set of links.

#include <cmath>
#include <vector>

#include "ambc/rng.hpp"
#include "ambc/types.hpp"

namespace ambc {

inline constexpr double speed_of_light = 299792458.0;

// Free-space power gain (lambda / 4 pi d)^2 at carrier frequency fc.
inline double pathloss_gain(double distance_m, double fc_hz) {
    if (distance_m <= 0.0) throw config_error("pathloss_gain: distance must be positive");
    if (fc_hz <= 0.0) throw config_error("pathloss_gain: carrier frequency must be positive");
    const double x = speed_of_light / (4.0 * M_PI * distance_m * fc_hz);
    return x * x;
}

// Rayleigh-faded CIR: num_taps i.i.d. complex Gaussian taps whose expected
// powers follow exp(-decay * i), normalized so the expected total power is
// mean_power.
inline Cir sample_rayleigh_cir(Rng& rng, int num_taps, double decay, double mean_power,
                               int delay) {
    if (num_taps < 1) throw config_error("sample_rayleigh_cir: need at least one tap");
    if (mean_power <= 0.0) throw config_error("sample_rayleigh_cir: mean_power must be positive");
    if (delay < 0) throw config_error("sample_rayleigh_cir: negative delay");
    double norm = 0.0;
    for (int i = 0; i < num_taps; ++i) norm += std::exp(-decay * i);
    Cir cir;
    cir.delay = delay;
    cir.taps.resize(static_cast<std::size_t>(num_taps));
    for (int i = 0; i < num_taps; ++i) {
        const double var = mean_power * std::exp(-decay * i) / norm;
        cir.taps[static_cast<std::size_t>(i)] = rng.next_cscg(var);
    }
    return cir;
}

// Linear convolution of a timeline signal with a CIR. The propagation delay
// shifts the output's start index; the tail extends the extent by
// (tap count - 1) samples.
inline ComplexSignal apply_channel(const ComplexSignal& in, const Cir& cir) {
    cir.validate();
    if (in.samples.empty()) throw invariant_error("apply_channel: empty input signal");
    const std::size_t n = in.samples.size();
    const std::size_t t = cir.taps.size();
    ComplexSignal out;
    out.start_index = in.start_index + cir.delay;
    out.samples.assign(n + t - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        const cplx x = in.samples[i];
        if (x == cplx{0.0, 0.0}) continue;
        for (std::size_t k = 0; k < t; ++k) out.samples[i + k] += x * cir.taps[k];
    }
    return out;
}

// Composite two-hop convolution used for the backscatter path when only the
// CIRs are at hand.
inline Cir compose_cirs(const Cir& a, const Cir& b) {
    a.validate();
    b.validate();
    Cir out;
    out.delay = a.delay + b.delay;
    out.taps.assign(a.taps.size() + b.taps.size() - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.taps.size(); ++i)
        for (std::size_t k = 0; k < b.taps.size(); ++k) out.taps[i + k] += a.taps[i] * b.taps[k];
    return out;
}

// Timing geometry from delays and tap counts. The composite backscatter
// path has tap count tau_h + tau_g - 1 (convolution), so its total spread
// is dh + dg + tau_h + tau_g - 1.
inline ChannelGeometry derive_geometry(const OfdmConfig& cfg, int df, int tau_f, int dh,
                                       int tau_h, int dg, int tau_g) {
    if (tau_f < 1 || tau_h < 1 || tau_g < 1)
        throw config_error("derive_geometry: every link needs at least one tap");
    ChannelGeometry geo;
    geo.df = df;
    geo.dh = dh;
    geo.dg = dg;
    geo.db = dh + dg;
    geo.lf = df + tau_f;
    geo.lh = dh + tau_h;
    geo.lg = dg + tau_g;
    geo.lb = geo.db + tau_h + tau_g - 1;
    geo.d = std::min(geo.df, geo.db);
    geo.l = std::max(geo.lf, geo.lb);
    geo.j = cfg.nc + geo.d - geo.l + 1;
    geo.validate();
    return geo;
}

// Geometry read off a concrete channel draw.
inline ChannelGeometry derive_geometry(const OfdmConfig& cfg, const Cir& f, const Cir& h,
                                       const Cir& g) {
    return derive_geometry(cfg, f.delay, static_cast<int>(f.taps.size()), h.delay,
                           static_cast<int>(h.taps.size()), g.delay,
                           static_cast<int>(g.taps.size()));
}

}  // namespace ambc
