#pragma once

// Monte Carlo experiment engine: end-to-end trial pipeline (channels ->
// carrier -> backscatter -> noise -> sync -> detection), parameter sweeps
// with analytic overlays, and the conventional energy detector benchmark.
// Every trial derives its own random stream from (seed, point, trial), so
// sweep results are bit-identical regardless of execution order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ambc/analysis.hpp"
#include "ambc/bd.hpp"
#include "ambc/channel.hpp"
#include "ambc/detection.hpp"
#include "ambc/ofdm.hpp"
#include "ambc/rng.hpp"
#include "ambc/sync.hpp"
#include "ambc/types.hpp"

namespace ambc {

inline constexpr const char* version_string = "0.1.0";

// Full experiment description. Defaults reproduce the reference setup:
// N=512, Nc=64, fs=10 MHz, fc=900 MHz, BD at 0.5 m from the receiver,
// alpha=0.3+0.4j, direct link 20 dB above the backscatter link, delays
// Df=Dh=16, Dg=0 and tap counts 4/6/1 with decay-1 exponential profiles.
struct ExperimentConfig {
    OfdmConfig ofdm;
    BdConfig bd;
    int m = 1;  // receive antennas

    // Geometry: integer delays and tap counts per link.
    int df = 16;
    int tau_f = 4;
    int dh = 16;
    int tau_h = 6;
    int dg = 0;
    int tau_g = 1;
    double decay = 1.0;  // exponential power-delay profile rate

    // Link budget.
    double fc_hz = 900e6;
    double d_rd_m = 0.5;            // BD-to-receiver distance
    double direct_margin_db = 20.0; // gamma_d above gamma
    double bd_snr_margin_db = 20.0; // BD receive SNR above gamma (estimated mode)

    // Sweep grids and anchors.
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30};
    std::vector<double> distance_grid_m{0.5, 1.0, 1.4, 2.0, 4.0, 8.0, 14.0};
    double ref_snr_db = 34.5;     // distance sweep: average SNR at ref_distance_m
    double ref_distance_m = 0.5;

    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string detector = "proposed";   // proposed | benchmark
    std::string combiner = "egc";        // optimal | mrc | egc | sc
    std::string sync_mode = "genie";     // genie | estimated
    int k1 = 1;                          // BD timing-sync symbols
    int k2 = 1;                          // receiver training symbols
    double epsilon_spread = 1.5;         // residual-floor factor
    std::string mse_estimator = "spread";  // spread | delay_bd | delay_rx
    std::int64_t analytic_draws = 4000000;

    void validate() const {
        ofdm.validate();
        bd.validate();
        if (m < 1) throw config_error("ExperimentConfig: M must be >= 1");
        if (trials < 1) throw config_error("ExperimentConfig: trials must be >= 1");
        if (snr_grid_db.empty()) throw config_error("ExperimentConfig: empty SNR grid");
        if (distance_grid_m.empty()) throw config_error("ExperimentConfig: empty distance grid");
        for (double d : distance_grid_m)
            if (d <= 0.0) throw config_error("ExperimentConfig: distances must be positive");
        if (d_rd_m <= 0.0 || ref_distance_m <= 0.0)
            throw config_error("ExperimentConfig: distances must be positive");
        if (fc_hz <= 0.0) throw config_error("ExperimentConfig: fc must be positive");
        if (decay < 0.0) throw config_error("ExperimentConfig: negative decay");
        if (k1 < 1 || k2 < 1) throw config_error("ExperimentConfig: K1, K2 must be >= 1");
        if (epsilon_spread <= 1.0)
            throw config_error("ExperimentConfig: spread threshold factor must exceed 1");
        if (detector != "proposed" && detector != "benchmark")
            throw config_error("ExperimentConfig: unknown detector");
        if (combiner != "optimal" && combiner != "mrc" && combiner != "egc" && combiner != "sc")
            throw config_error("ExperimentConfig: unknown combiner");
        if (sync_mode != "genie" && sync_mode != "estimated")
            throw config_error("ExperimentConfig: unknown sync mode");
        if (mse_estimator != "spread" && mse_estimator != "delay_bd" &&
            mse_estimator != "delay_rx")
            throw config_error("ExperimentConfig: unknown mse estimator");
        if (analytic_draws < 0) throw config_error("ExperimentConfig: negative analytic draws");
        geometry();  // throws if the cancellation window would be empty
        // The detector needs every window sample inside the first half of
        // the BD's (delayed) modulation period and its lag-N partner in the
        // second half.
        const int p = ofdm.symbol_len();
        const ChannelGeometry geo = geometry();
        if (geo.d > dh)
            throw config_error("ExperimentConfig: min path delay exceeds BD delay; "
                               "window partners would cross modulation boundaries");
        if (ofdm.nc + geo.d - 1 - dh >= p / 2)
            throw config_error("ExperimentConfig: detection window crosses the BD flip point");
    }

    ChannelGeometry geometry() const {
        return derive_geometry(ofdm, df, tau_f, dh, tau_h, dg, tau_g);
    }

    // Mean BD-to-receiver link gain at a given distance.
    double g_mean_power(double distance_m) const { return pathloss_gain(distance_m, fc_hz); }

    // Mean total direct-link gain: a configurable margin above twice the
    // backscatter reflection budget, anchored at the given BD distance.
    double f_mean_power(double anchor_distance_m) const {
        const double margin = std::pow(10.0, direct_margin_db / 10.0);
        return margin * 2.0 * std::norm(bd.alpha) * g_mean_power(anchor_distance_m);
    }

    // Noise power making the ensemble-average detection SNR equal
    // snr_db when the BD sits at the given distance (unit mean h gain).
    double sigma2_for_snr(double snr_db, double distance_m) const {
        const double snr = std::pow(10.0, snr_db / 10.0);
        return 2.0 * ofdm.p * std::norm(bd.alpha) * g_mean_power(distance_m) / snr;
    }
};

namespace detail {

// Channel draw for one trial. Order is fixed (h, then f_m, g_m per
// antenna) so a given stream always yields the same channels.
inline ChannelSet draw_channels(const ExperimentConfig& cfg, Rng& rng, double g_power,
                                double f_power) {
    ChannelSet ch;
    ch.h = sample_rayleigh_cir(rng, cfg.tau_h, cfg.decay, 1.0, cfg.dh);
    ch.antennas.resize(static_cast<std::size_t>(cfg.m));
    for (auto& ant : ch.antennas) {
        ant.f = sample_rayleigh_cir(rng, cfg.tau_f, cfg.decay, f_power, cfg.df);
        ant.g = sample_rayleigh_cir(rng, cfg.tau_g, cfg.decay, g_power, cfg.dg);
    }
    return ch;
}

// Realized per-antenna detection SNRs for a channel draw (exact for a
// single-path BD-to-receiver link).
inline std::vector<double> realized_gammas(const ExperimentConfig& cfg, const ChannelSet& ch,
                                           double sigma2) {
    std::vector<double> gammas(ch.antennas.size());
    const double h_power = ch.h.power();
    for (std::size_t i = 0; i < ch.antennas.size(); ++i) {
        const double su2 =
            4.0 * cfg.ofdm.p * std::norm(cfg.bd.alpha) * ch.antennas[i].g.power() * h_power;
        gammas[i] = su2 / (2.0 * sigma2);
    }
    return gammas;
}

inline CombinerWeights weights_for(const std::string& combiner,
                                   const std::vector<double>& gammas, int j_pooled) {
    if (combiner == "mrc") return mrc_weights(gammas);
    if (combiner == "sc") return sc_weights(gammas);
    if (combiner == "optimal") return optimal_weights(gammas, j_pooled);
    return egc_weights(static_cast<int>(gammas.size()));
}

inline void add_signal(ComplexSignal& dst, const ComplexSignal& src) {
    const std::int64_t first = std::max(dst.start_index, src.start_index);
    const std::int64_t last = std::min(dst.end_index(), src.end_index());
    for (std::int64_t n = first; n < last; ++n)
        dst.samples[static_cast<std::size_t>(n - dst.start_index)] +=
            src.samples[static_cast<std::size_t>(n - src.start_index)];
}

// Received signal for every antenna over [0, span_len): direct link plus
// backscatter plus AWGN. Noise is drawn antenna by antenna in sample order.
inline std::vector<ComplexSignal> assemble_rx(const ExperimentConfig& cfg,
                                              const ChannelSet& ch, const ComplexSignal& s,
                                              const ComplexSignal& xc, std::int64_t span_len,
                                              double sigma2, Rng& rng) {
    std::vector<ComplexSignal> ys(ch.antennas.size());
    for (std::size_t i = 0; i < ch.antennas.size(); ++i) {
        ComplexSignal& y = ys[i];
        y.start_index = 0;
        y.samples.assign(static_cast<std::size_t>(span_len), cplx{0.0, 0.0});
        add_signal(y, apply_channel(s, ch.antennas[i].f));
        add_signal(y, apply_channel(xc, ch.antennas[i].g));
        for (auto& v : y.samples) v += rng.next_cscg(sigma2);
    }
    return ys;
}

}  // namespace detail

// Outcome of a single proposed-detector trial.
struct TrialOutcome {
    int sent = 0;
    int detected = 0;
    double gamma_first = 0.0;  // realized detection SNR at antenna 0
    bool sync_degraded = false;  // estimated mode: residual floor never reached
};

// One end-to-end trial of the proposed detector. In genie mode the true
// delays, spread and per-antenna SNRs feed the detector; in estimated mode
// the full frame (wake-up, BD timing sync, receiver training, power probe)
// is simulated and the estimates are used instead.
inline TrialOutcome run_detection_trial(const ExperimentConfig& cfg, double sigma2,
                                        double g_power, double f_power, Rng& rng) {
    const ChannelGeometry geo = cfg.geometry();
    const int p = cfg.ofdm.symbol_len();
    const double sigma_v2 = 2.0 * sigma2;
    const bool estimated = cfg.sync_mode == "estimated";

    const ChannelSet ch = detail::draw_channels(cfg, rng, g_power, f_power);
    const std::vector<double> gammas = detail::realized_gammas(cfg, ch, sigma2);

    TrialOutcome out;
    out.sent = rng.next_bit() ? 1 : 0;
    out.gamma_first = gammas.front();

    // Frame layout in OFDM periods: 1 wake-up symbol, then (estimated mode
    // only) K1 BD-sync and K2 training symbols, then a known bit-1 power
    // pilot, then the data bit.
    const int warmup = estimated ? 1 + cfg.k1 + cfg.k2 : 1;
    std::vector<int> bits;
    if (estimated) bits.push_back(1);
    bits.push_back(out.sent);
    const int total_syms = warmup + static_cast<int>(bits.size()) * cfg.bd.k;
    const std::int64_t span_len = static_cast<std::int64_t>(total_syms) * p + cfg.ofdm.nc;

    ComplexSignal s = generate_ofdm_frame(cfg.ofdm, total_syms, rng);
    const ComplexSignal c = apply_channel(s, ch.h);

    // BD-side timing: the device anchors its waveform at its own delay
    // estimate, obtained from its noisy reception during the sync symbols.
    int dh_hat = cfg.dh;
    if (estimated) {
        ComplexSignal c_noisy = c;
        const double bd_snr = std::pow(10.0, cfg.bd_snr_margin_db / 10.0) *
                              (cfg.ofdm.p * std::norm(cfg.bd.alpha) * g_power / sigma2) * 2.0;
        const double sigma_bd2 = cfg.ofdm.p / bd_snr;
        for (auto& v : c_noisy.samples) v += rng.next_cscg(sigma_bd2);
        dh_hat = estimate_delay_cp(c_noisy, cfg.ofdm, p, cfg.k1);
    }

    const ComplexSignal x =
        bd_waveform(cfg.ofdm, cfg.bd, bits, dh_hat, warmup, c.start_index,
                    c.end_index() - c.start_index);
    const ComplexSignal xc = backscatter(c, x, cfg.bd.alpha);
    const std::vector<ComplexSignal> ys =
        detail::assemble_rx(cfg, ch, s, xc, span_len, sigma2, rng);

    // Receiver-side parameters: true geometry and SNRs in genie mode,
    // training-phase estimates otherwise.
    int d_used = geo.d;
    int l_used = geo.l;
    std::vector<double> gammas_used = gammas;
    if (estimated) {
        const std::int64_t tpt_origin = static_cast<std::int64_t>(1 + cfg.k1) * p;
        d_used = estimate_delay_cp(ys[0], cfg.ofdm, tpt_origin, cfg.k2);
        l_used = estimate_spread(ys[0], cfg.ofdm, tpt_origin, cfg.k2, sigma2,
                                 cfg.epsilon_spread);
        out.sync_degraded = l_used >= cfg.ofdm.nc;
        const std::int64_t pilot_start = static_cast<std::int64_t>(warmup) * p;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const SyncEstimates est = estimate_sigma_u2(ys[i], cfg.ofdm, pilot_start,
                                                        cfg.bd.k, l_used, sigma_v2);
            gammas_used[i] = est.sigma_u2_signal / sigma_v2;
        }
    }

    const DetectorConfig det = make_detector_config(cfg.ofdm, d_used, l_used, cfg.bd.k);
    const int j_pooled = det.pooled_j();
    std::vector<double> stats(ys.size());
    const std::int64_t data_start =
        static_cast<std::int64_t>(warmup + (estimated ? cfg.bd.k : 0)) * p;
    for (std::size_t i = 0; i < ys.size(); ++i)
        stats[i] = test_statistic(ys[i], cfg.ofdm, det, data_start, sigma_v2);

    double statistic, epsilon;
    if (cfg.m == 1) {
        statistic = stats[0];
        epsilon = optimal_threshold(gammas_used[0], j_pooled);
    } else {
        const CombinerWeights w = detail::weights_for(cfg.combiner, gammas_used, j_pooled);
        statistic = combine_statistics(stats, w);
        epsilon = multiantenna_threshold(w.theta, gammas_used, j_pooled);
    }
    out.detected = ml_detect(statistic, epsilon);
    return out;
}

// Outcome of one benchmark trial: the conventional energy detector with
// on-off keying and differential encoding, 6 training + 4 data BD symbols.
struct BenchmarkOutcome {
    int bit_errors = 0;
    int bits = 4;
};

inline BenchmarkOutcome run_benchmark_trial(const ExperimentConfig& cfg, double sigma2,
                                            double g_power, double f_power, Rng& rng) {
    const int p = cfg.ofdm.symbol_len();
    const ChannelSet ch = detail::draw_channels(cfg, rng, g_power, f_power);

    std::vector<int> data_bits(4);
    for (auto& b : data_bits) b = rng.next_bit() ? 1 : 0;

    std::vector<int> levels = {1, 1, 1, 0, 0, 0};
    const std::vector<int> data_states = differential_encode(data_bits, levels.back());
    levels.insert(levels.end(), data_states.begin(), data_states.end());

    const int warmup = 1;
    const int num_bd_syms = static_cast<int>(levels.size());
    const int total_syms = warmup + num_bd_syms * cfg.bd.k;
    const std::int64_t span_len = static_cast<std::int64_t>(total_syms) * p + cfg.ofdm.nc;

    ComplexSignal s = generate_ofdm_frame(cfg.ofdm, total_syms, rng);
    const ComplexSignal c = apply_channel(s, ch.h);
    const ComplexSignal x = bd_level_waveform(cfg.ofdm, cfg.bd, levels, cfg.dh, warmup,
                                              c.start_index, c.end_index() - c.start_index);
    const ComplexSignal xc = backscatter(c, x, cfg.bd.alpha);
    const std::vector<ComplexSignal> ys =
        detail::assemble_rx(cfg, ch, s, xc, span_len, sigma2, rng);

    std::vector<double> measured(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::int64_t start =
            (static_cast<std::int64_t>(warmup) + static_cast<std::int64_t>(i) * cfg.bd.k) * p;
        measured[i] = energy_level(ys[0], cfg.ofdm, cfg.bd.k, start);
    }
    const double tau = benchmark_threshold({measured[0], measured[1], measured[2]},
                                           {measured[3], measured[4], measured[5]});
    std::vector<int> detected_levels(data_bits.size());
    for (std::size_t i = 0; i < data_bits.size(); ++i)
        detected_levels[i] = measured[6 + i] > tau ? 1 : 0;
    const std::vector<int> decoded = differential_decode(detected_levels, levels[5]);

    BenchmarkOutcome out;
    out.bits = static_cast<int>(data_bits.size());
    for (std::size_t i = 0; i < data_bits.size(); ++i)
        if (decoded[i] != data_bits[i]) ++out.bit_errors;
    return out;
}

// One synchronization-quality trial: squared error of the selected
// estimator (BD delay, receiver min delay, or total spread).
inline std::int64_t run_sync_trial(const ExperimentConfig& cfg, double sigma2, double g_power,
                                   double f_power, Rng& rng) {
    const ChannelGeometry geo = cfg.geometry();
    const int p = cfg.ofdm.symbol_len();
    const ChannelSet ch = detail::draw_channels(cfg, rng, g_power, f_power);

    if (cfg.mse_estimator == "delay_bd") {
        const int total_syms = 2 + cfg.k1;
        ComplexSignal s = generate_ofdm_frame(cfg.ofdm, total_syms, rng);
        ComplexSignal c = apply_channel(s, ch.h);
        const double bd_snr = std::pow(10.0, cfg.bd_snr_margin_db / 10.0) *
                              (cfg.ofdm.p * std::norm(cfg.bd.alpha) * g_power / sigma2) * 2.0;
        const double sigma_bd2 = cfg.ofdm.p / bd_snr;
        for (auto& v : c.samples) v += rng.next_cscg(sigma_bd2);
        const int dh_hat = estimate_delay_cp(c, cfg.ofdm, p, cfg.k1);
        const std::int64_t err = dh_hat - cfg.dh;
        return err * err;
    }

    // Receiver-side estimators run on the training phase: constant
    // reflection over K2 symbols after one warm-up symbol.
    const int total_syms = 1 + cfg.k2 + 1;
    const std::int64_t span_len = static_cast<std::int64_t>(total_syms) * p + cfg.ofdm.nc;
    ComplexSignal s = generate_ofdm_frame(cfg.ofdm, total_syms, rng);
    const ComplexSignal c = apply_channel(s, ch.h);
    const ComplexSignal x = bd_waveform(cfg.ofdm, cfg.bd, {}, cfg.dh, total_syms,
                                        c.start_index, c.end_index() - c.start_index);
    const ComplexSignal xc = backscatter(c, x, cfg.bd.alpha);
    const std::vector<ComplexSignal> ys =
        detail::assemble_rx(cfg, ch, s, xc, span_len, sigma2, rng);

    if (cfg.mse_estimator == "delay_rx") {
        const int d_hat = estimate_delay_cp(ys[0], cfg.ofdm, p, cfg.k2);
        const std::int64_t err = d_hat - geo.d;
        return err * err;
    }
    const int l_hat =
        estimate_spread(ys[0], cfg.ofdm, p, cfg.k2, sigma2, cfg.epsilon_spread);
    const std::int64_t err = l_hat - geo.l;
    return err * err;
}

// Fading-averaged minimum error rate: Monte Carlo over channel power draws
// with the closed-form conditional error rate inside. Exact companion to
// the simulated sweeps, which fade the same way.
inline double faded_min_ber(const ExperimentConfig& cfg, double sigma2, double g_power,
                            std::int64_t draws, std::uint64_t stream_tag) {
    if (draws <= 0) return std::numeric_limits<double>::quiet_NaN();
    const ChannelGeometry geo = cfg.geometry();
    const int j_pooled = geo.j * cfg.bd.k;
    Rng rng = Rng::for_trial(cfg.seed, stream_tag, 0x616e616c79746963ULL);

    // Expected tap powers for h (unit total) and g.
    std::vector<double> h_profile(static_cast<std::size_t>(cfg.tau_h));
    double norm = 0.0;
    for (int i = 0; i < cfg.tau_h; ++i) norm += std::exp(-cfg.decay * i);
    for (int i = 0; i < cfg.tau_h; ++i)
        h_profile[static_cast<std::size_t>(i)] = std::exp(-cfg.decay * i) / norm;
    double g_norm = 0.0;
    for (int i = 0; i < cfg.tau_g; ++i) g_norm += std::exp(-cfg.decay * i);

    const double coeff = 4.0 * cfg.ofdm.p * std::norm(cfg.bd.alpha) / (2.0 * sigma2);
    std::vector<double> gammas(static_cast<std::size_t>(cfg.m));
    double acc = 0.0;
    for (std::int64_t d = 0; d < draws; ++d) {
        double h_power = 0.0;
        for (double mean : h_profile) h_power += rng.next_exponential(mean);
        for (auto& g : gammas) {
            double gp = 0.0;
            for (int i = 0; i < cfg.tau_g; ++i)
                gp += rng.next_exponential(g_power * std::exp(-cfg.decay * i) / g_norm);
            g = coeff * gp * h_power;
        }
        if (cfg.m == 1) {
            acc += min_ber_single(gammas[0], j_pooled).p_e();
        } else {
            const CombinerWeights w = detail::weights_for(cfg.combiner, gammas, j_pooled);
            acc += min_ber_multi(w.theta, gammas, j_pooled).p_e();
        }
    }
    return acc / static_cast<double>(draws);
}

namespace detail {

inline double ber_ci_halfwidth(double p, std::int64_t n) {
    if (n <= 0) return 0.0;
    return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

// Shared sweep-point runner for the two detectors.
inline SweepPoint run_ber_point(const ExperimentConfig& cfg, double x_value,
                                const std::string& x_unit, double sigma2, double g_power,
                                double f_power, std::uint64_t point_index) {
    SweepPoint pt;
    pt.x_value = x_value;
    pt.x_unit = x_unit;
    std::int64_t errors = 0;
    std::int64_t bits = 0;
    std::int64_t degraded = 0;
    double gamma_acc = 0.0;
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        Rng rng = Rng::for_trial(cfg.seed, point_index, static_cast<std::uint64_t>(t));
        if (cfg.detector == "benchmark") {
            const BenchmarkOutcome b = run_benchmark_trial(cfg, sigma2, g_power, f_power, rng);
            errors += b.bit_errors;
            bits += b.bits;
        } else {
            const TrialOutcome o = run_detection_trial(cfg, sigma2, g_power, f_power, rng);
            errors += (o.detected != o.sent) ? 1 : 0;
            bits += 1;
            degraded += o.sync_degraded ? 1 : 0;
            gamma_acc += o.gamma_first;
        }
    }
    pt.trials = bits;
    pt.empirical = static_cast<double>(errors) / static_cast<double>(bits);
    pt.ci_halfwidth = ber_ci_halfwidth(pt.empirical, bits);
    pt.sync_failures = degraded;
    if (cfg.detector == "proposed")
        pt.mean_gamma = gamma_acc / static_cast<double>(cfg.trials);
    return pt;
}

}  // namespace detail

// BER versus average detection SNR at the configured BD distance.
inline SweepResult run_ber_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepResult res;
    res.kind = "ber";
    res.detector = cfg.detector;
    res.combiner = cfg.m > 1 ? cfg.combiner : "none";
    res.k = cfg.bd.k;
    res.m = cfg.m;
    res.seed = cfg.seed;
    const double g_power = cfg.g_mean_power(cfg.d_rd_m);
    const double f_power = cfg.f_mean_power(cfg.d_rd_m);
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
        const double sigma2 = cfg.sigma2_for_snr(cfg.snr_grid_db[i], cfg.d_rd_m);
        SweepPoint pt = detail::run_ber_point(cfg, cfg.snr_grid_db[i], "dB", sigma2, g_power,
                                              f_power, static_cast<std::uint64_t>(i));
        if (cfg.detector == "proposed") {
            std::int64_t draws = cfg.analytic_draws;
            if (cfg.m > 1 && cfg.combiner == "optimal")
                draws = std::min<std::int64_t>(draws, 200000);
            pt.analytic = faded_min_ber(cfg, sigma2, g_power, draws,
                                        0x8000000000000000ULL | static_cast<std::uint64_t>(i));
        }
        res.points.push_back(std::move(pt));
    }
    return res;
}

// BER versus BD-to-receiver distance with the noise floor anchored at a
// reference (SNR ref_snr_db at ref_distance_m). The direct link stays
// fixed at the anchor distance: moving the BD does not move the ambient
// transmitter.
inline SweepResult run_distance_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepResult res;
    res.kind = "ber";
    res.detector = cfg.detector;
    res.combiner = cfg.m > 1 ? cfg.combiner : "none";
    res.k = cfg.bd.k;
    res.m = cfg.m;
    res.seed = cfg.seed;
    const double sigma2 = cfg.sigma2_for_snr(cfg.ref_snr_db, cfg.ref_distance_m);
    const double f_power = cfg.f_mean_power(cfg.ref_distance_m);
    for (std::size_t i = 0; i < cfg.distance_grid_m.size(); ++i) {
        const double dist = cfg.distance_grid_m[i];
        const double g_power = cfg.g_mean_power(dist);
        SweepPoint pt = detail::run_ber_point(cfg, dist, "m", sigma2, g_power, f_power,
                                              static_cast<std::uint64_t>(i) + 0x10000ULL);
        if (cfg.detector == "proposed") {
            std::int64_t draws = cfg.analytic_draws;
            if (cfg.m > 1 && cfg.combiner == "optimal")
                draws = std::min<std::int64_t>(draws, 200000);
            pt.analytic = faded_min_ber(cfg, sigma2, g_power, draws,
                                        0x8000000000010000ULL | static_cast<std::uint64_t>(i));
        }
        res.points.push_back(std::move(pt));
    }
    return res;
}

// Normalized MSE of the selected sync estimator versus average SNR.
inline SweepResult run_mse_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepResult res;
    res.kind = "mse";
    res.detector = cfg.mse_estimator;
    res.combiner = "none";
    res.k = cfg.bd.k;
    res.m = cfg.m;
    res.seed = cfg.seed;
    const ChannelGeometry geo = cfg.geometry();
    const double truth = cfg.mse_estimator == "delay_bd"
                             ? static_cast<double>(cfg.dh)
                             : (cfg.mse_estimator == "delay_rx" ? static_cast<double>(geo.d)
                                                                : static_cast<double>(geo.l));
    const double g_power = cfg.g_mean_power(cfg.d_rd_m);
    const double f_power = cfg.f_mean_power(cfg.d_rd_m);
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
        const double sigma2 = cfg.sigma2_for_snr(cfg.snr_grid_db[i], cfg.d_rd_m);
        SweepPoint pt;
        pt.x_value = cfg.snr_grid_db[i];
        pt.x_unit = "dB";
        std::int64_t sum_sq = 0;
        std::int64_t sum_quad = 0;  // of squared errors, for the CI
        for (std::int64_t t = 0; t < cfg.trials; ++t) {
            Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(i) + 0x20000ULL,
                                     static_cast<std::uint64_t>(t));
            const std::int64_t e2 = run_sync_trial(cfg, sigma2, g_power, f_power, rng);
            sum_sq += e2;
            sum_quad += e2 * e2;
        }
        pt.trials = cfg.trials;
        const double n = static_cast<double>(cfg.trials);
        const double mean_e2 = static_cast<double>(sum_sq) / n;
        const double var_e2 =
            std::max(static_cast<double>(sum_quad) / n - mean_e2 * mean_e2, 0.0);
        pt.empirical = mean_e2 / (truth * truth);
        pt.ci_halfwidth = 1.96 * std::sqrt(var_e2 / n) / (truth * truth);
        res.points.push_back(std::move(pt));
    }
    return res;
}

// All four combiners evaluated on identical channel and noise draws, so
// their crossing-point differences are measured with correlated noise.
inline std::vector<SweepResult> run_combiner_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<std::string> combiners = {"optimal", "mrc", "egc", "sc"};
    std::vector<SweepResult> results;
    for (const auto& comb : combiners) {
        ExperimentConfig c = cfg;
        c.combiner = comb;
        results.push_back(run_ber_sweep(c));
    }
    return results;
}

// Closed-form-only table over the SNR grid (no simulation).
inline SweepResult run_analytic_table(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepResult res;
    res.kind = "ber";
    res.detector = "proposed";
    res.combiner = cfg.m > 1 ? cfg.combiner : "none";
    res.k = cfg.bd.k;
    res.m = cfg.m;
    res.seed = cfg.seed;
    const double g_power = cfg.g_mean_power(cfg.d_rd_m);
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
        const double sigma2 = cfg.sigma2_for_snr(cfg.snr_grid_db[i], cfg.d_rd_m);
        SweepPoint pt;
        pt.x_value = cfg.snr_grid_db[i];
        pt.x_unit = "dB";
        pt.trials = 0;
        pt.empirical = std::numeric_limits<double>::quiet_NaN();
        std::int64_t draws = cfg.analytic_draws;
        if (cfg.m > 1 && cfg.combiner == "optimal")
            draws = std::min<std::int64_t>(draws, 200000);
        pt.analytic = faded_min_ber(cfg, sigma2, g_power, draws,
                                    0x8000000000020000ULL | static_cast<std::uint64_t>(i));
        res.points.push_back(std::move(pt));
    }
    return res;
}

}  // namespace ambc
