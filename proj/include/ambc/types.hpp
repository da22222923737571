#pragma once

// Core value types shared across the library: configuration records, signals
// on a global sample timeline, channel impulse responses, and the derived
// timing geometry that detection and synchronization both depend on.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ambc {

using cplx = std::complex<double>;

// Raised when a configuration record violates its own constraints.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when two signals that must share a timeline segment do not.
struct alignment_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a documented invariant of an operation's inputs is violated.
struct invariant_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when an estimator cannot produce a result from the given signal.
struct sync_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// OFDM carrier parameters. N subcarriers, cyclic prefix of Nc samples,
// sampling rate fs in Hz, average transmit power p (time-domain sample
// variance). One OFDM symbol spans N + Nc samples.
struct OfdmConfig {
    int n = 512;
    int nc = 64;
    double fs = 10e6;
    double p = 1.0;

    int symbol_len() const { return n + nc; }

    void validate() const {
        if (n <= 0) throw config_error("OfdmConfig: N must be positive");
        if (nc <= 0 || nc >= n) throw config_error("OfdmConfig: need 0 < Nc < N");
        if ((n + nc) % 2 != 0)
            throw config_error("OfdmConfig: N + Nc must be even (BD waveform halves a symbol)");
        if (fs <= 0.0) throw config_error("OfdmConfig: fs must be positive");
        if (p <= 0.0) throw config_error("OfdmConfig: p must be positive");
    }
};

// A complex baseband signal positioned on the global sample timeline.
// samples[i] is the value at global index start_index + i. Index 0 of the
// timeline is the first sample of the first generated OFDM symbol at the
// transmitter.
struct ComplexSignal {
    std::vector<cplx> samples;
    std::int64_t start_index = 0;

    std::int64_t end_index() const {
        return start_index + static_cast<std::int64_t>(samples.size());
    }
    // Value at a global index; zero outside the held extent.
    cplx at(std::int64_t global_n) const {
        const std::int64_t i = global_n - start_index;
        if (i < 0 || i >= static_cast<std::int64_t>(samples.size())) return {0.0, 0.0};
        return samples[static_cast<std::size_t>(i)];
    }
    bool covers(std::int64_t first, std::int64_t last) const {
        return first >= start_index && last < end_index();
    }
};

// Channel impulse response: `taps` begin after an integer propagation delay
// of `delay` samples. Total discrete spread = delay + tap count.
struct Cir {
    std::vector<cplx> taps;
    int delay = 0;

    int spread() const { return delay + static_cast<int>(taps.size()); }

    void validate() const {
        if (delay < 0) throw config_error("Cir: delay must be nonnegative");
        if (taps.empty()) throw config_error("Cir: need at least one tap");
    }

    double power() const {
        double s = 0.0;
        for (const auto& t : taps) s += std::norm(t);
        return s;
    }
};

// Discrete timing geometry shared by the detector and the sync estimators.
// Delays D_* count samples from the transmitter grid to the first arrival;
// spreads L_* are delay plus tap count of the (possibly composite) channel.
// The difference y[n] - y[n+N] cancels everything on n in [L-1, Nc+D-1],
// a window of J samples.
struct ChannelGeometry {
    int df = 0;  // direct link delay
    int dh = 0;  // transmitter -> BD delay
    int dg = 0;  // BD -> receiver delay
    int db = 0;  // backscatter path delay, dh + dg
    int lf = 0;  // direct link total spread
    int lh = 0;  // transmitter -> BD total spread
    int lg = 0;  // BD -> receiver total spread
    int lb = 0;  // backscatter composite total spread
    int d = 0;   // min(df, db)
    int l = 0;   // max(lf, lb)
    int j = 0;   // Nc + d - l + 1, length of the cancellation window

    void validate() const {
        if (df < 0 || dh < 0 || dg < 0) throw config_error("ChannelGeometry: negative delay");
        if (lf <= df || lh <= dh || lg <= dg || lb <= db)
            throw config_error("ChannelGeometry: spread must exceed delay");
        if (db != dh + dg) throw config_error("ChannelGeometry: db != dh + dg");
        if (d != std::min(df, db) || l != std::max(lf, lb))
            throw config_error("ChannelGeometry: d/l inconsistent with delays and spreads");
        if (j < 1) throw config_error("ChannelGeometry: cancellation window is empty (J < 1)");
    }
};

// One receive antenna's channel draw: direct link f and BD-to-receiver g.
// The transmitter-to-BD channel h is common to all antennas.
struct AntennaChannels {
    Cir f;
    Cir g;
};

// Channels for one trial: common h plus per-antenna f_m, g_m.
struct ChannelSet {
    Cir h;
    std::vector<AntennaChannels> antennas;

    int num_antennas() const { return static_cast<int>(antennas.size()); }
};

// Backscatter device parameters. alpha is the complex reflection
// coefficient (|alpha| <= 1); a BD symbol spreads one bit over K OFDM
// symbol periods.
struct BdConfig {
    cplx alpha{0.3, 0.4};
    int k = 1;

    void validate() const {
        if (std::abs(alpha) > 1.0 + 1e-12)
            throw config_error("BdConfig: |alpha| must not exceed 1");
        if (k < 1) throw config_error("BdConfig: K must be at least 1");
    }
};

// Link-layer phase durations in samples. The BD timing-sync phase spans K1
// OFDM symbols and the receiver training phase K2.
struct ProtocolSchedule {
    std::int64_t tw = 0;  // wake-up phase
    std::int64_t tb = 0;  // BD timing-sync phase, K1 * (N + Nc)
    std::int64_t tt = 0;  // receiver training phase, K2 * (N + Nc)
    std::int64_t td = 0;  // data phase
    int k1 = 1;
    int k2 = 1;

    void validate(const OfdmConfig& cfg) const {
        if (k1 < 1 || k2 < 1) throw config_error("ProtocolSchedule: K1, K2 must be >= 1");
        if (tb != static_cast<std::int64_t>(k1) * cfg.symbol_len())
            throw config_error("ProtocolSchedule: Tb != K1 * (N + Nc)");
        if (tt != static_cast<std::int64_t>(k2) * cfg.symbol_len())
            throw config_error("ProtocolSchedule: Tt != K2 * (N + Nc)");
        if (tw < 0 || td < 0) throw config_error("ProtocolSchedule: negative phase length");
    }
};

// Second-order link statistics for one trial. sigma_v2 is the difference
// noise power and equals 2 * sigma2 exactly; gamma_m holds the per-antenna
// detection SNR sigma_u,m^2 / sigma_v^2; gamma_d is the direct-link SNR
// used by the sync analysis.
struct LinkStats {
    double sigma2 = 0.0;
    double sigma_v2 = 0.0;
    std::vector<double> sigma_u2;
    std::vector<double> gamma;
    double gamma_d = 0.0;

    void validate() const {
        if (sigma2 < 0.0) throw config_error("LinkStats: sigma2 negative");
        if (std::abs(sigma_v2 - 2.0 * sigma2) > 1e-12 * std::max(1.0, sigma_v2))
            throw config_error("LinkStats: sigma_v2 must equal 2 * sigma2");
        if (sigma_u2.size() != gamma.size())
            throw config_error("LinkStats: sigma_u2 / gamma size mismatch");
    }
};

// Detection window description. The per-OFDM-symbol window is
// [l - 1, nc + d - 1] relative to the symbol start, j samples long; a BD
// symbol pools k such windows.
struct DetectorConfig {
    int j = 0;
    int window_first = 0;  // l - 1
    int window_last = 0;   // nc + d - 1
    int k = 1;

    int pooled_j() const { return j * k; }

    void validate() const {
        if (j < 1) throw config_error("DetectorConfig: J < 1");
        if (window_last - window_first + 1 != j)
            throw config_error("DetectorConfig: window length != J");
        if (k < 1) throw config_error("DetectorConfig: K < 1");
    }
};

// Combining weights across antennas: nonnegative, unit L2 norm.
struct CombinerWeights {
    std::vector<double> theta;

    void validate() const {
        double s = 0.0;
        for (double t : theta) {
            if (t < 0.0) throw invariant_error("CombinerWeights: negative weight");
            s += t * t;
        }
        if (theta.empty() || std::abs(s - 1.0) > 1e-9)
            throw invariant_error("CombinerWeights: weights must satisfy sum theta^2 = 1");
    }
};

// Outputs of the synchronization stage.
struct SyncEstimates {
    int dh_hat = -1;       // BD-side delay estimate
    int d_hat = -1;        // receiver-side minimum delay estimate
    int l_hat = -1;        // receiver-side maximum spread estimate
    double sigma_u2_raw = 0.0;     // Eq.-style power metric, noise included
    double sigma_u2_signal = 0.0;  // max(raw - sigma_v^2, 0)
};

// Error-rate split of a detector evaluation. p_e = (p_fa + p_md) / 2
// holds exactly by construction (equiprobable bits).
struct BerBreakdown {
    double p_fa = 0.0;
    double p_md = 0.0;

    double p_e() const { return 0.5 * (p_fa + p_md); }
};

// One row of a sweep: x value (SNR dB, distance m, ...), empirical metric
// with its 95% CI halfwidth, and the analytic overlay where defined.
struct SweepPoint {
    double x_value = 0.0;
    std::string x_unit;
    double empirical = 0.0;
    double analytic = std::numeric_limits<double>::quiet_NaN();
    std::int64_t trials = 0;
    double ci_halfwidth = 0.0;
    // Diagnostics (reported in the metadata sidecar, not the CSV):
    std::int64_t sync_failures = 0;  // estimated-mode trials without a residual floor
    double mean_gamma = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
    std::string kind;           // "ber" or "mse"
    std::string detector;       // "proposed" or "benchmark"
    std::string combiner;       // "optimal", "mrc", "egc", "sc", or "none"
    int k = 1;
    int m = 1;
    std::uint64_t seed = 0;
    std::vector<SweepPoint> points;
};

}  // namespace ambc
