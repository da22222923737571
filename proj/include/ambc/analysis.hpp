#pragma once

// Closed-form performance analysis of the difference detector. Conditioned
// on the channels, the pooled statistic is Gaussian under both bit
// hypotheses: N(1, 1/J) for bit 0 and N(gamma+1, (gamma+1)^2/J) for bit 1,
// with J the pooled window sample count and gamma the detection SNR
// sigma_u^2 / sigma_v^2. Everything here follows from intersecting those
// two densities, including the weighted multi-antenna generalization.

#include <cmath>
#include <limits>
#include <vector>

#include "ambc/detection.hpp"
#include "ambc/types.hpp"

namespace ambc {

// Gaussian tail probability Q(x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Gaussian moments of the statistic under both hypotheses.
struct StatMoments {
    double mu0 = 1.0;
    double var0 = 0.0;
    double mu1 = 1.0;
    double var1 = 0.0;
};

inline StatMoments statistic_moments(double gamma, int j_pooled) {
    if (j_pooled < 1) throw invariant_error("statistic_moments: J must be positive");
    if (gamma < 0.0) throw invariant_error("statistic_moments: negative gamma");
    StatMoments m;
    m.mu0 = 1.0;
    m.var0 = 1.0 / j_pooled;
    m.mu1 = gamma + 1.0;
    m.var1 = (gamma + 1.0) * (gamma + 1.0) / j_pooled;
    return m;
}

// Minimum-error threshold for one antenna. For gamma -> 0 the two
// densities coincide in mean and the expression degenerates; the limiting
// value (1 + sqrt(1 + 4/J)) / 2 is used below a small-gamma guard.
inline double optimal_threshold(double gamma, int j_pooled) {
    if (j_pooled < 1) throw invariant_error("optimal_threshold: J must be positive");
    if (gamma < 0.0) throw invariant_error("optimal_threshold: negative gamma");
    const double j = static_cast<double>(j_pooled);
    if (gamma < 1e-9) return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 / j));
    const double log_term = 2.0 * gamma * (gamma + 2.0) * std::log(gamma + 1.0) / j;
    return (gamma + 1.0) / (gamma * (gamma + 2.0)) *
           (gamma + std::sqrt(gamma * gamma + log_term));
}

// Error-rate split at an arbitrary threshold for one antenna.
inline BerBreakdown ber_closed_form(double gamma, int j_pooled, double epsilon) {
    const StatMoments m = statistic_moments(gamma, j_pooled);
    BerBreakdown b;
    b.p_fa = q_function((epsilon - m.mu0) / std::sqrt(m.var0));
    b.p_md = q_function((m.mu1 - epsilon) / std::sqrt(m.var1));
    return b;
}

inline BerBreakdown min_ber_single(double gamma, int j_pooled) {
    return ber_closed_form(gamma, j_pooled, optimal_threshold(gamma, j_pooled));
}

// Moments of the weighted sum of per-antenna statistics.
inline StatMoments combined_moments(const std::vector<double>& theta,
                                    const std::vector<double>& gammas, int j_pooled) {
    if (theta.size() != gammas.size() || theta.empty())
        throw invariant_error("combined_moments: weight/gamma count mismatch");
    if (j_pooled < 1) throw invariant_error("combined_moments: J must be positive");
    StatMoments m;
    m.mu0 = 0.0;
    m.mu1 = 0.0;
    m.var0 = 0.0;
    m.var1 = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double t = theta[i];
        const double g1 = gammas[i] + 1.0;
        m.mu0 += t;
        m.mu1 += t * g1;
        m.var0 += t * t;
        m.var1 += t * t * g1 * g1;
    }
    m.var0 /= j_pooled;
    m.var1 /= j_pooled;
    return m;
}

// Minimum-error threshold for the weighted statistic: the intersection of
// N(mu0, var0) and N(mu1, var1). With unit-norm weights the variance ratio
// is c = sum theta^2 (gamma+1)^2 >= 1; c near 1 means the densities differ
// only in mean and the midpoint is optimal.
inline double multiantenna_threshold(const std::vector<double>& theta,
                                     const std::vector<double>& gammas, int j_pooled) {
    const StatMoments m = combined_moments(theta, gammas, j_pooled);
    const double c = m.var1 / m.var0;
    if (std::abs(c - 1.0) <= 1e-9) return 0.5 * (m.mu0 + m.mu1);
    const double diff = m.mu1 - m.mu0;
    const double disc = c * diff * diff + (c - 1.0) * m.var1 * std::log(c);
    return (c * m.mu0 - m.mu1 + std::sqrt(disc)) / (c - 1.0);
}

inline BerBreakdown ber_multi(const std::vector<double>& theta,
                              const std::vector<double>& gammas, int j_pooled,
                              double epsilon) {
    const StatMoments m = combined_moments(theta, gammas, j_pooled);
    BerBreakdown b;
    b.p_fa = q_function((epsilon - m.mu0) / std::sqrt(m.var0));
    b.p_md = q_function((m.mu1 - epsilon) / std::sqrt(m.var1));
    return b;
}

inline BerBreakdown min_ber_multi(const std::vector<double>& theta,
                                  const std::vector<double>& gammas, int j_pooled) {
    return ber_multi(theta, gammas, j_pooled,
                     multiantenna_threshold(theta, gammas, j_pooled));
}

namespace detail {

// Unit-norm nonnegative weights from spherical angles in [0, pi/2].
inline std::vector<double> weights_from_angles(const std::vector<double>& ang) {
    std::vector<double> theta(ang.size() + 1);
    double run = 1.0;
    for (std::size_t i = 0; i < ang.size(); ++i) {
        theta[i] = run * std::cos(ang[i]);
        run *= std::sin(ang[i]);
    }
    theta.back() = run;
    return theta;
}

inline double min_ber_at_angles(const std::vector<double>& ang,
                                const std::vector<double>& gammas, int j_pooled) {
    return min_ber_multi(weights_from_angles(ang), gammas, j_pooled).p_e();
}

inline std::vector<double> angles_from_weights(const std::vector<double>& theta) {
    std::vector<double> ang(theta.size() - 1);
    double run = 1.0;
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
        double c = run > 1e-300 ? theta[i] / run : 1.0;
        c = std::min(1.0, std::max(0.0, c));
        ang[i] = std::acos(c);
        run *= std::sin(ang[i]);
    }
    return ang;
}

// 1-D refine of one angle: coarse scan of [0, pi/2], then two shrinking
// passes around the best point down to the requested resolution.
inline void refine_angle(std::vector<double>& ang, std::size_t idx,
                         const std::vector<double>& gammas, int j_pooled,
                         double resolution) {
    const double half_pi = 0.5 * M_PI;
    double lo = 0.0, hi = half_pi, step = half_pi / 60.0;
    double best_x = ang[idx];
    double best_v = min_ber_at_angles(ang, gammas, j_pooled);
    while (true) {
        for (double x = lo; x <= hi + 1e-12; x += step) {
            ang[idx] = std::min(x, half_pi);
            const double v = min_ber_at_angles(ang, gammas, j_pooled);
            if (v < best_v) {
                best_v = v;
                best_x = ang[idx];
            }
        }
        if (step <= resolution) break;
        lo = std::max(0.0, best_x - step);
        hi = std::min(half_pi, best_x + step);
        step = std::max(resolution, step / 10.0);
    }
    ang[idx] = best_x;
}

}  // namespace detail

// Weights minimizing the closed-form error rate, over the nonnegative unit
// sphere. One antenna is trivial; two antennas use a dense 1-D angle scan;
// more antennas run coordinate descent over spherical angles from the best
// conventional starting point. Deterministic for given inputs.
inline CombinerWeights optimal_weights(const std::vector<double>& gammas, int j_pooled,
                                       double resolution = 1e-3) {
    const std::size_t m = gammas.size();
    if (m == 0) throw invariant_error("optimal_weights: need at least one antenna");
    if (resolution <= 0.0) throw invariant_error("optimal_weights: bad resolution");
    CombinerWeights w;
    if (m == 1) {
        w.theta = {1.0};
        return w;
    }
    std::vector<double> ang;
    double best_v = std::numeric_limits<double>::infinity();
    for (const CombinerWeights& start :
         {mrc_weights(gammas), egc_weights(static_cast<int>(m)), sc_weights(gammas)}) {
        const std::vector<double> a = detail::angles_from_weights(start.theta);
        const double v = detail::min_ber_at_angles(a, gammas, j_pooled);
        if (v < best_v) {
            best_v = v;
            ang = a;
        }
    }
    const int cycles = m == 2 ? 1 : 6;
    for (int c = 0; c < cycles; ++c) {
        for (std::size_t i = 0; i < ang.size(); ++i)
            detail::refine_angle(ang, i, gammas, j_pooled, resolution);
    }
    w.theta = detail::weights_from_angles(ang);
    // Scrub tiny negatives from acos roundoff and renormalize exactly.
    double norm2 = 0.0;
    for (double& t : w.theta) {
        if (t < 0.0) t = 0.0;
        norm2 += t * t;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& t : w.theta) t *= inv;
    return w;
}

// Large-gamma approximations of the two error components at the optimal
// threshold.
struct MinBerApprox {
    double p_fa = 0.0;
    double p_md = 0.0;
};

inline MinBerApprox ber_min_approx(double gamma, int j_pooled) {
    if (j_pooled < 1) throw invariant_error("ber_min_approx: J must be positive");
    if (gamma < 0.0) throw invariant_error("ber_min_approx: negative gamma");
    MinBerApprox a;
    a.p_fa = q_function(std::sqrt(static_cast<double>(j_pooled) + 2.0 * std::log(gamma + 1.0)));
    a.p_md = q_function(std::sqrt(static_cast<double>(j_pooled)));
    return a;
}

// Bit rate of the backscatter link: one bit per K OFDM periods.
inline double bd_rate(const OfdmConfig& cfg, int k) {
    if (k < 1) throw invariant_error("bd_rate: K must be positive");
    return cfg.fs / (static_cast<double>(k) * cfg.symbol_len());
}

}  // namespace ambc
