// Command-line driver for the ambient backscatter link simulator.
//
// Subcommands:
//   ber-sweep       BER vs average SNR (proposed detector or benchmark)
//   distance-sweep  BER vs BD-to-receiver distance at a fixed noise floor
//   mse-sweep       sync estimator MSE vs average SNR
//   combiner-sweep  BER vs SNR for all four combiners on shared draws
//   analytic        closed-form minimum-BER table, no simulation
//   selftest        quick internal consistency checks
//
// Settings come from defaults, then an optional config file, then repeated
// --set key=value overrides; common knobs also have dedicated flags.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ambc/io.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_path = "sweep.csv";
    std::int64_t trials = -1;
    std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file with key = value lines");
    cmd->add_option("--set", args.sets, "override a single config key (key=value)")
        ->take_all();
    cmd->add_option("--out,-o", args.out_path, "output CSV path")->capture_default_str();
    cmd->add_option("--trials", args.trials, "Monte Carlo trials per sweep point");
    cmd->add_option("--seed", args.seed, "base RNG seed");
}

ambc::ExperimentConfig resolve_config(const CommonArgs& args) {
    ambc::ExperimentConfig cfg;
    if (!args.config_path.empty()) ambc::load_config_file(cfg, args.config_path);
    for (const auto& kv : args.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ambc::config_error("--set expects key=value, got: " + kv);
        ambc::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.trials >= 0) cfg.trials = args.trials;
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    cfg.validate();
    return cfg;
}

void emit(const std::string& out_path, const ambc::ExperimentConfig& cfg,
          const std::vector<ambc::SweepResult>& results) {
    ambc::write_csv(out_path, results);
    ambc::write_metadata(out_path + ".meta", cfg, results);
    std::int64_t rows = 0;
    for (const auto& r : results) rows += static_cast<std::int64_t>(r.points.size());
    std::cout << "wrote " << rows << " rows to " << out_path << " (+ .meta)\n";
}

int check(bool ok, const char* name, int& failures) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << '\n';
    if (!ok) ++failures;
    return ok ? 0 : 1;
}

// Fast invariant checks, independent of the full test suite: useful as a
// smoke test on a new machine or after a toolchain change.
int run_selftest(const ambc::ExperimentConfig& cfg) {
    using namespace ambc;
    int failures = 0;

    // Cyclic prefix repetition of the bare carrier.
    {
        Rng rng(42);
        const ComplexSignal s = generate_ofdm_frame(cfg.ofdm, 2, rng);
        const int p = cfg.ofdm.symbol_len();
        bool ok = true;
        for (int n = 0; n < cfg.ofdm.nc; ++n)
            ok = ok && s.samples[static_cast<std::size_t>(n)] ==
                           s.samples[static_cast<std::size_t>(n + cfg.ofdm.n)];
        ok = ok && s.samples.size() == static_cast<std::size_t>(2 * p);
        check(ok, "carrier repeats its cyclic prefix", failures);
    }

    // Noiseless cancellation with a silent BD.
    {
        Rng rng(7);
        const ChannelSet ch = ambc::detail::draw_channels(cfg, rng, 1.0, 1.0);
        const ComplexSignal s = generate_ofdm_frame(cfg.ofdm, 2, rng);
        const ComplexSignal yd = apply_channel(s, ch.antennas[0].f);
        const ChannelGeometry geo = cfg.geometry();
        double worst = 0.0;
        const int p = cfg.ofdm.symbol_len();
        for (int n = geo.lf - 1; n < cfg.ofdm.nc + cfg.df; ++n) {
            const cplx z = yd.at(p + n) - yd.at(p + n + cfg.ofdm.n);
            worst = std::max(worst, std::abs(z));
        }
        check(worst == 0.0, "direct path cancels exactly across one period", failures);
    }

    // Threshold sits between the two conditional means and the closed-form
    // error rate is symmetric at the crossing.
    {
        const double gamma = 3.0, j = 59;
        const double eps = optimal_threshold(gamma, j);
        const BerBreakdown b = ber_closed_form(gamma, j, eps);
        bool ok = eps > 1.0 && eps < gamma + 1.0;
        const double lhs = std::sqrt(j) * (eps - 1.0);
        const double rhs = std::sqrt(j) * (1.0 - eps / (gamma + 1.0));
        const double f1 = lhs * lhs, f2 = rhs * rhs;
        ok = ok && std::abs(f1 - f2 - 2.0 * std::log(gamma + 1.0)) < 1e-9;
        ok = ok && b.p_fa > 0.0 && b.p_md > 0.0;
        check(ok, "optimal threshold solves the likelihood crossing", failures);
    }

    // Single-antenna reduction of the weighted-combining threshold.
    {
        const double a = multiantenna_threshold({1.0}, {5.0}, 40);
        const double b = optimal_threshold(5.0, 40);
        check(std::abs(a - b) < 1e-9, "combining threshold reduces at M=1", failures);
    }

    // Determinism: same seed, same result.
    {
        ExperimentConfig c = cfg;
        c.trials = 200;
        c.snr_grid_db = {10.0};
        c.analytic_draws = 1000;
        const SweepResult r1 = run_ber_sweep(c);
        const SweepResult r2 = run_ber_sweep(c);
        check(r1.points[0].empirical == r2.points[0].empirical &&
              r1.points[0].analytic == r2.points[0].analytic,
              "sweeps are deterministic for a fixed seed", failures);
    }

    std::cout << (failures == 0 ? "selftest OK" : "selftest FAILED") << '\n';
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ambient backscatter link simulator"};
    app.require_subcommand(1);

    CommonArgs ber_args, dist_args, mse_args, comb_args, ana_args, self_args;
    CLI::App* ber = app.add_subcommand("ber-sweep", "BER vs average SNR");
    add_common(ber, ber_args);
    CLI::App* dist = app.add_subcommand("distance-sweep", "BER vs BD distance");
    add_common(dist, dist_args);
    CLI::App* mse = app.add_subcommand("mse-sweep", "sync estimator MSE vs SNR");
    add_common(mse, mse_args);
    CLI::App* comb = app.add_subcommand("combiner-sweep", "BER vs SNR for all combiners");
    add_common(comb, comb_args);
    CLI::App* ana = app.add_subcommand("analytic", "closed-form BER table");
    add_common(ana, ana_args);
    CLI::App* self = app.add_subcommand("selftest", "internal consistency checks");
    add_common(self, self_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ber->parsed()) {
            const auto cfg = resolve_config(ber_args);
            emit(ber_args.out_path, cfg, {run_ber_sweep(cfg)});
        } else if (dist->parsed()) {
            const auto cfg = resolve_config(dist_args);
            emit(dist_args.out_path, cfg, {run_distance_sweep(cfg)});
        } else if (mse->parsed()) {
            const auto cfg = resolve_config(mse_args);
            emit(mse_args.out_path, cfg, {run_mse_sweep(cfg)});
        } else if (comb->parsed()) {
            const auto cfg = resolve_config(comb_args);
            emit(comb_args.out_path, cfg, run_combiner_sweep(cfg));
        } else if (ana->parsed()) {
            const auto cfg = resolve_config(ana_args);
            emit(ana_args.out_path, cfg, {run_analytic_table(cfg)});
        } else if (self->parsed()) {
            const auto cfg = resolve_config(self_args);
            return run_selftest(cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
