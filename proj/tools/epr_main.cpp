// epr — command-line runner for the two-stage measurement chain
// simulator. Subcommands: run, verify, sweep. Exit codes: 0 all checks
// passed, 1 a statistical or algebraic check failed, 2 usage or config
// error.

#include "eprsim/analysis.hpp"
#include "eprsim/config_io.hpp"
#include "eprsim/errors.hpp"
#include "eprsim/measurement.hpp"
#include "eprsim/rng.hpp"
#include "eprsim/runner.hpp"
#include "eprsim/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace eprsim;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::size_t thread_cap_from_env() {
    const char *raw = std::getenv("EPR_SIM_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return 0;
    }
    char *end = nullptr;
    long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 1) {
        throw ArgumentError("EPR_SIM_THREADS must be a positive integer, got \"" +
                            std::string(raw) + "\"");
    }
    return static_cast<std::size_t>(v);
}

struct Overrides {
    std::optional<std::uint64_t> shots;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> depth;
};

/// Flags beat config-file fields; the file beats built-in defaults.
ChainConfig apply_overrides(const ChainConfig &cfg, const Overrides &ov) {
    return ChainConfig(cfg.dimension(), cfg.amplitudes(), ov.depth.value_or(cfg.chain_depth()),
                       cfg.explicit_coupling(), ov.shots.value_or(cfg.shots()),
                       ov.seed.value_or(cfg.seed()), cfg.measure_particle_after(),
                       cfg.thresholds());
}

void print_summary(std::ostream &out, const ChainConfig &cfg, const RunResult &result) {
    out << "dimension " << cfg.dimension() << ", depth " << cfg.chain_depth() << ", shots "
        << cfg.shots() << ", seed " << cfg.seed() << "\n";
    out << "  outcome counts:";
    for (auto c : result.histogram.counts) {
        out << ' ' << c;
    }
    out << "\n";
    out.precision(6);
    out << "  born TV " << result.report.born_tv_distance << ", chi2 p "
        << result.report.chi_square_pvalue << ", purity before/after "
        << result.report.purity_before << "/" << result.report.purity_after << "\n";
    if (result.report.correlation_rate) {
        out << "  correlation rate " << *result.report.correlation_rate << "\n";
    }
    out << "  no-signaling TV " << result.report.no_signaling_tv << ", algebraic gap "
        << result.report.no_signaling_algebraic_gap << "\n";
    for (const auto &[name, ok] : result.report.pass_flags) {
        out << "  [" << (ok ? "PASS" : "FAIL") << "] " << name << "\n";
    }
}

int run_one(const ChainConfig &cfg, const std::string &out_path,
            const std::string &trajectories_path, std::size_t threads, bool quiet_json) {
    RunOptions options;
    options.max_threads = threads;
    options.keep_per_shot = !trajectories_path.empty();

    RunResult result = run_experiment(cfg, options);
    nlohmann::json manifest = manifest_json(cfg, result, current_utc_timestamp());

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw ArgumentError("cannot write report to " + out_path);
        }
        out << manifest.dump(2) << "\n";
        print_summary(std::cout, cfg, result);
        std::cout << "report written to " << out_path << "\n";
    } else if (quiet_json) {
        std::cout << manifest.dump(2) << "\n";
    } else {
        std::cout << manifest.dump(2) << "\n";
    }

    if (!trajectories_path.empty()) {
        std::ofstream csv(trajectories_path, std::ios::binary);
        if (!csv) {
            throw ArgumentError("cannot write trajectories to " + trajectories_path);
        }
        write_trajectories_csv(csv, result.per_shot);
    }
    return result.report.all_passed() ? kExitOk : kExitCheckFailed;
}

struct VerifyStats {
    int failures = 0;

    void check(const std::string &name, bool ok, double value) {
        std::cout << "[" << (ok ? "PASS" : "FAIL") << "] " << name << " (" << value << ")\n";
        if (!ok) {
            ++failures;
        }
    }
};

std::vector<cplx> deterministic_amplitudes(std::size_t d, std::uint64_t salt) {
    RngStream rng(0xE9A1u + salt, 0);
    std::vector<cplx> amps(d);
    double norm_sq = 0.0;
    for (auto &a : amps) {
        a = cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
        norm_sq += std::norm(a);
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto &a : amps) {
        a *= inv;
    }
    return amps;
}

int run_verify(std::optional<std::size_t> dim_opt, std::optional<std::size_t> depth_opt) {
    VerifyStats stats;
    std::cout.precision(3);

    for (std::size_t d = 2; d <= 16; ++d) {
        UnitaryMatrix u = ideal_coupling_unitary(d);
        stats.check("coupling_unitarity d=" + std::to_string(d), u.unitarity_defect() <= 1e-12,
                    u.unitarity_defect());
        stats.check("coupling_one_to_one d=" + std::to_string(d), verify_one_to_one(u, d), 1.0);
    }

    std::vector<std::size_t> dims = dim_opt ? std::vector<std::size_t>{*dim_opt}
                                            : std::vector<std::size_t>{2, 3, 4, 5};
    std::vector<std::size_t> depths = depth_opt ? std::vector<std::size_t>{*depth_opt}
                                                : std::vector<std::size_t>{1, 2, 3};

    for (std::size_t d : dims) {
        for (std::size_t m : depths) {
            double total = std::pow(static_cast<double>(d), static_cast<double>(m + 1));
            if (total > static_cast<double>(kMaxTotalDim)) {
                continue;
            }
            const std::string tag = " d=" + std::to_string(d) + " m=" + std::to_string(m);
            ChainConfig cfg(d, deterministic_amplitudes(d, d * 31 + m), m, std::nullopt, 1, 0,
                            false, Thresholds{});

            StateVector post_step1 = run_step1(prepare_initial(cfg), cfg);
            DensityMatrix reduced = reduced_particle_state(post_step1);

            double diag_err = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                double expected = std::norm(cfg.amplitudes()[i]);
                diag_err = std::max(diag_err,
                                    std::abs(reduced.at(i, i).real() - expected) +
                                        std::abs(reduced.at(i, i).imag()));
            }
            stats.check("reduced_diagonal_matches_born" + tag, diag_err <= 1e-10, diag_err);

            double offdiag = diagonality_check(reduced, UnitaryMatrix::identity(d));
            stats.check("reduced_offdiagonal_zero" + tag, offdiag <= 1e-12, offdiag);

            double purity_expected = 0.0;
            for (const cplx &a : cfg.amplitudes()) {
                purity_expected += std::norm(a) * std::norm(a);
            }
            double purity_err = std::abs(purity(reduced) - purity_expected);
            stats.check("reduced_purity_sum_a4" + tag, purity_err <= 1e-10, purity_err);

            StateVector pre = chain_pre_measurement_state(cfg);
            std::vector<double> probs = born_probabilities(pre, cfg.device_observable(), m);
            double sum = 0.0;
            for (double p : probs) {
                sum += p;
            }
            stats.check("born_sum_one" + tag, std::abs(sum - 1.0) <= 1e-10,
                        std::abs(sum - 1.0));

            // Enumerated collapse: every outcome leads to the matching
            // basis state with a pure particle.
            const SubsystemLayout layout = cfg.make_layout();
            double worst_fid_gap = 0.0;
            double worst_purity_gap = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                if (probs[k] <= 0.0) {
                    continue;
                }
                StateVector conditional = project_register(pre, m, k, probs[k]);
                std::size_t flat = k * layout.stride(0);
                for (std::size_t j = 1; j <= m; ++j) {
                    flat += k * layout.stride(j);
                }
                worst_fid_gap = std::max(worst_fid_gap,
                                         std::abs(1.0 - std::norm(conditional.amp(flat))));
                worst_purity_gap =
                    std::max(worst_purity_gap,
                             std::abs(1.0 - purity(reduced_particle_state(conditional))));
            }
            stats.check("collapse_fidelity" + tag, worst_fid_gap <= 1e-12, worst_fid_gap);
            stats.check("collapse_purity" + tag, worst_purity_gap <= 1e-10, worst_purity_gap);

            double gap = no_signaling_algebraic_gap(cfg);
            stats.check("no_signaling_algebraic" + tag, gap <= 1e-10, gap);
        }
    }

    std::cout << (stats.failures == 0 ? "all checks passed\n"
                                      : std::to_string(stats.failures) + " checks failed\n");
    return stats.failures == 0 ? kExitOk : kExitCheckFailed;
}

int run_sweep(const std::string &config_path, const std::string &out_dir, const Overrides &ov,
              std::size_t threads) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        throw ArgumentError("cannot read config file: " + config_path);
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(config_path + ": " + e.what());
    }
    if (!doc.is_array() || doc.empty()) {
        throw ValidationError(config_path + ": sweep config must be a non-empty JSON array");
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
    }

    int exit_code = kExitOk;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        ChainConfig cfg = apply_overrides(config_from_json(doc[i]), ov);
        RunOptions options;
        options.max_threads = threads;
        RunResult result = run_experiment(cfg, options);
        bool ok = result.report.all_passed();
        if (!ok) {
            exit_code = kExitCheckFailed;
        }
        std::cout << "config " << i << ": " << (ok ? "PASS" : "FAIL") << "\n";
        if (!out_dir.empty()) {
            auto path = std::filesystem::path(out_dir) /
                        ("report_" + std::to_string(i) + ".json");
            std::ofstream out(path, std::ios::binary);
            if (!out) {
                throw ArgumentError("cannot write report to " + path.string());
            }
            out << manifest_json(cfg, result, current_utc_timestamp()).dump(2) << "\n";
        }
    }
    return exit_code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Two-stage quantum measurement chain simulator"};
    app.set_version_flag("--version", std::string(kArtifactVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string trajectories_path;
    Overrides overrides;

    auto add_override_flags = [&](CLI::App *cmd) {
        cmd->add_option("--shots", overrides.shots, "Override the number of shots");
        cmd->add_option("--seed", overrides.seed, "Override the rng seed");
        cmd->add_option("--depth", overrides.depth, "Override the chain depth");
    };

    CLI::App *run_cmd = app.add_subcommand("run", "Run the experiment and write a report");
    run_cmd->add_option("--config", config_path, "Config JSON file")->required();
    run_cmd->add_option("--out", out_path, "Report JSON output path (default: stdout)");
    run_cmd->add_option("--trajectories", trajectories_path, "Per-shot CSV output path");
    add_override_flags(run_cmd);

    CLI::App *verify_cmd =
        app.add_subcommand("verify", "Run the algebraic invariant suite (no sampling)");
    std::optional<std::size_t> verify_dim;
    std::optional<std::size_t> verify_depth;
    verify_cmd->add_option("--dimension", verify_dim, "Single dimension to verify");
    verify_cmd->add_option("--depth", verify_depth, "Single chain depth to verify");

    CLI::App *sweep_cmd = app.add_subcommand("sweep", "Run over a JSON array of configs");
    sweep_cmd->add_option("--config", config_path, "JSON array of config objects")->required();
    sweep_cmd->add_option("--out", out_path, "Directory for per-config reports");
    add_override_flags(sweep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const std::size_t threads = thread_cap_from_env();
        if (run_cmd->parsed()) {
            ChainConfig cfg = apply_overrides(parse_config_file(config_path), overrides);
            return run_one(cfg, out_path, trajectories_path, threads, out_path.empty());
        }
        if (verify_cmd->parsed()) {
            return run_verify(verify_dim, verify_depth);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(config_path, out_path, overrides, threads);
        }
    } catch (const InternalError &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
