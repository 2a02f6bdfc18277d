#include "eprsim/analysis.hpp"

#include "eprsim/errors.hpp"
#include "eprsim/parallel.hpp"
#include "eprsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

namespace eprsim {

std::vector<double> OutcomeHistogram::frequencies() const {
    std::vector<double> f(counts.size(), 0.0);
    if (shots == 0) {
        return f;
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        f[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return f;
}

bool VerificationReport::all_passed() const {
    for (const auto &[name, ok] : pass_flags) {
        if (!ok) {
            return false;
        }
    }
    return true;
}

OutcomeHistogram empirical_distribution(const std::vector<Trajectory> &trajectories) {
    if (trajectories.empty()) {
        throw ArgumentError("empirical distribution of an empty trajectory list");
    }
    const std::size_t d = trajectories.front().records.back().particle_reduced.side();
    OutcomeHistogram hist;
    hist.counts.assign(d, 0);
    for (const auto &t : trajectories) {
        if (t.records.empty() || !t.records.back().outcome) {
            throw ArgumentError("trajectory " + std::to_string(t.shot_index) +
                                " has no collapsed record");
        }
        std::size_t k = t.records.back().outcome->outcome_index;
        if (k >= d) {
            throw InternalError("outcome index out of range");
        }
        ++hist.counts[k];
        ++hist.shots;
    }
    return hist;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw ShapeError("total variation of distributions with different lengths");
    }
    double sum_p = 0.0;
    double sum_q = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sum_p += p[i];
        sum_q += q[i];
        acc += std::abs(p[i] - q[i]);
    }
    if (std::abs(sum_p - 1.0) > 1e-8 || std::abs(sum_q - 1.0) > 1e-8) {
        throw ArgumentError("total variation inputs must each sum to 1 within 1e-8");
    }
    return 0.5 * acc;
}

ChiSquareResult chi_square_gof(const OutcomeHistogram &hist, std::span<const double> probs) {
    if (probs.size() != hist.counts.size()) {
        throw ShapeError("probability vector length does not match histogram");
    }
    const double n = static_cast<double>(hist.shots);
    constexpr double kMinExpected = 5.0;

    double stat = 0.0;
    std::size_t bins = 0;
    double pooled_count = 0.0;
    double pooled_expected = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double expected = n * probs[i];
        const double count = static_cast<double>(hist.counts[i]);
        if (expected >= kMinExpected) {
            stat += (count - expected) * (count - expected) / expected;
            ++bins;
        } else {
            pooled_count += count;
            pooled_expected += expected;
        }
    }
    if (pooled_expected > 0.0) {
        stat += (pooled_count - pooled_expected) * (pooled_count - pooled_expected) /
                pooled_expected;
        ++bins;
    } else if (pooled_count > 0.0) {
        // Counts landed where the model puts zero mass.
        return ChiSquareResult{std::numeric_limits<double>::infinity(), 0.0,
                               bins > 0 ? bins - 1 : 0};
    }
    if (bins < 2) {
        throw ArgumentError("chi-square is degenerate: fewer than two bins after pooling");
    }
    return ChiSquareResult{stat, chi_square_survival(stat, bins - 1), bins - 1};
}

double correlation_rate(const std::vector<Trajectory> &trajectories) {
    if (trajectories.empty()) {
        throw ArgumentError("correlation rate of an empty trajectory list");
    }
    std::uint64_t agree = 0;
    for (const auto &t : trajectories) {
        if (!t.final_particle_measurement) {
            throw ArgumentError("trajectory " + std::to_string(t.shot_index) +
                                " is missing the final particle measurement");
        }
        if (t.records.empty() || !t.records.back().outcome) {
            throw ArgumentError("trajectory " + std::to_string(t.shot_index) +
                                " has no collapsed record");
        }
        if (t.final_particle_measurement->outcome_index ==
            t.records.back().outcome->outcome_index) {
            ++agree;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(trajectories.size());
}

namespace {

std::vector<std::uint64_t> sample_particle_counts(const StateVector &state,
                                                  const ChainConfig &config, bool with_step2,
                                                  std::uint64_t stream_base,
                                                  std::size_t max_threads) {
    const std::size_t d = config.dimension();
    const std::size_t last = config.chain_depth();
    const Observable particle_obs = config.particle_observable();
    const Observable device_obs = config.device_observable();

    std::vector<std::uint64_t> counts(d, 0);
    std::mutex merge_mutex;
    parallel_for_chunks(config.shots(), max_threads,
                        [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
                            std::vector<std::uint64_t> local(d, 0);
                            for (std::uint64_t s = begin; s < end; ++s) {
                                RngStream rng(config.seed(), stream_base + s);
                                if (with_step2) {
                                    auto [k, collapsed] =
                                        measure_and_collapse(state, device_obs, last, rng);
                                    auto [po, rest] =
                                        measure_and_collapse(collapsed, particle_obs, 0, rng);
                                    ++local[po.outcome_index];
                                } else {
                                    auto [po, rest] =
                                        measure_and_collapse(state, particle_obs, 0, rng);
                                    ++local[po.outcome_index];
                                }
                            }
                            std::lock_guard<std::mutex> lock(merge_mutex);
                            for (std::size_t i = 0; i < d; ++i) {
                                counts[i] += local[i];
                            }
                        });
    return counts;
}

} // namespace

double no_signaling_algebraic_gap(const ChainConfig &config) {
    const std::size_t d = config.dimension();
    const std::size_t last = config.chain_depth();

    StateVector post_step1 = run_step1(prepare_initial(config), config);
    DensityMatrix rho_before = reduced_particle_state(post_step1);

    // The outcome-weighted mixture of conditional reduced states must
    // reproduce the pre-step-2 reduced state.
    StateVector pre = chain_pre_measurement_state(config);
    std::vector<double> p_raw = born_probabilities(pre, config.device_observable(), last);
    std::vector<cplx> mix(d * d, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < d; ++k) {
        if (p_raw[k] <= 0.0) {
            continue;
        }
        StateVector conditional = project_register(pre, last, k, p_raw[k]);
        DensityMatrix rho_k = reduced_particle_state(conditional);
        for (std::size_t i = 0; i < d * d; ++i) {
            mix[i] += p_raw[k] * rho_k.entries()[i];
        }
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < d * d; ++i) {
        gap = std::max(gap, std::abs(mix[i] - rho_before.entries()[i]));
    }
    return gap;
}

NoSignalingResult no_signaling_check(const ChainConfig &config, std::size_t max_threads) {
    const std::size_t d = config.dimension();

    StateVector post_step1 = run_step1(prepare_initial(config), config);
    double gap = no_signaling_algebraic_gap(config);
    StateVector pre = chain_pre_measurement_state(config);

    // Statistical check: two arms with disjoint streams, one F sample of
    // the particle per shot.
    const std::uint64_t shots = config.shots();
    StateVector separated = mark_separation(post_step1);
    auto counts_without =
        sample_particle_counts(separated, config, false, shots, max_threads);
    auto counts_with = sample_particle_counts(pre, config, true, 2 * shots, max_threads);

    std::vector<double> freq_without(d), freq_with(d);
    for (std::size_t i = 0; i < d; ++i) {
        freq_without[i] = static_cast<double>(counts_without[i]) / static_cast<double>(shots);
        freq_with[i] = static_cast<double>(counts_with[i]) / static_cast<double>(shots);
    }
    double tv = total_variation(freq_without, freq_with);

    double bound;
    if (config.thresholds().tv_max) {
        bound = *config.thresholds().tv_max;
    } else {
        std::vector<double> p = born_probabilities(post_step1, config.particle_observable(), 0);
        double half_sum = 0.0;
        const double var_scale = 2.0 / static_cast<double>(shots);
        for (double pi : p) {
            half_sum += 0.5 * std::sqrt(pi * (1.0 - pi) * var_scale);
        }
        bound = config.thresholds().sigma * half_sum;
    }

    return NoSignalingResult{tv, bound, gap, std::move(freq_without), std::move(freq_with)};
}

double diagonality_check(const DensityMatrix &rho, const UnitaryMatrix &basis) {
    const std::size_t n = rho.side();
    if (basis.dim() != n) {
        throw ShapeError("basis dim " + std::to_string(basis.dim()) +
                         " does not match density matrix side " + std::to_string(n));
    }
    // M = V† rho V
    std::vector<cplx> tmp(n * n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                acc += std::conj(basis.at(k, i)) * rho.at(k, j);
            }
            tmp[i * n + j] = acc;
        }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                acc += tmp[i * n + k] * basis.at(k, j);
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

} // namespace eprsim
