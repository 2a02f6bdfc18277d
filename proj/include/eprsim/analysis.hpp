#pragma once

#include "eprsim/chain.hpp"
#include "eprsim/density_matrix.hpp"
#include "eprsim/unitary.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eprsim {

struct OutcomeHistogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t shots = 0;

    std::vector<double> frequencies() const;
};

struct ChiSquareResult {
    double statistic;
    double pvalue;
    std::size_t dof;
};

struct NoSignalingResult {
    /// TV distance between the particle's empirical F distributions with
    /// and without step 2 executed.
    double tv;
    /// Statistical bound on TV implied by the configured sigma (or the
    /// tv_max override).
    double tv_bound;
    /// max entrywise |rho_particle - sum_k p_k rho_particle|k|, exact.
    double algebraic_gap;
    std::vector<double> freq_without_step2;
    std::vector<double> freq_with_step2;
};

/// Aggregate verdict of one experiment run. `pass_flags` holds one named
/// boolean per check actually performed.
struct VerificationReport {
    double born_tv_distance = 0.0;
    double chi_square_stat = 0.0;
    double chi_square_pvalue = 1.0;
    std::optional<double> correlation_rate;
    double reduced_offdiag_max = 0.0;
    double no_signaling_tv = 0.0;
    double no_signaling_algebraic_gap = 0.0;
    double purity_before = 0.0;
    double purity_after = 0.0;
    std::map<std::string, bool> pass_flags;

    bool all_passed() const;
};

/// Histogram of chain outcomes over collapsed trajectories.
OutcomeHistogram empirical_distribution(const std::vector<Trajectory> &trajectories);

/// (1/2) sum |p_i - q_i|.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Pearson chi-square goodness of fit against expected probabilities.
/// Bins with expected count below 5 are pooled into one; the p-value
/// comes from the chi-square survival function with (bins - 1) degrees
/// of freedom. Throws ArgumentError when fewer than two bins survive
/// pooling (the distribution is degenerate and the test undefined).
ChiSquareResult chi_square_gof(const OutcomeHistogram &hist, std::span<const double> probs);

/// Fraction of shots where the particle's own F outcome agrees with the
/// chain outcome. Requires final particle measurements on every shot.
double correlation_rate(const std::vector<Trajectory> &trajectories);

/// Exact part of the no-signaling check, no sampling:
/// max entrywise |rho_particle - sum_k p_k rho_particle|k|.
double no_signaling_algebraic_gap(const ChainConfig &config);

/// Two-arm experiment: measures F on the particle with and without
/// executing step 2, plus the exact algebraic check that the outcome-
/// averaged reduced state equals the pre-step-2 one.
NoSignalingResult no_signaling_check(const ChainConfig &config, std::size_t max_threads = 0);

/// max |(V† rho V)_ij| over i != j.
double diagonality_check(const DensityMatrix &rho, const UnitaryMatrix &basis);

} // namespace eprsim
