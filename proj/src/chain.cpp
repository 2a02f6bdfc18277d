#include "eprsim/chain.hpp"

#include "eprsim/errors.hpp"
#include "eprsim/parallel.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace eprsim {

namespace {

std::vector<std::size_t> identity_map(std::size_t d) {
    std::vector<std::size_t> m(d);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return m;
}

} // namespace

ChainConfig::ChainConfig(std::size_t dimension, std::vector<cplx> amplitudes,
                         std::size_t chain_depth, std::optional<UnitaryMatrix> coupling,
                         std::uint64_t shots, std::uint64_t seed, bool measure_particle_after,
                         Thresholds thresholds)
    : dimension_(dimension), amplitudes_(std::move(amplitudes)), chain_depth_(chain_depth),
      explicit_coupling_(std::move(coupling)), shots_(shots), seed_(seed),
      measure_particle_after_(measure_particle_after), thresholds_(thresholds),
      step1_unitary_(explicit_coupling_ ? *explicit_coupling_
                                        : ideal_coupling_unitary(dimension)),
      device_coupling_(ideal_coupling_unitary(dimension)) {
    if (dimension_ < 2) {
        throw ValidationError("dimension must be >= 2");
    }
    if (chain_depth_ < 1) {
        throw ValidationError("chain_depth must be >= 1");
    }
    if (shots_ < 1) {
        throw ValidationError("shots must be >= 1");
    }
    if (amplitudes_.size() != dimension_) {
        throw ValidationError("expected " + std::to_string(dimension_) + " amplitudes, got " +
                              std::to_string(amplitudes_.size()));
    }
    double norm_sq = 0.0;
    for (const cplx &a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("amplitude is not finite");
        }
        norm_sq += std::norm(a);
    }
    double n = std::sqrt(norm_sq);
    if (std::abs(n - 1.0) > kNormInputTol) {
        throw ValidationError("amplitudes have norm " + std::to_string(n) +
                              ", more than 1e-6 away from 1");
    }
    if (n != 1.0) {
        for (cplx &a : amplitudes_) {
            a /= n;
        }
    }
    if (explicit_coupling_ && explicit_coupling_->dim() != dimension_ * dimension_) {
        throw ValidationError("explicit coupling has dim " +
                              std::to_string(explicit_coupling_->dim()) + ", expected d^2 = " +
                              std::to_string(dimension_ * dimension_));
    }
    std::size_t total = 1;
    for (std::size_t r = 0; r < chain_depth_ + 1; ++r) {
        if (total > kMaxTotalDim / dimension_) {
            throw ValidationError("total dimension d^(m+1) exceeds cap of " +
                                  std::to_string(kMaxTotalDim));
        }
        total *= dimension_;
    }
    if (thresholds_.sigma < 0.0 || !std::isfinite(thresholds_.sigma)) {
        throw ValidationError("thresholds.sigma must be a finite non-negative number");
    }
    if (thresholds_.tv_max &&
        (*thresholds_.tv_max < 0.0 || !std::isfinite(*thresholds_.tv_max))) {
        throw ValidationError("thresholds.tv_max must be a finite non-negative number");
    }
    pointer_map_ = explicit_coupling_ ? one_to_one_map(step1_unitary_, dimension_)
                                      : std::optional(identity_map(dimension_));
}

SubsystemLayout ChainConfig::make_layout() const {
    std::vector<std::size_t> dims(chain_depth_ + 1, dimension_);
    std::vector<std::string> labels;
    labels.reserve(dims.size());
    labels.emplace_back("particle");
    for (std::size_t j = 1; j <= chain_depth_; ++j) {
        labels.push_back("device_" + std::to_string(j));
    }
    return SubsystemLayout(std::move(dims), std::move(labels));
}

const char *to_string(Stage stage) {
    switch (stage) {
    case Stage::prepared:
        return "prepared";
    case Stage::entangled:
        return "entangled";
    case Stage::separated:
        return "separated";
    case Stage::collapsed:
        return "collapsed";
    }
    return "unknown";
}

StateVector prepare_initial(const ChainConfig &config) {
    SubsystemLayout layout = config.make_layout();
    const std::size_t particle_stride = layout.stride(0);
    std::vector<cplx> amps(layout.total_dim(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < config.dimension(); ++i) {
        amps[i * particle_stride] = config.amplitudes()[i];
    }
    return StateVector(std::move(layout), std::move(amps));
}

StateVector run_step1(const StateVector &state, const ChainConfig &config) {
    if (!(state.layout() == config.make_layout())) {
        throw ShapeError("state layout does not match the chain configuration");
    }
    const std::size_t targets[2] = {0, 1};
    return apply_unitary(state, config.step1_unitary(), targets);
}

StateVector mark_separation(const StateVector &state) { return state; }

std::pair<MeasurementOutcome, StateVector>
run_step2(const StateVector &state, const ChainConfig &config, RngStream &rng) {
    if (!(state.layout() == config.make_layout())) {
        throw ShapeError("state layout does not match the chain configuration");
    }
    const std::size_t m = config.chain_depth();
    StateVector psi = state;
    for (std::size_t j = 1; j + 1 <= m; ++j) {
        const std::size_t targets[2] = {j, j + 1};
        psi = apply_unitary(psi, config.device_coupling_unitary(), targets);
    }
    auto [raw, collapsed] = measure_and_collapse(psi, config.device_observable(), m, rng);

    // A genuine measuring device's readout is interpreted through the
    // one-to-one correspondence: pointer state sigma(i) means "the
    // particle's F has value F_i". Without such a map the raw pointer
    // index is reported as-is.
    MeasurementOutcome reported = raw;
    if (config.pointer_map()) {
        const auto &sigma = *config.pointer_map();
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            if (sigma[i] == raw.outcome_index) {
                reported.outcome_index = i;
                reported.eigenvalue = config.particle_observable().eigenvalue(i);
                break;
            }
        }
    }
    return {reported, std::move(collapsed)};
}

DensityMatrix reduced_particle_state(const StateVector &state) {
    const std::size_t keep[1] = {0};
    return reduced_density(state, keep);
}

namespace {

/// The devices of a post-collapse state all sit in the same basis state;
/// the particle factor is read off the corresponding amplitude slice.
StateVector extract_particle_state(const StateVector &joint, const ChainConfig &config,
                                   std::size_t raw_pointer_index) {
    const SubsystemLayout &layout = joint.layout();
    const std::size_t d = config.dimension();
    std::size_t device_part = 0;
    for (std::size_t j = 1; j < layout.num_registers(); ++j) {
        device_part += raw_pointer_index * layout.stride(j);
    }
    std::vector<cplx> amps(d);
    for (std::size_t i = 0; i < d; ++i) {
        amps[i] = joint.amp(i * layout.stride(0) + device_part);
    }
    return StateVector(SubsystemLayout({d}, {"particle"}), std::move(amps));
}

} // namespace

ShotOutput run_single_shot_full(const ChainConfig &config, std::uint64_t shot_index) {
    RngStream rng(config.seed(), shot_index);

    StateVector prepared = prepare_initial(config);
    std::vector<StepRecord> records;
    records.reserve(4);
    records.push_back(
        {Stage::prepared, prepared.norm(), reduced_particle_state(prepared), std::nullopt});

    StateVector entangled = run_step1(prepared, config);
    records.push_back(
        {Stage::entangled, entangled.norm(), reduced_particle_state(entangled), std::nullopt});

    StateVector separated = mark_separation(entangled);
    records.push_back(
        {Stage::separated, separated.norm(), reduced_particle_state(separated), std::nullopt});

    auto [outcome, collapsed] = run_step2(separated, config, rng);
    records.push_back(
        {Stage::collapsed, collapsed.norm(), reduced_particle_state(collapsed), outcome});

    std::size_t raw = outcome.outcome_index;
    if (config.pointer_map()) {
        raw = (*config.pointer_map())[outcome.outcome_index];
    }
    StateVector particle = extract_particle_state(collapsed, config, raw);

    std::optional<MeasurementOutcome> particle_outcome;
    if (config.measure_particle_after()) {
        auto [po, rest] = measure_and_collapse(collapsed, config.particle_observable(), 0, rng);
        particle_outcome = po;
    }

    Trajectory trajectory{shot_index, std::move(records), std::move(particle),
                          particle_outcome};
    return ShotOutput{std::move(trajectory), std::move(collapsed), raw};
}

Trajectory run_single_shot(const ChainConfig &config, std::uint64_t shot_index) {
    return run_single_shot_full(config, shot_index).trajectory;
}

std::vector<Trajectory> run_chain(const ChainConfig &config, std::size_t max_threads) {
    std::vector<std::optional<Trajectory>> slots(config.shots());
    parallel_for_chunks(config.shots(), max_threads,
                        [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
                            for (std::uint64_t s = begin; s < end; ++s) {
                                slots[s] = run_single_shot(config, s);
                            }
                        });
    std::vector<Trajectory> out;
    out.reserve(slots.size());
    for (auto &slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

StateVector chain_pre_measurement_state(const ChainConfig &config) {
    StateVector psi = run_step1(prepare_initial(config), config);
    for (std::size_t j = 1; j + 1 <= config.chain_depth(); ++j) {
        const std::size_t targets[2] = {j, j + 1};
        psi = apply_unitary(psi, config.device_coupling_unitary(), targets);
    }
    return psi;
}

std::vector<double> chain_outcome_probabilities(const ChainConfig &config) {
    StateVector psi = chain_pre_measurement_state(config);
    std::vector<double> raw =
        born_probabilities(psi, config.device_observable(), config.chain_depth());
    if (!config.pointer_map()) {
        return raw;
    }
    const auto &sigma = *config.pointer_map();
    std::vector<double> reported(raw.size(), 0.0);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        reported[i] = raw[sigma[i]];
    }
    return reported;
}

} // namespace eprsim
