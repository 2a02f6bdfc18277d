#pragma once

#include "eprsim/density_matrix.hpp"
#include "eprsim/measurement.hpp"
#include "eprsim/observable.hpp"
#include "eprsim/rng.hpp"
#include "eprsim/state_vector.hpp"
#include "eprsim/unitary.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eprsim {

/// Statistical acceptance thresholds. `sigma` scales every binomial
/// bound; `tv_max`, when set, overrides the derived bound on the
/// two-arm total-variation distance.
struct Thresholds {
    double sigma = 4.0;
    std::optional<double> tv_max;
};

/// Full description of one chain experiment: the particle's initial
/// amplitudes, how many devices measure in sequence, which coupling
/// the first device uses, and the sampling budget.
///
/// The coupling between consecutive devices is always the ideal copy;
/// only the particle-to-first-device coupling is configurable. A
/// missing explicit coupling means "ideal".
class ChainConfig {
  public:
    ChainConfig(std::size_t dimension, std::vector<cplx> amplitudes, std::size_t chain_depth = 1,
                std::optional<UnitaryMatrix> coupling = std::nullopt,
                std::uint64_t shots = 100000, std::uint64_t seed = 0,
                bool measure_particle_after = false, Thresholds thresholds = Thresholds{});

    std::size_t dimension() const { return dimension_; }
    const std::vector<cplx> &amplitudes() const { return amplitudes_; }
    std::size_t chain_depth() const { return chain_depth_; }
    bool ideal_coupling() const { return !explicit_coupling_.has_value(); }
    const std::optional<UnitaryMatrix> &explicit_coupling() const { return explicit_coupling_; }
    std::uint64_t shots() const { return shots_; }
    std::uint64_t seed() const { return seed_; }
    bool measure_particle_after() const { return measure_particle_after_; }
    const Thresholds &thresholds() const { return thresholds_; }

    /// The unitary applied between particle and device_1.
    const UnitaryMatrix &step1_unitary() const { return step1_unitary_; }

    /// The ideal copy unitary used between consecutive devices.
    const UnitaryMatrix &device_coupling_unitary() const { return device_coupling_; }

    /// Pointer map sigma of the step-1 coupling, when it acts as a
    /// genuine measuring device (always present for "ideal").
    const std::optional<std::vector<std::size_t>> &pointer_map() const { return pointer_map_; }

    /// [particle, device_1 .. device_m], every register of dimension d.
    SubsystemLayout make_layout() const;

    /// The F observable of the particle: eigenvalues i, eigenbasis
    /// computational (the simulation basis is F's eigenbasis).
    Observable particle_observable() const { return Observable(dimension_); }

    /// Pointer-basis observable of a device register.
    Observable device_observable() const { return Observable(dimension_); }

  private:
    std::size_t dimension_;
    std::vector<cplx> amplitudes_;
    std::size_t chain_depth_;
    std::optional<UnitaryMatrix> explicit_coupling_;
    std::uint64_t shots_;
    std::uint64_t seed_;
    bool measure_particle_after_;
    Thresholds thresholds_;

    UnitaryMatrix step1_unitary_;
    UnitaryMatrix device_coupling_;
    std::optional<std::vector<std::size_t>> pointer_map_;
};

enum class Stage { prepared, entangled, separated, collapsed };

const char *to_string(Stage stage);

/// Snapshot of the joint state at one stage of a trajectory. The
/// outcome is present exactly at the collapsed stage.
struct StepRecord {
    Stage stage;
    double joint_state_norm;
    DensityMatrix particle_reduced;
    std::optional<MeasurementOutcome> outcome;
};

struct Trajectory {
    std::uint64_t shot_index;
    std::vector<StepRecord> records;
    StateVector final_particle_state;
    std::optional<MeasurementOutcome> final_particle_measurement;
};

/// Psi_p ⊗ |0>^m on [particle, device_1 .. device_m].
StateVector prepare_initial(const ChainConfig &config);

/// Applies the step-1 coupling to (particle, device_1).
StateVector run_step1(const StateVector &state, const ChainConfig &config);

/// The "large distance" wait: an explicit no-op stage marker.
StateVector mark_separation(const StateVector &state);

/// Entangles each device with the next via the ideal copy coupling,
/// then projectively measures the last device in its pointer basis.
/// The reported outcome index is expressed in particle-eigenvalue terms
/// (pointer states are translated through the coupling's one-to-one
/// map when there is one).
std::pair<MeasurementOutcome, StateVector>
run_step2(const StateVector &state, const ChainConfig &config, RngStream &rng);

/// Partial trace over all device registers.
DensityMatrix reduced_particle_state(const StateVector &state);

/// One full prepare -> step1 -> separation -> step2 pass with rng
/// stream index = shot_index, recording every stage.
Trajectory run_single_shot(const ChainConfig &config, std::uint64_t shot_index);

/// run_single_shot plus the collapsed joint state and the raw pointer
/// basis index of the sampled outcome, for callers that check the joint
/// post-measurement state.
struct ShotOutput {
    Trajectory trajectory;
    StateVector collapsed_joint;
    std::size_t raw_pointer_index;
};

ShotOutput run_single_shot_full(const ChainConfig &config, std::uint64_t shot_index);

/// All shots as independent trajectories, stream index = shot index.
/// `max_threads` = 0 picks the hardware default; results are identical
/// for every thread count.
std::vector<Trajectory> run_chain(const ChainConfig &config, std::size_t max_threads = 0);

/// Deterministic part of the experiment: prepared state with step 1 and
/// all device-to-device couplings applied, before any sampling.
StateVector chain_pre_measurement_state(const ChainConfig &config);

/// Distribution of the reported chain outcome, computed algebraically
/// from the pre-measurement state.
std::vector<double> chain_outcome_probabilities(const ChainConfig &config);

} // namespace eprsim
