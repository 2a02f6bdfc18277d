#pragma once

#include "eprsim/observable.hpp"
#include "eprsim/rng.hpp"
#include "eprsim/state_vector.hpp"
#include "eprsim/unitary.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace eprsim {

struct MeasurementOutcome {
    std::size_t outcome_index;
    double eigenvalue;
    double probability;
};

/// Measurement coupling on a (system, device) register pair of equal
/// dimension d: U|i>|j> = |i>|(j+i) mod d>. Copies the system's basis
/// index into a device prepared in |0>, so U(|i>|0>) = |i>|i>.
UnitaryMatrix ideal_coupling_unitary(std::size_t d);

/// If u acts as a measurement coupling on the |i>|0> subspace —
/// u(|i>|0>) = |i>|sigma(i)> up to a unit-modulus phase, with sigma
/// injective — returns sigma. Returns nullopt otherwise. u.dim must be
/// d*d.
std::optional<std::vector<std::size_t>> one_to_one_map(const UnitaryMatrix &u, std::size_t d);

/// True iff u establishes a one-to-one correspondence between system
/// eigenstates and orthonormal device pointer states.
bool verify_one_to_one(const UnitaryMatrix &u, std::size_t d);

/// Born distribution of obs measured on the target register:
/// p_i = <psi| Pi_i |psi> with Pi_i projecting onto eigenvector i.
/// Sums to 1 within 1e-10; tiny negative dust is clamped to 0.
std::vector<double> born_probabilities(const StateVector &psi, const Observable &obs,
                                       std::size_t target);

/// Samples an outcome by inverse CDF over ascending outcome index using
/// one uniform draw, then projects and renormalizes. Deterministic for a
/// given rng stream state.
std::pair<MeasurementOutcome, StateVector>
measure_and_collapse(const StateVector &psi, const Observable &obs, std::size_t target,
                     RngStream &rng);

/// Deterministic collapse: projects `target` onto computational basis
/// index k and renormalizes by the known outcome probability.
StateVector project_register(const StateVector &psi, std::size_t target, std::size_t k,
                             double probability);

} // namespace eprsim
