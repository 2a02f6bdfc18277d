#pragma once

#include "eprsim/density_matrix.hpp"
#include "eprsim/layout.hpp"
#include "eprsim/types.hpp"
#include "eprsim/unitary.hpp"

#include <span>
#include <vector>

namespace eprsim {

/// Normalized complex amplitude vector over a composite space.
/// Construction rejects vectors whose norm deviates from 1 by more than
/// 1e-6 and renormalizes smaller deviations exactly.
class StateVector {
  public:
    StateVector(SubsystemLayout layout, std::vector<cplx> amps);

    /// Computational basis state |index> on the given layout.
    static StateVector basis_state(SubsystemLayout layout, std::size_t index);

    const SubsystemLayout &layout() const { return layout_; }
    std::size_t dim() const { return layout_.total_dim(); }
    const std::vector<cplx> &amps() const { return amps_; }
    cplx amp(std::size_t i) const { return amps_[i]; }

    double norm() const;

  private:
    SubsystemLayout layout_;
    std::vector<cplx> amps_;
};

/// Product state: a's registers followed by b's,
/// amp[(i,j)] = a.amps[i] * b.amps[j].
StateVector tensor_product(const StateVector &a, const StateVector &b);

/// Transform the amplitudes on the target registers by u, leaving all
/// other registers untouched. `targets` fixes the register order of u's
/// composite index (row-major over the list as given); the product of
/// target dims must equal u.dim.
StateVector apply_unitary(const StateVector &psi, const UnitaryMatrix &u,
                          std::span<const std::size_t> targets);

/// |psi><psi| on psi's layout.
DensityMatrix to_density(const StateVector &psi);

/// Reduced density matrix of the kept registers of a pure state,
/// computed directly from the amplitudes:
///   rho[a][b] = sum_t psi[a,t] conj(psi[b,t]).
/// Equals partial_trace(to_density(psi), keep) without materializing the
/// joint operator.
DensityMatrix reduced_density(const StateVector &psi, std::span<const std::size_t> keep);

/// |<psi|phi>|^2; layouts must be identical.
double fidelity_pure(const StateVector &psi, const StateVector &phi);

} // namespace eprsim
