#pragma once

#include "eprsim/layout.hpp"
#include "eprsim/types.hpp"

#include <span>
#include <vector>

namespace eprsim {

/// Hermitian, unit-trace operator on a composite (sub)space. Row-major
/// storage, side = total dimension of the layout. Construction checks
/// Hermiticity and trace to 1e-10; positive semidefiniteness is a test
/// obligation, not a construction check.
class DensityMatrix {
  public:
    DensityMatrix(SubsystemLayout layout, std::vector<cplx> entries);

    const SubsystemLayout &layout() const { return layout_; }
    std::size_t side() const { return layout_.total_dim(); }
    const std::vector<cplx> &entries() const { return m_; }
    cplx at(std::size_t row, std::size_t col) const { return m_[row * side() + col]; }

    /// max entrywise |this - other|; layouts must match.
    double max_abs_diff(const DensityMatrix &other) const;

  private:
    SubsystemLayout layout_;
    std::vector<cplx> m_;
};

/// Reduced operator on the kept registers (original relative order),
/// obtained by tracing out the rest. Trace and Hermiticity preserved.
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep);

/// trace(rho^2); 1 for pure states, 1/side for the maximally mixed state.
double purity(const DensityMatrix &rho);

} // namespace eprsim
