#pragma once

#include "eprsim/types.hpp"
#include "eprsim/unitary.hpp"

#include <optional>
#include <vector>

namespace eprsim {

/// Observable with discrete nondegenerate eigenvalues and an orthonormal
/// eigenbasis (columns of `eigenbasis` are the eigenvectors). Defaults:
/// eigenvalues 0..d-1, computational eigenbasis.
class Observable {
  public:
    explicit Observable(std::size_t dim);
    Observable(std::size_t dim, std::vector<double> eigenvalues);
    Observable(std::size_t dim, std::vector<double> eigenvalues, UnitaryMatrix eigenbasis);

    std::size_t dim() const { return dim_; }
    const std::vector<double> &eigenvalues() const { return eigenvalues_; }
    double eigenvalue(std::size_t i) const { return eigenvalues_.at(i); }
    const UnitaryMatrix &eigenbasis() const { return eigenbasis_; }

    /// V† of the eigenbasis, cached: maps amplitudes into the eigenbasis.
    const UnitaryMatrix &eigenbasis_adjoint() const { return eigenbasis_adjoint_; }

    bool computational_basis() const { return eigenbasis_.is_identity(); }

  private:
    void validate() const;

    std::size_t dim_;
    std::vector<double> eigenvalues_;
    UnitaryMatrix eigenbasis_;
    UnitaryMatrix eigenbasis_adjoint_;
};

} // namespace eprsim
