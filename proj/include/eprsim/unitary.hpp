#pragma once

#include "eprsim/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace eprsim {

/// Dense complex matrix validated to be unitary on construction:
/// max |U†U - I| <= 1e-10, all entries finite. Row-major storage.
class UnitaryMatrix {
  public:
    UnitaryMatrix(std::size_t dim, std::vector<cplx> entries);

    static UnitaryMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    const std::vector<cplx> &entries() const { return m_; }
    cplx at(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }

    /// Adjoint (inverse). Skips revalidation.
    UnitaryMatrix adjoint() const;

    /// this * other. Skips revalidation.
    UnitaryMatrix multiply(const UnitaryMatrix &other) const;

    /// Dense matrix-vector product; x.size() must equal dim().
    std::vector<cplx> apply(std::span<const cplx> x) const;

    bool is_identity() const { return identity_; }

    /// max |U†U - I| of the stored entries.
    double unitarity_defect() const;

    bool operator==(const UnitaryMatrix &other) const {
        return dim_ == other.dim_ && m_ == other.m_;
    }

  private:
    struct unchecked_t {};
    UnitaryMatrix(std::size_t dim, std::vector<cplx> entries, unchecked_t);

    void detect_identity();

    std::size_t dim_;
    std::vector<cplx> m_;
    bool identity_ = false;
};

} // namespace eprsim
