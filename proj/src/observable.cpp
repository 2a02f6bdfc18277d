#include "eprsim/observable.hpp"

#include "eprsim/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace eprsim {

namespace {

std::vector<double> default_eigenvalues(std::size_t dim) {
    std::vector<double> vals(dim);
    std::iota(vals.begin(), vals.end(), 0.0);
    return vals;
}

} // namespace

Observable::Observable(std::size_t dim)
    : Observable(dim, default_eigenvalues(dim), UnitaryMatrix::identity(dim)) {}

Observable::Observable(std::size_t dim, std::vector<double> eigenvalues)
    : Observable(dim, std::move(eigenvalues), UnitaryMatrix::identity(dim)) {}

Observable::Observable(std::size_t dim, std::vector<double> eigenvalues, UnitaryMatrix eigenbasis)
    : dim_(dim), eigenvalues_(std::move(eigenvalues)), eigenbasis_(std::move(eigenbasis)),
      eigenbasis_adjoint_(eigenbasis_.adjoint()) {
    validate();
}

void Observable::validate() const {
    if (dim_ < 2) {
        throw ArgumentError("observable dimension must be >= 2");
    }
    if (eigenvalues_.size() != dim_) {
        throw ShapeError("observable of dim " + std::to_string(dim_) + " has " +
                         std::to_string(eigenvalues_.size()) + " eigenvalues");
    }
    if (eigenbasis_.dim() != dim_) {
        throw ShapeError("eigenbasis dim " + std::to_string(eigenbasis_.dim()) +
                         " does not match observable dim " + std::to_string(dim_));
    }
    for (double v : eigenvalues_) {
        if (!std::isfinite(v)) {
            throw ValidationError("observable eigenvalue is not finite");
        }
    }
    // Nondegeneracy: pairwise gaps above 1e-9.
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            if (std::abs(eigenvalues_[i] - eigenvalues_[j]) <= kEigenvalueGapTol) {
                throw ValidationError("observable eigenvalues " + std::to_string(i) + " and " +
                                      std::to_string(j) + " are degenerate");
            }
        }
    }
}

} // namespace eprsim
