#include "eprsim/unitary.hpp"

#include "eprsim/errors.hpp"

#include <cmath>
#include <string>

namespace eprsim {

UnitaryMatrix::UnitaryMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), m_(std::move(entries)) {
    if (dim_ == 0) {
        throw ArgumentError("unitary dimension must be positive");
    }
    if (m_.size() != dim_ * dim_) {
        throw ShapeError("unitary of dim " + std::to_string(dim_) + " needs " +
                         std::to_string(dim_ * dim_) + " entries, got " +
                         std::to_string(m_.size()));
    }
    for (const cplx &z : m_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw ValidationError("unitary contains a non-finite entry");
        }
    }
    double defect = unitarity_defect();
    if (defect > kAlgebraTol) {
        throw ValidationError("matrix is not unitary: max |U†U - I| = " + std::to_string(defect));
    }
    detect_identity();
}

UnitaryMatrix::UnitaryMatrix(std::size_t dim, std::vector<cplx> entries, unchecked_t)
    : dim_(dim), m_(std::move(entries)) {
    detect_identity();
}

void UnitaryMatrix::detect_identity() {
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            if (m_[i * dim_ + j] != cplx(i == j ? 1.0 : 0.0, 0.0)) {
                identity_ = false;
                return;
            }
        }
    }
    identity_ = true;
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
    std::vector<cplx> m(dim * dim, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        m[i * dim + i] = cplx(1.0, 0.0);
    }
    return UnitaryMatrix(dim, std::move(m), unchecked_t{});
}

double UnitaryMatrix::unitarity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < dim_; ++k) {
                acc += std::conj(m_[k * dim_ + i]) * m_[k * dim_ + j];
            }
            if (i == j) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
    std::vector<cplx> m(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            m[j * dim_ + i] = std::conj(m_[i * dim_ + j]);
        }
    }
    return UnitaryMatrix(dim_, std::move(m), unchecked_t{});
}

UnitaryMatrix UnitaryMatrix::multiply(const UnitaryMatrix &other) const {
    if (dim_ != other.dim_) {
        throw ShapeError("unitary product of dims " + std::to_string(dim_) + " and " +
                         std::to_string(other.dim_));
    }
    std::vector<cplx> m(dim_ * dim_, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = 0; k < dim_; ++k) {
            cplx aik = m_[i * dim_ + k];
            if (aik == cplx(0.0, 0.0)) {
                continue;
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                m[i * dim_ + j] += aik * other.m_[k * dim_ + j];
            }
        }
    }
    return UnitaryMatrix(dim_, std::move(m), unchecked_t{});
}

std::vector<cplx> UnitaryMatrix::apply(std::span<const cplx> x) const {
    if (x.size() != dim_) {
        throw ShapeError("vector of size " + std::to_string(x.size()) +
                         " incompatible with unitary of dim " + std::to_string(dim_));
    }
    std::vector<cplx> y(dim_, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < dim_; ++i) {
        cplx acc(0.0, 0.0);
        const cplx *row = &m_[i * dim_];
        for (std::size_t j = 0; j < dim_; ++j) {
            acc += row[j] * x[j];
        }
        y[i] = acc;
    }
    return y;
}

} // namespace eprsim
