#include "eprsim/density_matrix.hpp"

#include "eprsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eprsim {

DensityMatrix::DensityMatrix(SubsystemLayout layout, std::vector<cplx> entries)
    : layout_(std::move(layout)), m_(std::move(entries)) {
    const std::size_t n = layout_.total_dim();
    if (m_.size() != n * n) {
        throw ShapeError("density matrix on total dim " + std::to_string(n) + " needs " +
                         std::to_string(n * n) + " entries, got " + std::to_string(m_.size()));
    }
    double hermiticity = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const cplx &a = m_[i * n + j];
            const cplx &b = m_[j * n + i];
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw ValidationError("density matrix contains a non-finite entry");
            }
            hermiticity = std::max(hermiticity, std::abs(a - std::conj(b)));
        }
    }
    if (hermiticity > kAlgebraTol) {
        throw ValidationError("density matrix not Hermitian: max |M - M†| = " +
                              std::to_string(hermiticity));
    }
    cplx tr(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        tr += m_[i * n + i];
    }
    if (std::abs(tr - cplx(1.0, 0.0)) > kAlgebraTol) {
        throw ValidationError("density matrix trace deviates from 1 by " +
                              std::to_string(std::abs(tr - cplx(1.0, 0.0))));
    }
}

double DensityMatrix::max_abs_diff(const DensityMatrix &other) const {
    if (!(layout_ == other.layout_)) {
        throw ShapeError("density matrices live on different layouts");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < m_.size(); ++i) {
        worst = std::max(worst, std::abs(m_[i] - other.m_[i]));
    }
    return worst;
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
    const SubsystemLayout &layout = rho.layout();
    auto kept = layout.checked_register_set(keep);

    std::vector<std::size_t> traced;
    for (std::size_t r = 0; r < layout.num_registers(); ++r) {
        if (std::find(kept.begin(), kept.end(), r) == kept.end()) {
            traced.push_back(r);
        }
    }

    if (traced.empty()) {
        return rho;
    }

    auto keep_offs = enumerate_offsets(layout, kept);
    auto traced_offs = enumerate_offsets(layout, traced);
    const std::size_t n = layout.total_dim();
    const std::size_t side = keep_offs.size();

    std::vector<cplx> out(side * side, cplx(0.0, 0.0));
    for (std::size_t a = 0; a < side; ++a) {
        for (std::size_t b = 0; b < side; ++b) {
            cplx acc(0.0, 0.0);
            for (std::size_t t : traced_offs) {
                acc += rho.entries()[(keep_offs[a] + t) * n + (keep_offs[b] + t)];
            }
            out[a * side + b] = acc;
        }
    }
    return DensityMatrix(layout.subset(kept), std::move(out));
}

double purity(const DensityMatrix &rho) {
    // trace(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    double acc = 0.0;
    for (const cplx &z : rho.entries()) {
        acc += std::norm(z);
    }
    return acc;
}

} // namespace eprsim
