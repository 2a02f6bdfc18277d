#include "eprsim/state_vector.hpp"

#include "eprsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eprsim {

StateVector::StateVector(SubsystemLayout layout, std::vector<cplx> amps)
    : layout_(std::move(layout)), amps_(std::move(amps)) {
    if (amps_.size() != layout_.total_dim()) {
        throw ShapeError("amplitude vector of length " + std::to_string(amps_.size()) +
                         " does not match layout total dim " +
                         std::to_string(layout_.total_dim()));
    }
    double norm_sq = 0.0;
    for (const cplx &a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("state vector contains a non-finite amplitude");
        }
        norm_sq += std::norm(a);
    }
    double n = std::sqrt(norm_sq);
    if (std::abs(n - 1.0) > kNormInputTol) {
        throw ValidationError("state vector norm is " + std::to_string(n) +
                              ", more than 1e-6 away from 1");
    }
    if (n != 1.0) {
        for (cplx &a : amps_) {
            a /= n;
        }
    }
}

StateVector StateVector::basis_state(SubsystemLayout layout, std::size_t index) {
    if (index >= layout.total_dim()) {
        throw ArgumentError("basis index " + std::to_string(index) + " out of range");
    }
    std::vector<cplx> amps(layout.total_dim(), cplx(0.0, 0.0));
    amps[index] = cplx(1.0, 0.0);
    return StateVector(std::move(layout), std::move(amps));
}

double StateVector::norm() const {
    double norm_sq = 0.0;
    for (const cplx &a : amps_) {
        norm_sq += std::norm(a);
    }
    return std::sqrt(norm_sq);
}

StateVector tensor_product(const StateVector &a, const StateVector &b) {
    SubsystemLayout layout = SubsystemLayout::concat(a.layout(), b.layout());
    const std::size_t nb = b.dim();
    std::vector<cplx> amps(a.dim() * nb);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const cplx ai = a.amp(i);
        for (std::size_t j = 0; j < nb; ++j) {
            amps[i * nb + j] = ai * b.amp(j);
        }
    }
    return StateVector(std::move(layout), std::move(amps));
}

StateVector apply_unitary(const StateVector &psi, const UnitaryMatrix &u,
                          std::span<const std::size_t> targets) {
    const SubsystemLayout &layout = psi.layout();
    auto sorted = layout.checked_register_set(targets);

    std::size_t target_dim = 1;
    for (std::size_t t : targets) {
        target_dim *= layout.dim(t);
    }
    if (target_dim != u.dim()) {
        throw ShapeError("target registers span dim " + std::to_string(target_dim) +
                         " but unitary has dim " + std::to_string(u.dim()));
    }

    std::vector<std::size_t> rest;
    for (std::size_t r = 0; r < layout.num_registers(); ++r) {
        if (std::find(sorted.begin(), sorted.end(), r) == sorted.end()) {
            rest.push_back(r);
        }
    }

    // Offsets over the targets in the caller's order: entry j is the flat
    // contribution of u's composite index j.
    auto target_offs = enumerate_offsets(layout, targets);
    std::vector<std::size_t> rest_offs =
        rest.empty() ? std::vector<std::size_t>{0} : enumerate_offsets(layout, rest);

    std::vector<cplx> amps = psi.amps();
    std::vector<cplx> in(u.dim());
    for (std::size_t base : rest_offs) {
        for (std::size_t j = 0; j < u.dim(); ++j) {
            in[j] = amps[base + target_offs[j]];
        }
        for (std::size_t i = 0; i < u.dim(); ++i) {
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < u.dim(); ++j) {
                acc += u.at(i, j) * in[j];
            }
            amps[base + target_offs[i]] = acc;
        }
    }
    return StateVector(layout, std::move(amps));
}

DensityMatrix to_density(const StateVector &psi) {
    const std::size_t n = psi.dim();
    std::vector<cplx> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m[i * n + j] = psi.amp(i) * std::conj(psi.amp(j));
        }
    }
    return DensityMatrix(psi.layout(), std::move(m));
}

DensityMatrix reduced_density(const StateVector &psi, std::span<const std::size_t> keep) {
    const SubsystemLayout &layout = psi.layout();
    auto kept = layout.checked_register_set(keep);

    std::vector<std::size_t> traced;
    for (std::size_t r = 0; r < layout.num_registers(); ++r) {
        if (std::find(kept.begin(), kept.end(), r) == kept.end()) {
            traced.push_back(r);
        }
    }
    if (traced.empty()) {
        return to_density(psi);
    }

    auto keep_offs = enumerate_offsets(layout, kept);
    auto traced_offs = enumerate_offsets(layout, traced);
    const std::size_t side = keep_offs.size();

    std::vector<cplx> out(side * side, cplx(0.0, 0.0));
    for (std::size_t a = 0; a < side; ++a) {
        for (std::size_t b = 0; b < side; ++b) {
            cplx acc(0.0, 0.0);
            for (std::size_t t : traced_offs) {
                acc += psi.amp(keep_offs[a] + t) * std::conj(psi.amp(keep_offs[b] + t));
            }
            out[a * side + b] = acc;
        }
    }
    return DensityMatrix(layout.subset(kept), std::move(out));
}

double fidelity_pure(const StateVector &psi, const StateVector &phi) {
    if (!(psi.layout() == phi.layout())) {
        throw ShapeError("fidelity of states on different layouts");
    }
    cplx overlap(0.0, 0.0);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        overlap += std::conj(psi.amp(i)) * phi.amp(i);
    }
    return std::norm(overlap);
}

} // namespace eprsim
