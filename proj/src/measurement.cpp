#include "eprsim/measurement.hpp"

#include "eprsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eprsim {

UnitaryMatrix ideal_coupling_unitary(std::size_t d) {
    if (d < 2) {
        throw ArgumentError("coupling dimension must be >= 2, got " + std::to_string(d));
    }
    const std::size_t n = d * d;
    std::vector<cplx> m(n * n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::size_t col = i * d + j;
            std::size_t row = i * d + (j + i) % d;
            m[row * n + col] = cplx(1.0, 0.0);
        }
    }
    return UnitaryMatrix(n, std::move(m));
}

std::optional<std::vector<std::size_t>> one_to_one_map(const UnitaryMatrix &u, std::size_t d) {
    if (d < 2 || u.dim() != d * d) {
        throw ShapeError("coupling of dim " + std::to_string(u.dim()) +
                         " cannot act on a (system, device) pair of dim " + std::to_string(d) +
                         "^2");
    }
    std::vector<std::size_t> sigma(d);
    std::vector<bool> used(d, false);
    for (std::size_t i = 0; i < d; ++i) {
        // Column of u(|i>|0>). All mass must sit on a single coordinate
        // (i, j) with unit modulus; the phase is irrelevant to any
        // measurement statistic. The acceptance criterion is the vector
        // distance between the column and the closest phase multiple of
        // |i>|j>.
        const std::size_t col = i * d;
        std::size_t best = 0;
        double best_mag2 = -1.0;
        double col_mass = 0.0;
        for (std::size_t row = 0; row < u.dim(); ++row) {
            double mag2 = std::norm(u.at(row, col));
            col_mass += mag2;
            if (row / d == i && mag2 > best_mag2) {
                best_mag2 = mag2;
                best = row % d;
            }
        }
        double gap = 1.0 - std::sqrt(std::max(best_mag2, 0.0));
        double residual2 = (col_mass - std::max(best_mag2, 0.0)) + gap * gap;
        if (residual2 > kAlgebraTol * kAlgebraTol) {
            return std::nullopt;
        }
        if (used[best]) {
            return std::nullopt;
        }
        used[best] = true;
        sigma[i] = best;
    }
    return sigma;
}

bool verify_one_to_one(const UnitaryMatrix &u, std::size_t d) {
    return one_to_one_map(u, d).has_value();
}

namespace {

std::vector<double> probabilities_from_amps(const StateVector &psi, std::size_t target) {
    const SubsystemLayout &layout = psi.layout();
    const std::size_t d = layout.dim(target);
    std::vector<double> probs(d, 0.0);
    for (std::size_t idx = 0; idx < psi.dim(); ++idx) {
        probs[layout.digit(idx, target)] += std::norm(psi.amp(idx));
    }
    for (double &p : probs) {
        if (p < 0.0) {
            p = 0.0;
        }
    }
    return probs;
}

} // namespace

std::vector<double> born_probabilities(const StateVector &psi, const Observable &obs,
                                       std::size_t target) {
    const SubsystemLayout &layout = psi.layout();
    if (target >= layout.num_registers()) {
        throw ShapeError("target register " + std::to_string(target) + " out of range");
    }
    if (obs.dim() != layout.dim(target)) {
        throw ShapeError("observable dim " + std::to_string(obs.dim()) +
                         " does not match register dim " + std::to_string(layout.dim(target)));
    }
    if (obs.computational_basis()) {
        return probabilities_from_amps(psi, target);
    }
    std::size_t targets[1] = {target};
    StateVector rotated = apply_unitary(psi, obs.eigenbasis_adjoint(), targets);
    return probabilities_from_amps(rotated, target);
}

std::pair<MeasurementOutcome, StateVector>
measure_and_collapse(const StateVector &psi, const Observable &obs, std::size_t target,
                     RngStream &rng) {
    std::vector<double> probs = born_probabilities(psi, obs, target);

    double total = 0.0;
    for (double p : probs) {
        total += p;
    }
    if (total <= kAlgebraTol) {
        throw InternalError("all outcome probabilities vanish on a normalized state");
    }

    // Inverse CDF over ascending outcome index, single uniform draw.
    const double u = rng.next_double() * total;
    std::size_t k = probs.size() - 1;
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) {
            k = i;
            break;
        }
    }
    // Float dust can leave the draw past the last nonzero bin.
    while (probs[k] == 0.0 && k > 0) {
        --k;
    }

    const SubsystemLayout &layout = psi.layout();
    const double inv_amp = 1.0 / std::sqrt(probs[k]);
    std::size_t targets[1] = {target};

    std::vector<cplx> amps;
    if (obs.computational_basis()) {
        amps = psi.amps();
    } else {
        amps = apply_unitary(psi, obs.eigenbasis_adjoint(), targets).amps();
    }
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (layout.digit(idx, target) == k) {
            amps[idx] *= inv_amp;
        } else {
            amps[idx] = cplx(0.0, 0.0);
        }
    }
    StateVector collapsed(layout, std::move(amps));
    if (!obs.computational_basis()) {
        collapsed = apply_unitary(collapsed, obs.eigenbasis(), targets);
    }

    MeasurementOutcome outcome{k, obs.eigenvalue(k), probs[k]};
    return {outcome, std::move(collapsed)};
}

StateVector project_register(const StateVector &psi, std::size_t target, std::size_t k,
                             double probability) {
    const SubsystemLayout &layout = psi.layout();
    if (target >= layout.num_registers() || k >= layout.dim(target)) {
        throw ShapeError("projection target or outcome index out of range");
    }
    if (!(probability > 0.0)) {
        throw ArgumentError("projection onto an outcome of zero probability");
    }
    const double inv = 1.0 / std::sqrt(probability);
    std::vector<cplx> amps(psi.dim(), cplx(0.0, 0.0));
    for (std::size_t idx = 0; idx < psi.dim(); ++idx) {
        if (layout.digit(idx, target) == k) {
            amps[idx] = psi.amp(idx) * inv;
        }
    }
    return StateVector(layout, std::move(amps));
}

} // namespace eprsim
