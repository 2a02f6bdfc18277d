#include "eprsim/layout.hpp"

#include "eprsim/errors.hpp"
#include "eprsim/types.hpp"

#include <algorithm>
#include <unordered_set>

namespace eprsim {

SubsystemLayout::SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.empty()) {
        throw ArgumentError("layout needs at least one register");
    }
    if (labels_.size() != dims_.size()) {
        throw ArgumentError("layout has " + std::to_string(dims_.size()) + " dims but " +
                            std::to_string(labels_.size()) + " labels");
    }
    total_ = 1;
    for (std::size_t d : dims_) {
        if (d < 2) {
            throw ArgumentError("register dimension must be >= 2, got " + std::to_string(d));
        }
        if (total_ > kMaxTotalDim / d) {
            throw ArgumentError("total dimension exceeds cap of " + std::to_string(kMaxTotalDim));
        }
        total_ *= d;
    }
    std::unordered_set<std::string> seen;
    for (const auto &l : labels_) {
        if (!seen.insert(l).second) {
            throw ArgumentError("duplicate register label '" + l + "'");
        }
    }
    strides_.assign(dims_.size(), 1);
    for (std::size_t r = dims_.size(); r-- > 1;) {
        strides_[r - 1] = strides_[r] * dims_[r];
    }
}

SubsystemLayout SubsystemLayout::uniform(std::size_t d, std::size_t n, const std::string &prefix) {
    std::vector<std::size_t> dims(n, d);
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(prefix + std::to_string(i));
    }
    return SubsystemLayout(std::move(dims), std::move(labels));
}

std::vector<std::size_t>
SubsystemLayout::checked_register_set(std::span<const std::size_t> regs) const {
    if (regs.empty()) {
        throw ArgumentError("register set must be non-empty");
    }
    std::vector<std::size_t> sorted(regs.begin(), regs.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= num_registers()) {
            throw ShapeError("register index " + std::to_string(sorted[i]) +
                             " out of range for layout with " + std::to_string(num_registers()) +
                             " registers");
        }
        if (i > 0 && sorted[i] == sorted[i - 1]) {
            throw ArgumentError("register index " + std::to_string(sorted[i]) + " repeated");
        }
    }
    return sorted;
}

SubsystemLayout SubsystemLayout::subset(std::span<const std::size_t> keep) const {
    auto sorted = checked_register_set(keep);
    std::vector<std::size_t> dims;
    std::vector<std::string> labels;
    for (std::size_t r : sorted) {
        dims.push_back(dims_[r]);
        labels.push_back(labels_[r]);
    }
    return SubsystemLayout(std::move(dims), std::move(labels));
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout &a, const SubsystemLayout &b) {
    for (const auto &l : b.labels_) {
        if (std::find(a.labels_.begin(), a.labels_.end(), l) != a.labels_.end()) {
            throw ArgumentError("register label '" + l + "' present on both sides");
        }
    }
    std::vector<std::size_t> dims = a.dims_;
    dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
    std::vector<std::string> labels = a.labels_;
    labels.insert(labels.end(), b.labels_.begin(), b.labels_.end());
    return SubsystemLayout(std::move(dims), std::move(labels));
}

std::vector<std::size_t> enumerate_offsets(const SubsystemLayout &layout,
                                           std::span<const std::size_t> regs) {
    std::size_t count = 1;
    for (std::size_t r : regs) {
        count *= layout.dim(r);
    }
    std::vector<std::size_t> offsets(count, 0);
    // Odometer over the register list, last register fastest.
    std::vector<std::size_t> digits(regs.size(), 0);
    for (std::size_t j = 0; j < count; ++j) {
        std::size_t off = 0;
        for (std::size_t p = 0; p < regs.size(); ++p) {
            off += digits[p] * layout.stride(regs[p]);
        }
        offsets[j] = off;
        for (std::size_t p = regs.size(); p-- > 0;) {
            if (++digits[p] < layout.dim(regs[p])) {
                break;
            }
            digits[p] = 0;
        }
    }
    return offsets;
}

} // namespace eprsim
