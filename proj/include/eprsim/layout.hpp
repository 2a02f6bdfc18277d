#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace eprsim {

/// Ordered list of registers making up a composite Hilbert space.
///
/// Index convention is row-major with the first register most
/// significant: a flat amplitude index decomposes as
///   flat = digit[0]*stride[0] + ... + digit[n-1]*stride[n-1],
/// stride[n-1] = 1, stride[r] = dim[r+1]*stride[r+1].
class SubsystemLayout {
  public:
    /// Every dim must be >= 2, labels unique and one per register,
    /// total dimension capped at 2^14.
    SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels);

    /// Convenience: n registers of equal dimension d, labels
    /// prefix0..prefix{n-1}.
    static SubsystemLayout uniform(std::size_t d, std::size_t n, const std::string &prefix = "q");

    std::size_t num_registers() const { return dims_.size(); }
    std::size_t dim(std::size_t r) const { return dims_.at(r); }
    std::size_t stride(std::size_t r) const { return strides_.at(r); }
    std::size_t total_dim() const { return total_; }
    const std::vector<std::size_t> &dims() const { return dims_; }
    const std::vector<std::string> &labels() const { return labels_; }

    /// Digit of register r inside a flat index.
    std::size_t digit(std::size_t flat, std::size_t r) const {
        return (flat / strides_[r]) % dims_[r];
    }

    /// Layout consisting of the given registers, kept in ascending
    /// (original relative) order. Registers must be distinct, in range,
    /// and at least one must be kept.
    SubsystemLayout subset(std::span<const std::size_t> keep) const;

    /// a's registers followed by b's. Throws ArgumentError on a label
    /// collision between the two.
    static SubsystemLayout concat(const SubsystemLayout &a, const SubsystemLayout &b);

    bool operator==(const SubsystemLayout &other) const {
        return dims_ == other.dims_ && labels_ == other.labels_;
    }

    /// Sorted copy of `regs`, validated to be non-empty, distinct and in
    /// range. Shared by every operation that takes register index lists.
    std::vector<std::size_t> checked_register_set(std::span<const std::size_t> regs) const;

  private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> strides_;
    std::size_t total_;
};

/// Flat offsets of all digit combinations over the given registers, in
/// row-major order of the register list as passed. Element j is the
/// contribution of combination j to a flat index of the full layout.
std::vector<std::size_t> enumerate_offsets(const SubsystemLayout &layout,
                                           std::span<const std::size_t> regs);

} // namespace eprsim
