#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace dhym {

/// Uniform periodic grid with N points per axis on the reduced real torus
/// [0,1)^n. Linear indices are row-major: the first axis varies slowest.
class TorusGrid {
public:
    static constexpr int kMaxDim = 3;

    TorusGrid() = default;
    TorusGrid(int n, int points_per_axis);

    int dim() const { return n_; }
    int points_per_axis() const { return N_; }
    std::size_t size() const { return size_; }
    double spacing() const { return 1.0 / N_; }

    std::array<int, kMaxDim> multi_index(std::size_t linear) const;
    std::size_t linear_index(const std::array<int, kMaxDim>& idx) const;
    std::array<double, kMaxDim> coordinates(std::size_t linear) const;

    /// Linear index of the neighbour displaced by offset[j] along each axis, with wrap.
    std::size_t shifted(std::size_t linear, const std::array<int, kMaxDim>& offset) const;
    /// Neighbour one step along an axis; direction is +1 or -1.
    std::size_t step(std::size_t linear, int axis, int direction) const {
        const auto& table = direction > 0 ? (*plus_)[static_cast<std::size_t>(axis)]
                                          : (*minus_)[static_cast<std::size_t>(axis)];
        return table[linear];
    }
    /// Stride of axis j in the linear index.
    std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

    bool operator==(const TorusGrid& other) const { return n_ == other.n_ && N_ == other.N_; }

private:
    int n_ = 0;
    int N_ = 0;
    std::size_t size_ = 0;
    std::array<std::size_t, kMaxDim> strides_{};
    using NeighbourTable = std::array<std::vector<std::size_t>, kMaxDim>;
    std::shared_ptr<const NeighbourTable> plus_;
    std::shared_ptr<const NeighbourTable> minus_;
};

}  // namespace dhym
