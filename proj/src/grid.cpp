#include "dhym/grid.hpp"

#include "dhym/errors.hpp"

namespace dhym {

TorusGrid::TorusGrid(int n, int points_per_axis) : n_(n), N_(points_per_axis) {
    if (n < 1 || n > kMaxDim) throw InputError("TorusGrid: dimension must be 1, 2 or 3");
    if (points_per_axis < 2) throw InputError("TorusGrid: need at least two points per axis");
    size_ = 1;
    for (int j = n_ - 1; j >= 0; --j) {
        strides_[static_cast<std::size_t>(j)] = size_;
        size_ *= static_cast<std::size_t>(N_);
    }
    auto plus = std::make_shared<NeighbourTable>();
    auto minus = std::make_shared<NeighbourTable>();
    for (int j = 0; j < n_; ++j) {
        auto& p = (*plus)[static_cast<std::size_t>(j)];
        auto& m = (*minus)[static_cast<std::size_t>(j)];
        p.resize(size_);
        m.resize(size_);
        std::array<int, kMaxDim> up{}, down{};
        up[static_cast<std::size_t>(j)] = 1;
        down[static_cast<std::size_t>(j)] = -1;
        for (std::size_t i = 0; i < size_; ++i) {
            p[i] = shifted(i, up);
            m[i] = shifted(i, down);
        }
    }
    plus_ = std::move(plus);
    minus_ = std::move(minus);
}

std::array<int, TorusGrid::kMaxDim> TorusGrid::multi_index(std::size_t linear) const {
    std::array<int, kMaxDim> idx{};
    for (int j = 0; j < n_; ++j) {
        idx[static_cast<std::size_t>(j)] =
            static_cast<int>((linear / strides_[static_cast<std::size_t>(j)]) % static_cast<std::size_t>(N_));
    }
    return idx;
}

std::size_t TorusGrid::linear_index(const std::array<int, kMaxDim>& idx) const {
    std::size_t linear = 0;
    for (int j = 0; j < n_; ++j) {
        int i = idx[static_cast<std::size_t>(j)] % N_;
        if (i < 0) i += N_;
        linear += static_cast<std::size_t>(i) * strides_[static_cast<std::size_t>(j)];
    }
    return linear;
}

std::array<double, TorusGrid::kMaxDim> TorusGrid::coordinates(std::size_t linear) const {
    const auto idx = multi_index(linear);
    std::array<double, kMaxDim> x{};
    for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j)] * spacing();
    return x;
}

std::size_t TorusGrid::shifted(std::size_t linear, const std::array<int, kMaxDim>& offset) const {
    auto idx = multi_index(linear);
    for (int j = 0; j < n_; ++j) idx[static_cast<std::size_t>(j)] += offset[static_cast<std::size_t>(j)];
    return linear_index(idx);
}

}  // namespace dhym
