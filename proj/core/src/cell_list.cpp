#include "vk/cell_list.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vk::micro {

void CellList::build(std::span<const double> x, std::span<const double> y, double L,
                     double cutoff) {
    if (x.size() != y.size()) throw std::invalid_argument("CellList: x/y size mismatch");
    if (!(cutoff > 0.0) || !(L > 0.0)) throw std::invalid_argument("CellList: bad geometry");

    L_ = L;
    cells_per_side_ = static_cast<int>(std::floor(L / cutoff));
    if (cells_per_side_ < 1) cells_per_side_ = 1;
    cell_size_ = L / cells_per_side_;

    const std::size_t n = x.size();
    const std::size_t ncells = static_cast<std::size_t>(cells_per_side_) * cells_per_side_;
    cell_index_.resize(n);
    cell_start_.assign(ncells + 1, 0);
    order_.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const int c = cell_of(x[i], y[i]);
        cell_index_[i] = c;
        ++cell_start_[static_cast<std::size_t>(c) + 1];
    }
    for (std::size_t c = 0; c < ncells; ++c) cell_start_[c + 1] += cell_start_[c];

    std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        order_[fill[static_cast<std::size_t>(cell_index_[i])]++] = static_cast<std::uint32_t>(i);
    }
}

int CellList::cell_of(double x, double y) const {
    const int m = cells_per_side_;
    int cx = static_cast<int>(x / cell_size_);
    int cy = static_cast<int>(y / cell_size_);
    cx = std::clamp(cx, 0, m - 1);
    cy = std::clamp(cy, 0, m - 1);
    return cy * m + cx;
}

std::span<const std::uint32_t> CellList::members(int cx, int cy) const {
    const int m = cells_per_side_;
    cx = ((cx % m) + m) % m;
    cy = ((cy % m) + m) % m;
    const std::size_t c = static_cast<std::size_t>(cy) * m + cx;
    return std::span<const std::uint32_t>(order_).subspan(cell_start_[c],
                                                          cell_start_[c + 1] - cell_start_[c]);
}

}  // namespace vk::micro
