#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vk::micro {

/// Uniform binning of a periodic square into cells no smaller than the cutoff.
/// Particles are counting-sorted by cell (stable in particle id) so a cell's
/// members are contiguous in `order()`.
class CellList {
public:
    CellList() = default;

    /// Rebuild for the given positions. With fewer than three cells per side
    /// the 3x3 stencil would alias, so `uses_cells()` turns false and callers
    /// fall back to all pairs.
    void build(std::span<const double> x, std::span<const double> y, double L, double cutoff);

    bool uses_cells() const { return cells_per_side_ >= 3; }
    int cells_per_side() const { return cells_per_side_; }
    double cell_size() const { return cell_size_; }
    int cell_of(double x, double y) const;

    /// Members of cell (cx, cy), indices into the original arrays.
    std::span<const std::uint32_t> members(int cx, int cy) const;
    std::span<const std::uint32_t> order() const { return order_; }
    /// Cell index of each particle (original order).
    std::span<const std::int32_t> particle_cells() const { return cell_index_; }
    /// First slot in order() of each cell; size cells^2 + 1.
    std::span<const std::uint32_t> cell_start() const { return cell_start_; }

private:
    int cells_per_side_ = 0;
    double cell_size_ = 0.0;
    double L_ = 0.0;
    std::vector<std::uint32_t> cell_start_;
    std::vector<std::uint32_t> order_;
    std::vector<std::int32_t> cell_index_;
};

}  // namespace vk::micro
