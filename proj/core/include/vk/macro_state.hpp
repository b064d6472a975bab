#pragma once

#include <cstddef>
#include <vector>

namespace vk::macro {

/// Cell-centred fields on a uniform periodic nx-by-ny grid over [0, L)^2.
/// Storage is row-major with x fastest: index(i, j) = j * nx + i.
struct MacroState {
    int nx = 0;
    int ny = 0;
    double L = 1.0;
    double dx = 0.0;
    double dy = 0.0;
    std::vector<double> rho;      // density
    std::vector<double> m_omega;  // rho * omega_bar
    std::vector<double> mx;       // rho * Omega_x
    std::vector<double> my;       // rho * Omega_y

    MacroState() = default;
    MacroState(int nx_, int ny_, double L_);

    std::size_t cells() const { return rho.size(); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    double cell_x(int i) const { return (i + 0.5) * dx; }
    double cell_y(int j) const { return (j + 0.5) * dy; }

    double total_mass() const;
    double total_angular_momentum() const;
    /// max over cells of | |m_dir|/rho - 1 |
    double max_direction_defect() const;

    bool operator==(const MacroState&) const = default;
};

}  // namespace vk::macro
