#include "vk/macro_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vk::macro {

MacroState::MacroState(int nx_, int ny_, double L_) : nx(nx_), ny(ny_), L(L_) {
    if (nx < 1 || ny < 1 || !(L > 0.0)) throw std::invalid_argument("MacroState: bad grid");
    dx = L / nx;
    dy = L / ny;
    const std::size_t n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    rho.assign(n, 0.0);
    m_omega.assign(n, 0.0);
    mx.assign(n, 0.0);
    my.assign(n, 0.0);
}

double MacroState::total_mass() const {
    double s = 0.0;
    for (double r : rho) s += r;
    return s * dx * dy;
}

double MacroState::total_angular_momentum() const {
    double s = 0.0;
    for (double m : m_omega) s += m;
    return s * dx * dy;
}

double MacroState::max_direction_defect() const {
    double worst = 0.0;
    for (std::size_t c = 0; c < rho.size(); ++c) {
        worst = std::max(worst, std::fabs(std::hypot(mx[c], my[c]) / rho[c] - 1.0));
    }
    return worst;
}

}  // namespace vk::macro
