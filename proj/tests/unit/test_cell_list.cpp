#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "vk/cell_list.hpp"

using vk::micro::CellList;

TEST(CellList, CellsAreNoSmallerThanCutoff) {
    std::vector<double> x{0.5, 3.0}, y{0.5, 9.9};
    CellList c;
    c.build(x, y, 10.0, 3.0);
    EXPECT_EQ(c.cells_per_side(), 3);
    EXPECT_GE(c.cell_size(), 3.0);
    EXPECT_TRUE(c.uses_cells());
    c.build(x, y, 10.0, 4.0);
    EXPECT_EQ(c.cells_per_side(), 2);
    EXPECT_FALSE(c.uses_cells());
}

TEST(CellList, EveryParticleIsListedOnceInItsCell) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    std::vector<double> x(1000), y(1000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = u(gen);
        y[i] = u(gen);
    }
    CellList c;
    c.build(x, y, 20.0, 1.5);
    const int m = c.cells_per_side();
    std::vector<int> seen(x.size(), 0);
    for (int cy = 0; cy < m; ++cy) {
        for (int cx = 0; cx < m; ++cx) {
            const auto members = c.members(cx, cy);
            EXPECT_TRUE(std::is_sorted(members.begin(), members.end()));
            for (auto i : members) {
                ++seen[i];
                EXPECT_EQ(c.cell_of(x[i], y[i]), cy * m + cx);
                EXPECT_EQ(c.particle_cells()[i], cy * m + cx);
            }
        }
    }
    for (int s : seen) EXPECT_EQ(s, 1);
    EXPECT_EQ(c.cell_start().back(), x.size());
}

TEST(CellList, MemberLookupWrapsPeriodically) {
    std::vector<double> x{0.1, 9.9}, y{0.1, 9.9};
    CellList c;
    c.build(x, y, 10.0, 2.0);
    const int m = c.cells_per_side();
    ASSERT_EQ(m, 5);
    EXPECT_EQ(c.members(-1, -1).size(), 1u);
    EXPECT_EQ(c.members(-1, -1)[0], 1u);
    EXPECT_EQ(c.members(m, m)[0], 0u);
}

TEST(CellList, RejectsBadInput) {
    std::vector<double> x{1.0}, y{1.0, 2.0};
    CellList c;
    EXPECT_THROW(c.build(x, y, 10.0, 1.0), std::invalid_argument);
    std::vector<double> y1{1.0};
    EXPECT_THROW(c.build(x, y1, 10.0, 0.0), std::invalid_argument);
}
