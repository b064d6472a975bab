#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <unistd.h>

#include "vk/errors.hpp"
#include "vk/macrosim.hpp"
#include "vk/microsim.hpp"
#include "vk/snapshot.hpp"

namespace fs = std::filesystem;
namespace vio = vk::io;

namespace {

vk::MicroSnapshot random_micro(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    vk::MicroSnapshot s;
    s.t = 1.0 / 3.0;
    s.L = 7.25;
    s.state = vk::micro::ParticleEnsemble(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.state.x[i] = s.L * u(gen);
        s.state.y[i] = s.L * u(gen);
        s.state.theta[i] = std::nextafter(3.14159 * (2.0 * u(gen) - 1.0), 0.0);
        s.state.omega[i] = std::ldexp(u(gen) - 0.5, static_cast<int>(seed % 40) - 20);
    }
    if (n > 0) s.state.omega[0] = std::numeric_limits<double>::denorm_min();
    return s;
}

vio::MacroFrame random_frame(int nx, int ny) {
    auto p = vk::macro::MacroParams::for_kappa(2.0);
    p.nx = nx;
    p.ny = ny;
    p.L = 3.0;
    vk::macro::MacroInitSpec init;
    init.rho_amplitude = 0.5;
    init.seed = 17;
    return vio::MacroFrame::from_state(0.125, vk::macro::make_initial_state(p, init));
}

std::string replace_first(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    if (pos != std::string::npos) text.replace(pos, from.size(), to);
    return text;
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("vk_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Fnv, KnownValues) {
    EXPECT_EQ(vio::fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(vio::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(vio::fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(MicroSnapshot, RoundTripsBitwise) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = random_micro(300, seed);
        const auto text = vio::format_snapshot(s);
        const auto back = vio::parse_micro_snapshot(text);
        EXPECT_TRUE(back == s);
        EXPECT_EQ(vio::format_snapshot(back), text);
    }
}

TEST(MicroSnapshot, HeaderAndColumns) {
    const auto text = vio::format_snapshot(random_micro(3, 1));
    EXPECT_EQ(text.rfind("# vk-micro v1 t=0.33333333333333331 n=3 L=7.25\nid,x,y,theta,omega\n", 0), 0u);
    EXPECT_EQ(vio::detect_kind(text), vio::SnapshotKind::micro);
}

TEST(MicroSnapshot, EmptyEnsembleRoundTrips) {
    const auto s = random_micro(0, 1);
    EXPECT_TRUE(vio::parse_micro_snapshot(vio::format_snapshot(s)) == s);
}

TEST(MicroSnapshot, DetectsCorruption) {
    const auto text = vio::format_snapshot(random_micro(20, 2));
    const auto trailer = text.rfind("# fnv1a64=");
    ASSERT_NE(trailer, std::string::npos);
    EXPECT_THROW(vio::parse_micro_snapshot(text.substr(0, trailer)), vk::ChecksumError);
    EXPECT_THROW(vio::parse_micro_snapshot(text.substr(0, text.size() / 2)), vk::ChecksumError);

    auto tampered = text;
    const auto digit = tampered.find("\n5,") + 3;
    tampered[digit] = tampered[digit] == '1' ? '2' : '1';
    EXPECT_THROW(vio::parse_micro_snapshot(tampered), vk::ChecksumError);

    const auto row5 = text.find("\n5,");
    const auto row6 = text.find("\n6,");
    auto missing = text;
    missing.erase(row5, row6 - row5);
    EXPECT_THROW(vio::parse_micro_snapshot(missing), vk::SnapshotFormatError);
    EXPECT_THROW(vio::parse_micro_snapshot("garbage\nmore\n# fnv1a64=0\n"), vk::SnapshotFormatError);
}

TEST(MacroSnapshot, RoundTripsBitwise) {
    const auto f = random_frame(12, 7);
    const auto text = vio::format_snapshot(f);
    const auto back = vio::parse_macro_snapshot(text);
    EXPECT_TRUE(back == f);
    EXPECT_EQ(vio::detect_kind(text), vio::SnapshotKind::macro);
    EXPECT_EQ(text.rfind("# vk-macro v1 t=0.125 nx=12 ny=7 L=3\ni,j,rho,omega_bar,Omega_x,Omega_y\n", 0), 0u);
    EXPECT_NE(text.find("\n11,0,"), std::string::npos);
    EXPECT_NE(text.find("\n0,1,"), std::string::npos);
}

TEST(MacroSnapshot, StateConversionIsConsistent) {
    const auto f = random_frame(5, 5);
    const auto s = f.to_state();
    const auto again = vio::MacroFrame::from_state(f.t, s);
    for (std::size_t c = 0; c < s.cells(); ++c) {
        EXPECT_DOUBLE_EQ(again.omega_bar[c], f.omega_bar[c]);
        EXPECT_NEAR(std::hypot(again.omega_x[c], again.omega_y[c]), 1.0, 1e-15);
    }
}

TEST(MacroSnapshot, MissingRowIsAFormatError) {
    const auto text = vio::format_snapshot(random_frame(6, 6));
    const auto row = text.find("\n3,2,");
    const auto next = text.find('\n', row + 1);
    auto missing = text;
    missing.erase(row, next - row);
    // Recompute the trailer so only the row count is wrong.
    const auto trailer = missing.rfind("# fnv1a64=");
    const auto body = missing.substr(0, trailer);
    const auto fixed = body + fmt::format("# fnv1a64={:016x}\n", vio::fnv1a64(body));
    EXPECT_THROW(vio::parse_macro_snapshot(fixed), vk::SnapshotFormatError);
}

TEST(DirectorySink, WritesNumberedFilesInOrder) {
    const auto dir = fresh_dir("sink");
    {
        vio::DirectorySink sink(dir);
        auto s = random_micro(10, 3);
        for (int k = 0; k < 3; ++k) {
            s.t = k;
            sink.write(s);
        }
        EXPECT_EQ(sink.written(), 3u);
    }
    const auto files = vio::list_snapshots(dir);
    ASSERT_EQ(files.size(), 3u);
    EXPECT_EQ(files[0].filename(), "snapshot_000000.csv");
    EXPECT_EQ(files[2].filename(), "snapshot_000002.csv");
    const auto back = vio::parse_micro_snapshot(vio::read_file(files[2]));
    EXPECT_EQ(back.t, 2.0);
    fs::remove_all(dir);
}

TEST(DirectorySink, RunsAreByteIdentical) {
    vk::micro::MicroParams p;
    p.n = 300;
    p.L = 8.0;
    p.R = 1.0;
    p.k_theta = p.k_omega = 10.0;
    p.alpha2 = p.beta2 = 0.2;
    p.dt = 0.01;
    p.t_end = 0.5;
    p.seed = 99;
    vk::micro::RunSchedule sched;
    sched.snapshot_every = 0.1;
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    {
        vio::DirectorySink sa(a), sb(b);
        vk::micro::run_micro(p, {}, sa, sched);
        vk::micro::run_micro(p, {}, sb, sched);
    }
    const auto fa = vio::list_snapshots(a);
    const auto fb = vio::list_snapshots(b);
    ASSERT_EQ(fa.size(), 6u);
    ASSERT_EQ(fa.size(), fb.size());
    for (std::size_t k = 0; k < fa.size(); ++k) EXPECT_EQ(vio::read_file(fa[k]), vio::read_file(fb[k]));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(DirectorySink, MacroSnapshotsParseBack) {
    const auto dir = fresh_dir("macro");
    auto p = vk::macro::MacroParams::for_kappa(4.0);
    p.nx = p.ny = 8;
    p.dt = 0.01;
    p.t_end = 0.05;
    {
        vio::DirectorySink sink(dir);
        const auto r = vk::macro::run_macro(p, vk::macro::MacroInitSpec{}, sink);
        const auto last = vio::parse_macro_snapshot(vio::read_file(vio::list_snapshots(dir).back()));
        EXPECT_TRUE(last == vio::MacroFrame::from_state(r.t_final, r.final_state));
    }
    fs::remove_all(dir);
}
