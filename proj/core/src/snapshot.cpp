#include "vk/snapshot.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "vk/errors.hpp"

namespace vk::io {
namespace {

constexpr std::string_view kMicroMagic = "# vk-micro v1";
constexpr std::string_view kMacroMagic = "# vk-macro v1";
constexpr std::string_view kMicroColumns = "id,x,y,theta,omega";
constexpr std::string_view kMacroColumns = "i,j,rho,omega_bar,Omega_x,Omega_y";
constexpr std::string_view kTrailer = "# fnv1a64=";

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
    T v{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw SnapshotFormatError(fmt::format("snapshot: cannot parse {} from '{}'", what, s));
    }
    return v;
}

// Verifies the trailer and returns the lines of the checked body.
std::vector<std::string_view> checked_lines(std::string_view text, std::size_t header_rows,
                                            std::size_t expected_rows_from_header(
                                                std::string_view header)) {
    std::string_view body = text;
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    const auto last_nl = body.rfind('\n');
    if (last_nl == std::string_view::npos) throw ChecksumError("snapshot: missing checksum trailer");
    const std::string_view trailer = body.substr(last_nl + 1);
    if (!trailer.starts_with(kTrailer)) throw ChecksumError("snapshot: missing checksum trailer");
    const std::string_view content = text.substr(0, last_nl + 1);

    auto lines = split(content.substr(0, content.size() - 1), '\n');
    if (lines.size() < header_rows) throw SnapshotFormatError("snapshot: truncated header");
    const std::size_t expected = expected_rows_from_header(lines[0]);
    if (lines.size() - header_rows != expected) {
        throw SnapshotFormatError(fmt::format("snapshot: header announces {} rows, found {}",
                                              expected, lines.size() - header_rows));
    }

    const std::string_view hex = trailer.substr(kTrailer.size());
    std::uint64_t recorded = 0;
    const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), recorded, 16);
    if (ec != std::errc() || ptr != hex.data() + hex.size() || recorded != fnv1a64(content)) {
        throw ChecksumError("snapshot: checksum mismatch");
    }
    return lines;
}

// "key=value" tokens after the magic prefix.
std::string_view header_field(std::string_view header, std::string_view key) {
    for (auto tok : split(header, ' ')) {
        if (tok.size() > key.size() && tok.starts_with(key) && tok[key.size()] == '=') {
            return tok.substr(key.size() + 1);
        }
    }
    throw SnapshotFormatError(fmt::format("snapshot: header lacks '{}'", key));
}

std::size_t micro_rows(std::string_view header) {
    if (!header.starts_with(kMicroMagic)) throw SnapshotFormatError("snapshot: not a vk-micro v1 file");
    return parse_number<std::size_t>(header_field(header, "n"), "n");
}

std::size_t macro_rows(std::string_view header) {
    if (!header.starts_with(kMacroMagic)) throw SnapshotFormatError("snapshot: not a vk-macro v1 file");
    const auto nx = parse_number<std::size_t>(header_field(header, "nx"), "nx");
    const auto ny = parse_number<std::size_t>(header_field(header, "ny"), "ny");
    return nx * ny;
}

void finish(std::string& out) {
    out += fmt::format("{}{:016x}\n", kTrailer, fnv1a64(out));
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error(fmt::format("cannot open '{}' for writing", file.string()));
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw std::runtime_error(fmt::format("write to '{}' failed", file.string()));
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

MacroFrame MacroFrame::from_state(double t, const macro::MacroState& s) {
    MacroFrame f;
    f.t = t;
    f.nx = s.nx;
    f.ny = s.ny;
    f.L = s.L;
    const std::size_t n = s.cells();
    f.rho = s.rho;
    f.omega_bar.resize(n);
    f.omega_x.resize(n);
    f.omega_y.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        f.omega_bar[c] = s.m_omega[c] / s.rho[c];
        f.omega_x[c] = s.mx[c] / s.rho[c];
        f.omega_y[c] = s.my[c] / s.rho[c];
    }
    return f;
}

macro::MacroState MacroFrame::to_state() const {
    macro::MacroState s(nx, ny, L);
    for (std::size_t c = 0; c < s.cells(); ++c) {
        s.rho[c] = rho[c];
        s.m_omega[c] = rho[c] * omega_bar[c];
        s.mx[c] = rho[c] * omega_x[c];
        s.my[c] = rho[c] * omega_y[c];
    }
    return s;
}

std::string format_snapshot(const MicroSnapshot& snap) {
    const auto& e = snap.state;
    std::string out;
    out.reserve(96 * e.size() + 128);
    out += fmt::format("{} t={:.17g} n={} L={:.17g}\n{}\n", kMicroMagic, snap.t, e.size(), snap.L,
                       kMicroColumns);
    auto it = std::back_inserter(out);
    for (std::size_t i = 0; i < e.size(); ++i) {
        fmt::format_to(it, "{},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, e.x[i], e.y[i], e.theta[i],
                       e.omega[i]);
    }
    finish(out);
    return out;
}

std::string format_snapshot(const MacroFrame& f) {
    std::string out;
    out.reserve(110 * f.rho.size() + 128);
    out += fmt::format("{} t={:.17g} nx={} ny={} L={:.17g}\n{}\n", kMacroMagic, f.t, f.nx, f.ny,
                       f.L, kMacroColumns);
    auto it = std::back_inserter(out);
    for (int j = 0; j < f.ny; ++j) {
        for (int i = 0; i < f.nx; ++i) {
            const auto c = static_cast<std::size_t>(j) * f.nx + i;
            fmt::format_to(it, "{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, j, f.rho[c],
                           f.omega_bar[c], f.omega_x[c], f.omega_y[c]);
        }
    }
    finish(out);
    return out;
}

MicroSnapshot parse_micro_snapshot(std::string_view text) {
    const auto lines = checked_lines(text, 2, micro_rows);
    if (lines[1] != kMicroColumns) throw SnapshotFormatError("snapshot: unexpected micro columns");

    MicroSnapshot snap;
    snap.t = parse_number<double>(header_field(lines[0], "t"), "t");
    snap.L = parse_number<double>(header_field(lines[0], "L"), "L");
    const std::size_t n = lines.size() - 2;
    snap.state = micro::ParticleEnsemble(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto cols = split(lines[r + 2], ',');
        if (cols.size() != 5) throw SnapshotFormatError(fmt::format("snapshot: row {} has {} fields", r, cols.size()));
        if (parse_number<std::size_t>(cols[0], "id") != r) {
            throw SnapshotFormatError(fmt::format("snapshot: row {} is out of order", r));
        }
        snap.state.x[r] = parse_number<double>(cols[1], "x");
        snap.state.y[r] = parse_number<double>(cols[2], "y");
        snap.state.theta[r] = parse_number<double>(cols[3], "theta");
        snap.state.omega[r] = parse_number<double>(cols[4], "omega");
    }
    return snap;
}

MacroFrame parse_macro_snapshot(std::string_view text) {
    const auto lines = checked_lines(text, 2, macro_rows);
    if (lines[1] != kMacroColumns) throw SnapshotFormatError("snapshot: unexpected macro columns");

    MacroFrame f;
    f.t = parse_number<double>(header_field(lines[0], "t"), "t");
    f.nx = parse_number<int>(header_field(lines[0], "nx"), "nx");
    f.ny = parse_number<int>(header_field(lines[0], "ny"), "ny");
    f.L = parse_number<double>(header_field(lines[0], "L"), "L");
    const std::size_t n = lines.size() - 2;
    f.rho.resize(n);
    f.omega_bar.resize(n);
    f.omega_x.resize(n);
    f.omega_y.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto cols = split(lines[r + 2], ',');
        if (cols.size() != 6) throw SnapshotFormatError(fmt::format("snapshot: row {} has {} fields", r, cols.size()));
        const auto i = parse_number<std::size_t>(cols[0], "i");
        const auto j = parse_number<std::size_t>(cols[1], "j");
        if (j * static_cast<std::size_t>(f.nx) + i != r) {
            throw SnapshotFormatError(fmt::format("snapshot: row {} is out of order", r));
        }
        f.rho[r] = parse_number<double>(cols[2], "rho");
        f.omega_bar[r] = parse_number<double>(cols[3], "omega_bar");
        f.omega_x[r] = parse_number<double>(cols[4], "Omega_x");
        f.omega_y[r] = parse_number<double>(cols[5], "Omega_y");
    }
    return f;
}

SnapshotKind detect_kind(std::string_view text) {
    if (text.starts_with(kMicroMagic)) return SnapshotKind::micro;
    if (text.starts_with(kMacroMagic)) return SnapshotKind::macro;
    throw SnapshotFormatError("snapshot: unknown header");
}

void write_snapshot(const std::filesystem::path& file, const MicroSnapshot& snap) {
    write_text(file, format_snapshot(snap));
}

void write_snapshot(const std::filesystem::path& file, const MacroFrame& frame) {
    write_text(file, format_snapshot(frame));
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error(fmt::format("cannot open '{}'", file.string()));
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

DirectorySink::DirectorySink(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path DirectorySink::next_path() {
    return dir_ / fmt::format("snapshot_{:06d}.csv", count_++);
}

void DirectorySink::write(const MicroSnapshot& snap) { write_snapshot(next_path(), snap); }

void DirectorySink::write(const MacroSnapshot& snap) {
    write_snapshot(next_path(), MacroFrame::from_state(snap.t, snap.state));
}

}  // namespace vk::io
