#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vk/sink.hpp"

namespace vk::io {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);

/// Grid snapshot as stored on disk: primitive fields in storage order.
struct MacroFrame {
    double t = 0.0;
    int nx = 0;
    int ny = 0;
    double L = 0.0;
    std::vector<double> rho;
    std::vector<double> omega_bar;
    std::vector<double> omega_x;
    std::vector<double> omega_y;

    static MacroFrame from_state(double t, const macro::MacroState& s);
    macro::MacroState to_state() const;

    bool operator==(const MacroFrame&) const = default;
};

enum class SnapshotKind { micro, macro };

/// Text form: header line, CSV column line, one row per particle or cell with
/// 17 significant digits, then `# fnv1a64=<hex>` over everything before it.
std::string format_snapshot(const MicroSnapshot& snap);
std::string format_snapshot(const MacroFrame& frame);

/// Throws ChecksumError if the trailer is missing or does not match, and
/// SnapshotFormatError for a bad header, row count or field.
MicroSnapshot parse_micro_snapshot(std::string_view text);
MacroFrame parse_macro_snapshot(std::string_view text);
SnapshotKind detect_kind(std::string_view text);

void write_snapshot(const std::filesystem::path& file, const MicroSnapshot& snap);
void write_snapshot(const std::filesystem::path& file, const MacroFrame& frame);
std::string read_file(const std::filesystem::path& file);

/// Snapshot files (*.csv) of a directory in name order.
std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir);

/// Writes snapshot_000000.csv, snapshot_000001.csv, ... into a directory,
/// creating it if needed.
class DirectorySink final : public SnapshotSink {
public:
    explicit DirectorySink(std::filesystem::path dir);

    void write(const MicroSnapshot& snap) override;
    void write(const MacroSnapshot& snap) override;

    std::size_t written() const { return count_; }

private:
    std::filesystem::path next_path();

    std::filesystem::path dir_;
    std::size_t count_ = 0;
};

}  // namespace vk::io
