#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "vk/diagnostics.hpp"
#include "vk/macrosim.hpp"
#include "vk/microsim.hpp"

namespace vk::io {

enum class Mode { micro, macro };

struct OutputSpec {
    std::string dir = "out";
    double snapshot_every = 1.0;
    double diag_every = 0.1;

    bool operator==(const OutputSpec&) const = default;
};

struct AnalysisSpec {
    diag::ClassifierThresholds thresholds;
    int bins = 0;  // 0: default binning

    bool operator==(const AnalysisSpec&) const = default;
};

/// A validated run description. Exactly one of `micro` / `macro` is set,
/// matching `mode`; the init spec of the other kind keeps its defaults.
struct RunConfig {
    Mode mode = Mode::micro;
    std::optional<micro::MicroParams> micro;
    std::optional<macro::MacroParams> macro;
    micro::InitSpec micro_init;
    macro::MacroInitSpec macro_init;
    OutputSpec output;
    AnalysisSpec analysis;

    std::uint64_t seed() const;

    bool operator==(const RunConfig&) const = default;
};

struct ParseOptions {
    bool allow_stiff = false;  // same effect as allow_stiff = true in [micro]
};

/// INI-style text with sections [micro] or [macro], plus optional [init],
/// [output] and [analysis]; ';' starts a comment. Unknown sections or keys,
/// missing required keys and invariant violations throw ConfigError.
RunConfig parse_config(std::string_view text, const ParseOptions& opts = {});
RunConfig load_config(const std::string& path, const ParseOptions& opts = {});

/// Inverse of parse_config: the emitted text parses back to an equal config.
std::string emit_config(const RunConfig& cfg);

}  // namespace vk::io
