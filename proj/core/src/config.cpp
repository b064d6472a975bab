#include "vk/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "vk/errors.hpp"

namespace vk::io {
namespace {

namespace pt = boost::property_tree;

class Section {
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    bool present() const { return tree_ != nullptr; }

    std::optional<std::string> raw(const std::string& key) {
        used_.insert(key);
        if (!tree_) return std::nullopt;
        const auto it = tree_->find(key);
        if (it == tree_->not_found()) return std::nullopt;
        return it->second.data();
    }

    std::string required_raw(const std::string& key) {
        auto v = raw(key);
        if (!v) throw ConfigError(fmt::format("{}.{}: required key is missing", name_, key));
        return *v;
    }

    template <class T>
    T convert(const std::string& key, const std::string& text) {
        T v{};
        const auto* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc() || ptr != end || text.empty()) {
            throw ConfigError(fmt::format("{}.{}: cannot parse '{}'", name_, key, text));
        }
        return v;
    }

    template <class T>
    void get(const std::string& key, T& target) {
        if (auto v = raw(key)) target = value<T>(key, *v);
    }

    template <class T>
    T require(const std::string& key) {
        return value<T>(key, required_raw(key));
    }

    template <class T>
    T value(const std::string& key, const std::string& text) {
        if constexpr (std::is_same_v<T, bool>) {
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            throw ConfigError(fmt::format("{}.{}: expected true or false, got '{}'", name_, key, text));
        } else if constexpr (std::is_same_v<T, std::string>) {
            return text;
        } else {
            return convert<T>(key, text);
        }
    }

    void reject_unknown() const {
        if (!tree_) return;
        for (const auto& [key, child] : *tree_) {
            if (!used_.count(key)) throw ConfigError(fmt::format("{}.{}: unknown key", name_, key));
        }
    }

private:
    std::string name_;
    const pt::ptree* tree_;
    std::set<std::string> used_;
};

const pt::ptree* child(const pt::ptree& root, const char* name) {
    const auto it = root.find(name);
    return it == root.not_found() ? nullptr : &it->second;
}

micro::MicroParams parse_micro(Section& s, bool allow_stiff_override) {
    micro::MicroParams p;
    p.n = s.require<std::size_t>("n");
    p.c = s.require<double>("c");
    p.k_theta = s.require<double>("k_theta");
    p.k_omega = s.require<double>("k_omega");
    p.alpha2 = s.require<double>("alpha2");
    p.beta2 = s.require<double>("beta2");
    p.R = s.require<double>("R");
    p.L = s.require<double>("L");
    p.dt = s.require<double>("dt");
    p.t_end = s.require<double>("t_end");
    s.get("seed", p.seed);
    if (auto k = s.raw("kernel"); k && *k != "indicator") {
        throw ConfigError(fmt::format("micro.kernel: unsupported shape '{}'", *k));
    }
    s.get("allow_stiff", p.allow_stiff);
    s.get("step_halving", p.step_halving);
    if (allow_stiff_override) p.allow_stiff = true;
    p.validate();
    return p;
}

macro::MacroParams parse_macro(Section& s) {
    const double kappa = s.require<double>("kappa");
    if (!(kappa > 0.0)) throw ConfigError("macro.kappa: must be positive");
    macro::MacroParams p;
    try {
        p.coeffs = coeffs::compute_closure(kappa);
    } catch (const std::exception& e) {
        throw ConfigError(fmt::format("macro.kappa: coefficients unavailable ({})", e.what()));
    }
    if (auto v = s.raw("pressure_coef")) p.pressure_coef = s.value<double>("pressure_coef", *v);
    p.dt = s.require<double>("dt");
    p.nx = s.require<int>("nx");
    p.ny = p.nx;
    s.get("ny", p.ny);
    p.L = s.require<double>("L");
    p.t_end = s.require<double>("t_end");
    s.get("cfl_max", p.cfl_max);
    p.validate();
    return p;
}

const std::map<std::string, micro::InitKind> kMicroKinds{
    {"uniform", micro::InitKind::uniform},
    {"aligned", micro::InitKind::aligned},
    {"equilibrium", micro::InitKind::equilibrium}};

const std::map<std::string, macro::MacroInitKind> kMacroKinds{
    {"constant", macro::MacroInitKind::constant},
    {"random", macro::MacroInitKind::random},
    {"well_prepared", macro::MacroInitKind::well_prepared},
    {"bump", macro::MacroInitKind::bump}};

template <class Map>
std::string kind_name(const Map& m, typename Map::mapped_type k) {
    for (const auto& [name, v] : m) {
        if (v == k) return name;
    }
    return {};
}

template <class Map>
typename Map::mapped_type parse_kind(const Map& m, const std::string& text) {
    const auto it = m.find(text);
    if (it == m.end()) throw ConfigError(fmt::format("init.kind: unknown kind '{}'", text));
    return it->second;
}

micro::InitSpec parse_micro_init(Section& s) {
    micro::InitSpec init;
    if (auto k = s.raw("kind")) init.kind = parse_kind(kMicroKinds, *k);
    s.get("positive_fraction", init.positive_fraction);
    s.get("omega_plus", init.omega_plus);
    s.get("omega_minus", init.omega_minus);
    s.get("theta0", init.theta0);
    s.get("omega0", init.omega0);
    s.get("kappa", init.kappa);
    s.get("omega_variance", init.omega_variance);
    init.validate();
    return init;
}

macro::MacroInitSpec parse_macro_init(Section& s) {
    macro::MacroInitSpec init;
    if (auto k = s.raw("kind")) init.kind = parse_kind(kMacroKinds, *k);
    s.get("rho0", init.rho0);
    s.get("theta0", init.theta0);
    s.get("omega0", init.omega0);
    s.get("rho_amplitude", init.rho_amplitude);
    s.get("omega_amplitude", init.omega_amplitude);
    s.get("bump_amplitude", init.bump_amplitude);
    s.get("bump_width", init.bump_width);
    s.get("seed", init.seed);
    init.validate();
    return init;
}

OutputSpec parse_output(Section& s) {
    OutputSpec o;
    s.get("dir", o.dir);
    s.get("snapshot_every", o.snapshot_every);
    s.get("diag_every", o.diag_every);
    if (!(o.snapshot_every > 0.0)) throw ConfigError("output.snapshot_every: must be positive");
    if (!(o.diag_every > 0.0)) throw ConfigError("output.diag_every: must be positive");
    if (o.dir.empty()) throw ConfigError("output.dir: must not be empty");
    return o;
}

AnalysisSpec parse_analysis(Section& s) {
    AnalysisSpec a;
    auto& t = a.thresholds;
    s.get("sync_polar_order", t.sync_polar_order);
    s.get("uniform_density_variance", t.uniform_density_variance);
    s.get("cluster_density_variance", t.cluster_density_variance);
    s.get("wave_energy_fraction", t.wave_energy_fraction);
    s.get("cluster_max_polar_order", t.cluster_max_polar_order);
    s.get("cluster_min_rotation", t.cluster_min_rotation);
    s.get("window_fraction", t.window_fraction);
    s.get("period_window_fraction", t.period_window_fraction);
    s.get("period_min_polar_order", t.period.min_polar_order);
    s.get("period_min_periods", t.period.min_periods);
    s.get("period_min_confidence", t.period.min_confidence);
    s.get("bins", a.bins);
    auto fraction = [](double v, const char* key) {
        if (!(v > 0.0 && v <= 1.0)) throw ConfigError(fmt::format("analysis.{}: must lie in (0, 1]", key));
    };
    fraction(t.window_fraction, "window_fraction");
    fraction(t.period_window_fraction, "period_window_fraction");
    if (a.bins < 0) throw ConfigError("analysis.bins: must be non-negative");
    return a;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

// Drops trailing "  ; comment" / "  # comment" parts; line count is preserved.
std::string strip_inline_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        for (std::size_t k = 1; k < line.size(); ++k) {
            if ((line[k] == ';' || line[k] == '#') && (line[k - 1] == ' ' || line[k - 1] == '\t')) {
                line = line.substr(0, k);
                break;
            }
        }
        out.append(line);
        if (eol < text.size()) out.push_back('\n');
        pos = eol + 1;
    }
    return out;
}

}  // namespace

std::uint64_t RunConfig::seed() const {
    return mode == Mode::micro ? (micro ? micro->seed : 0) : macro_init.seed;
}

RunConfig parse_config(std::string_view text, const ParseOptions& opts) {
    pt::ptree root;
    try {
        std::istringstream is{strip_inline_comments(text)};
        pt::read_ini(is, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
    }

    static const std::set<std::string> kSections{"micro", "macro", "init", "output", "analysis"};
    for (const auto& [name, tree] : root) {
        if (!kSections.count(name) || (tree.empty() && !tree.data().empty())) {
            throw ConfigError(fmt::format("config: unknown section or top-level key '{}'", name));
        }
    }

    const bool has_micro = child(root, "micro") != nullptr;
    const bool has_macro = child(root, "macro") != nullptr;
    if (has_micro == has_macro) {
        throw ConfigError("config: exactly one of [micro] or [macro] must be present");
    }

    RunConfig cfg;
    Section init("init", child(root, "init"));
    if (has_micro) {
        cfg.mode = Mode::micro;
        Section s("micro", child(root, "micro"));
        cfg.micro = parse_micro(s, opts.allow_stiff);
        s.reject_unknown();
        cfg.micro_init = parse_micro_init(init);
    } else {
        cfg.mode = Mode::macro;
        Section s("macro", child(root, "macro"));
        cfg.macro = parse_macro(s);
        s.reject_unknown();
        cfg.macro_init = parse_macro_init(init);
    }
    init.reject_unknown();

    Section out("output", child(root, "output"));
    cfg.output = parse_output(out);
    out.reject_unknown();

    Section an("analysis", child(root, "analysis"));
    cfg.analysis = parse_analysis(an);
    an.reject_unknown();
    return cfg;
}

RunConfig load_config(const std::string& path, const ParseOptions& opts) {
    std::ifstream is(path);
    if (!is) throw ConfigError(fmt::format("config: cannot open '{}'", path));
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), opts);
}

std::string emit_config(const RunConfig& cfg) {
    std::string out;
    auto it = std::back_inserter(out);
    if (cfg.mode == Mode::micro) {
        const auto& p = cfg.micro.value();
        fmt::format_to(it, "[micro]\nn = {}\nc = {}\nk_theta = {}\nk_omega = {}\nalpha2 = {}\n",
                       p.n, num(p.c), num(p.k_theta), num(p.k_omega), num(p.alpha2));
        fmt::format_to(it, "beta2 = {}\nR = {}\nL = {}\ndt = {}\nt_end = {}\nseed = {}\n",
                       num(p.beta2), num(p.R), num(p.L), num(p.dt), num(p.t_end), p.seed);
        fmt::format_to(it, "kernel = indicator\nallow_stiff = {}\nstep_halving = {}\n\n",
                       p.allow_stiff, p.step_halving);
        const auto& i = cfg.micro_init;
        fmt::format_to(it, "[init]\nkind = {}\npositive_fraction = {}\nomega_plus = {}\n",
                       kind_name(kMicroKinds, i.kind), num(i.positive_fraction), num(i.omega_plus));
        fmt::format_to(it, "omega_minus = {}\ntheta0 = {}\nomega0 = {}\nkappa = {}\n",
                       num(i.omega_minus), num(i.theta0), num(i.omega0), num(i.kappa));
        fmt::format_to(it, "omega_variance = {}\n\n", num(i.omega_variance));
    } else {
        const auto& p = cfg.macro.value();
        fmt::format_to(it, "[macro]\nkappa = {}\n", num(p.coeffs.kappa));
        if (p.pressure_coef) fmt::format_to(it, "pressure_coef = {}\n", num(*p.pressure_coef));
        fmt::format_to(it, "dt = {}\nnx = {}\nny = {}\nL = {}\nt_end = {}\ncfl_max = {}\n\n",
                       num(p.dt), p.nx, p.ny, num(p.L), num(p.t_end), num(p.cfl_max));
        const auto& i = cfg.macro_init;
        fmt::format_to(it, "[init]\nkind = {}\nrho0 = {}\ntheta0 = {}\nomega0 = {}\n",
                       kind_name(kMacroKinds, i.kind), num(i.rho0), num(i.theta0), num(i.omega0));
        fmt::format_to(it, "rho_amplitude = {}\nomega_amplitude = {}\nbump_amplitude = {}\n",
                       num(i.rho_amplitude), num(i.omega_amplitude), num(i.bump_amplitude));
        fmt::format_to(it, "bump_width = {}\nseed = {}\n\n", num(i.bump_width), i.seed);
    }
    fmt::format_to(it, "[output]\ndir = {}\nsnapshot_every = {}\ndiag_every = {}\n\n",
                   cfg.output.dir, num(cfg.output.snapshot_every), num(cfg.output.diag_every));

    const auto& t = cfg.analysis.thresholds;
    fmt::format_to(it, "[analysis]\nsync_polar_order = {}\nuniform_density_variance = {}\n",
                   num(t.sync_polar_order), num(t.uniform_density_variance));
    fmt::format_to(it, "cluster_density_variance = {}\nwave_energy_fraction = {}\n",
                   num(t.cluster_density_variance), num(t.wave_energy_fraction));
    fmt::format_to(it, "cluster_max_polar_order = {}\ncluster_min_rotation = {}\n",
                   num(t.cluster_max_polar_order), num(t.cluster_min_rotation));
    fmt::format_to(it, "window_fraction = {}\nperiod_window_fraction = {}\n",
                   num(t.window_fraction), num(t.period_window_fraction));
    fmt::format_to(it, "period_min_polar_order = {}\nperiod_min_periods = {}\n",
                   num(t.period.min_polar_order), num(t.period.min_periods));
    fmt::format_to(it, "period_min_confidence = {}\nbins = {}\n", num(t.period.min_confidence),
                   cfg.analysis.bins);
    return out;
}

}  // namespace vk::io
