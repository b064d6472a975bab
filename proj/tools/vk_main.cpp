#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vk/coefficients.hpp"
#include "vk/config.hpp"
#include "vk/diagnostics.hpp"
#include "vk/errors.hpp"
#include "vk/macrosim.hpp"
#include "vk/microsim.hpp"
#include "vk/parallel.hpp"
#include "vk/snapshot.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kRunConfigName = "config.ini";

json series_json(const vk::diag::OrderTimeSeries& s) {
    return {{"times", s.times},
            {"polar_order", s.polar_order},
            {"global_angle", s.global_angle},
            {"mean_omega", s.mean_omega},
            {"density_variance", s.density_variance}};
}

json classification_json(const vk::diag::Classification& c) {
    const auto& m = c.metrics;
    json metrics = {{"polar_order", m.polar_order},
                    {"density_variance", m.density_variance},
                    {"wave_energy_fraction", m.wave_energy_fraction},
                    {"cluster_rotation", m.cluster_rotation},
                    {"period", nullptr},
                    {"period_confidence", nullptr}};
    if (m.period) {
        metrics["period"] = m.period->period;
        metrics["period_confidence"] = m.period->confidence;
    }
    return {{"label", vk::diag::to_string(c.label)}, {"metrics", metrics}};
}

void save_config(const vk::io::RunConfig& cfg) {
    fs::create_directories(cfg.output.dir);
    std::FILE* f = std::fopen((fs::path(cfg.output.dir) / kRunConfigName).c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write run config to " + cfg.output.dir);
    const std::string text = vk::io::emit_config(cfg);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

int run_micro_cmd(const std::string& path, bool allow_stiff, const std::string& out_dir) {
    auto cfg = vk::io::load_config(path, {allow_stiff});
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (cfg.mode != vk::io::Mode::micro) throw vk::ConfigError("config: expected a [micro] section");
    const auto& p = *cfg.micro;
    if (p.allow_stiff && p.stiffness() > vk::micro::kStabilityLimit) {
        std::cerr << fmt::format(
            "warning: stability guard overridden, dt * max(k_theta, k_omega) = {:.4g}\n",
            p.stiffness());
    }
    save_config(cfg);
    vk::io::DirectorySink sink(cfg.output.dir);
    vk::micro::RunSchedule sched{cfg.output.snapshot_every, cfg.output.diag_every,
                                 cfg.analysis.thresholds.window_fraction, cfg.analysis.bins};
    const auto summary = vk::micro::run_micro(p, cfg.micro_init, sink, sched);
    const auto cls = vk::diag::classify_pattern(summary.series, summary.window_fields,
                                                cfg.analysis.thresholds);
    json out = {{"mode", "micro"},
                {"steps", summary.steps},
                {"t_final", summary.t_final},
                {"final_polar_order", summary.final_polar_order},
                {"final_mean_omega", summary.final_mean_omega},
                {"snapshots", sink.written()},
                {"output_dir", cfg.output.dir},
                {"classification", classification_json(cls)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_macro_cmd(const std::string& path, const std::string& out_dir) {
    auto cfg = vk::io::load_config(path);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (cfg.mode != vk::io::Mode::macro) throw vk::ConfigError("config: expected a [macro] section");
    save_config(cfg);
    vk::io::DirectorySink sink(cfg.output.dir);
    vk::macro::MacroSchedule sched{cfg.output.snapshot_every, cfg.output.diag_every,
                                   cfg.analysis.thresholds.window_fraction, cfg.analysis.bins};
    const auto summary = vk::macro::run_macro(*cfg.macro, cfg.macro_init, sink, sched);
    const auto cls = vk::diag::classify_pattern(summary.series, summary.window_fields,
                                                cfg.analysis.thresholds);
    json out = {{"mode", "macro"},
                {"steps", summary.steps},
                {"t_final", summary.t_final},
                {"total_mass", summary.total_mass.back()},
                {"total_angular_momentum", summary.total_angular_momentum.back()},
                {"max_mass_drift", summary.max_mass_drift},
                {"max_momentum_drift", summary.max_momentum_drift},
                {"max_direction_defect", summary.max_direction_defect},
                {"snapshots", sink.written()},
                {"output_dir", cfg.output.dir},
                {"classification", classification_json(cls)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int coeffs_cmd(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw vk::ConfigError("coeffs: --kappa must be positive and finite");
    }
    const auto c = vk::coeffs::compute_closure(kappa);
    json out = {{"kappa", c.kappa}, {"c1", c.c1},   {"c2", c.c2},
                {"K1", c.K1},       {"K2", c.K2},   {"quad_error", c.quad_error}};
    std::cout << out.dump() << "\n";
    return 0;
}

int analyze_cmd(const std::string& dir, bool as_json, int bins_opt) {
    if (!fs::is_directory(dir)) throw vk::ConfigError("analyze: not a directory: " + dir);
    vk::io::AnalysisSpec analysis;
    std::optional<double> radius;
    if (const auto saved = fs::path(dir) / kRunConfigName; fs::exists(saved)) {
        const auto cfg = vk::io::load_config(saved.string(), {true});
        analysis = cfg.analysis;
        if (cfg.micro) radius = cfg.micro->R;
    }
    const auto files = vk::io::list_snapshots(dir);
    if (files.empty()) throw vk::SnapshotFormatError("analyze: no snapshots in " + dir);

    struct Loaded {
        double t;
        vk::diag::OrderSample sample;
        vk::diag::BinnedField field;
    };
    std::vector<Loaded> loaded;
    std::string kind;
    for (const auto& f : files) {
        const std::string text = vk::io::read_file(f);
        if (vk::io::detect_kind(text) == vk::io::SnapshotKind::micro) {
            kind = "micro";
            const auto snap = vk::io::parse_micro_snapshot(text);
            int bins = bins_opt > 0 ? bins_opt : analysis.bins;
            if (bins <= 0) bins = radius ? vk::diag::default_micro_bins(snap.L, *radius) : 32;
            loaded.push_back({snap.t, vk::diag::sample(snap.state, snap.L, bins),
                              vk::diag::bin_particles(snap.state, snap.L, bins)});
        } else {
            kind = "macro";
            const auto state = vk::io::parse_macro_snapshot(text).to_state();
            int bins = bins_opt > 0 ? bins_opt : analysis.bins;
            if (bins <= 0) bins = vk::diag::default_macro_bins(state.nx);
            const double t = vk::io::parse_macro_snapshot(text).t;
            loaded.push_back({t, vk::diag::sample(state, bins), vk::diag::bin_state(state, bins)});
        }
    }
    std::sort(loaded.begin(), loaded.end(), [](const Loaded& a, const Loaded& b) { return a.t < b.t; });

    vk::diag::OrderTimeSeries series;
    for (const auto& l : loaded) vk::diag::append(series, l.t, l.sample);
    const double t0 = loaded.front().t;
    const double t1 = loaded.back().t;
    const double from = t1 - analysis.thresholds.window_fraction * (t1 - t0);
    std::vector<vk::diag::BinnedField> fields;
    for (const auto& l : loaded) {
        if (l.t >= from) fields.push_back(l.field);
    }
    const auto cls = vk::diag::classify_pattern(series, fields, analysis.thresholds);

    if (as_json) {
        json out = {{"kind", kind},
                    {"snapshots", loaded.size()},
                    {"series", series_json(series)},
                    {"classification", classification_json(cls)}};
        std::cout << out.dump(2) << "\n";
    } else {
        const auto& m = cls.metrics;
        std::cout << fmt::format("{} snapshots ({}), t = {:g} .. {:g}\n", loaded.size(), kind, t0, t1)
                  << fmt::format("label:                {}\n", vk::diag::to_string(cls.label))
                  << fmt::format("polar order:          {:.4f}\n", m.polar_order)
                  << fmt::format("density variance:     {:.4f}\n", m.density_variance)
                  << fmt::format("wave energy fraction: {:.4f}\n", m.wave_energy_fraction)
                  << fmt::format("cluster rotation:     {:.4f}\n", m.cluster_rotation);
        if (m.period) {
            std::cout << fmt::format("period:               {:.6g} (R^2 = {:.4f})\n", m.period->period,
                                     m.period->confidence);
        } else {
            std::cout << "period:               none\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vicsek-Kuramoto micro/macro simulation suite"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    bool allow_stiff = false;
    auto* micro = app.add_subcommand("micro", "Run the particle model");
    micro->add_option("--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
    micro->add_flag("--allow-stiff", allow_stiff, "Override the dt * max(k) <= 0.5 guard");
    micro->add_option("--out", out_dir, "Output directory, overrides [output] dir");

    auto* macro = app.add_subcommand("macro", "Run the continuum model");
    macro->add_option("--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
    macro->add_option("--out", out_dir, "Output directory, overrides [output] dir");

    double kappa = 0.0;
    auto* coeffs = app.add_subcommand("coeffs", "Print closure coefficients as JSON");
    coeffs->add_option("--kappa", kappa, "Concentration k_theta / alpha^2")->required();

    std::string dir;
    bool as_json = false;
    int bins = 0;
    auto* analyze = app.add_subcommand("analyze", "Classify a snapshot directory");
    analyze->add_option("dir", dir, "Snapshot directory")->required();
    analyze->add_flag("--json", as_json, "Emit the full JSON report");
    analyze->add_option("--bins", bins, "Bins per side for field metrics");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    vk::configure_threads_from_env();
    try {
        if (*micro) return run_micro_cmd(config, allow_stiff, out_dir);
        if (*macro) return run_macro_cmd(config, out_dir);
        if (*coeffs) return coeffs_cmd(kappa);
        if (*analyze) return analyze_cmd(dir, as_json, bins);
    } catch (const vk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const vk::NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
