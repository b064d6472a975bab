#pragma once

#include <vector>

#include "vk/macro_state.hpp"
#include "vk/particles.hpp"

namespace vk {

struct MicroSnapshot {
    double t = 0.0;
    double L = 0.0;
    micro::ParticleEnsemble state;

    bool operator==(const MicroSnapshot&) const = default;
};

struct MacroSnapshot {
    double t = 0.0;
    macro::MacroState state;

    bool operator==(const MacroSnapshot&) const = default;
};

/// Destination for snapshots emitted by the run drivers.
class SnapshotSink {
public:
    virtual ~SnapshotSink() = default;
    virtual void write(const MicroSnapshot& snap) = 0;
    virtual void write(const MacroSnapshot& snap) = 0;
};

/// Discards everything.
class NullSink final : public SnapshotSink {
public:
    void write(const MicroSnapshot&) override {}
    void write(const MacroSnapshot&) override {}
};

/// Keeps snapshots in memory, optionally only those with t >= keep_from.
class MemorySink final : public SnapshotSink {
public:
    explicit MemorySink(double keep_from = -1.0) : keep_from_(keep_from) {}

    void write(const MicroSnapshot& snap) override {
        if (snap.t >= keep_from_) micro.push_back(snap);
    }
    void write(const MacroSnapshot& snap) override {
        if (snap.t >= keep_from_) macro.push_back(snap);
    }

    std::vector<MicroSnapshot> micro;
    std::vector<MacroSnapshot> macro;

private:
    double keep_from_;
};

}  // namespace vk
