#pragma once

#include <stdexcept>
#include <string>

namespace vk {

/// Invalid or inconsistent run configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulation produced a state it cannot continue from (non-finite values,
/// non-positive density, CFL violation, loss of hyperbolicity). Exit code 3.
class NumericalAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed snapshot file: bad header, wrong row count, unparsable field.
class SnapshotFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Snapshot payload does not match its recorded checksum (or it is missing).
class ChecksumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vk
