#pragma once

#include <stdexcept>
#include <string>

namespace carbosim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input document (platform, workload, events, CSV, ...).
/// The message carries the location (line or host/job id) when known.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Power profile with idle > epsilon or epsilon > allcores.
class OrderingViolation : public ParseError {
public:
    using ParseError::ParseError;
};

/// Two hosts share the same id in one platform document.
class DuplicateHostId : public ParseError {
public:
    using ParseError::ParseError;
};

/// Two jobs share the same id in one workload document.
class DuplicateJobId : public ParseError {
public:
    using ParseError::ParseError;
};

/// External event with an action outside {power_on, power_off, set_ci}.
class UnknownAction : public ParseError {
public:
    using ParseError::ParseError;
};

/// An update was requested for a time before the last settlement.
class ClockRegression : public Error {
public:
    using Error::Error;
};

/// power_off targeted a host that still has running jobs.
class PreemptionUnsupported : public Error {
public:
    using Error::Error;
};

/// File could not be read, written or renamed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Metric preconditions violated (length mismatch, zero variance, ...).
class MetricsError : public Error {
public:
    using Error::Error;
};

} // namespace carbosim
