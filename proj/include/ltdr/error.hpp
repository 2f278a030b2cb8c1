// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ltdr {

/// Failure categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
    Domain,            // argument outside the mathematical domain
    Bounds,            // index or window outside a series
    EmptyInput,
    Alignment,         // series do not overlap
    UndefinedCorrelation,
    DegenerateVariance,
    NonMeanReverting,
    FitFailure,
    IllConditioned,
    TooManyFailures,
    Parse,             // malformed input file
    MissingDates,
    DuplicateDate,
    InsufficientData,
    Io,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for errors produced while reading or preparing input data.
    bool is_ingest() const noexcept {
        return kind_ == ErrorKind::Parse || kind_ == ErrorKind::MissingDates ||
               kind_ == ErrorKind::DuplicateDate || kind_ == ErrorKind::InsufficientData ||
               kind_ == ErrorKind::Io;
    }

private:
    ErrorKind kind_;
};

}  // namespace ltdr
