// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace tucker {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-conformable shapes, out-of-range modes, invalid ranks or config values.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A QR factorization found a numerically zero diagonal in R.
class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

/// Divergence, non-finite values, eigensolver failure, indefinite metric.
class NumericError : public Error {
public:
    using Error::Error;
};

enum class IoErrorKind {
    open,
    write,
    bad_magic,
    version_mismatch,
    truncated,
    length_mismatch,
    non_finite,
    parse,
};

class IoError : public Error {
public:
    IoError(IoErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    [[nodiscard]] IoErrorKind kind() const noexcept { return kind_; }

private:
    IoErrorKind kind_;
};

} // namespace tucker
