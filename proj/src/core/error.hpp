#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace kpp {

enum class ErrorKind {
    InvalidArgument,
    Config,
    Numeric,
    Analysis,
    Io,
};

/// Single exception type for the library; the kind drives C API status codes
/// and CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}

using WarningSink = std::function<void(const std::string&)>;

/// Replaces the process-wide warning sink. Passing an empty function restores
/// the default (stderr).
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace kpp
