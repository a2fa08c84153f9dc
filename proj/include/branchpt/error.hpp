#pragma once

#include <stdexcept>
#include <string>

namespace branchpt {

/// Distinguishes bad input from a numerical procedure that failed to converge.
enum class ErrorKind { validation, numerical };

/// Every failure in the library is reported as an Error carrying a stable
/// short code (e.g. "trunc-mismatch") that callers and tests can match on.
class Error : public std::runtime_error {
public:
    Error(std::string code, ErrorKind kind, const std::string &detail = {})
        : std::runtime_error(detail.empty() ? code : code + ": " + detail),
          code_(std::move(code)), kind_(kind)
    {
    }

    const std::string &code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_; }

private:
    std::string code_;
    ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string &code, const std::string &detail = {})
{
    throw Error(code, ErrorKind::validation, detail);
}

[[noreturn]] inline void fail_numeric(const std::string &code, const std::string &detail = {})
{
    throw Error(code, ErrorKind::numerical, detail);
}

} // namespace branchpt
