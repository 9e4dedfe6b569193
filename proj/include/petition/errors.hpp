#pragma once

#include <stdexcept>
#include <string>

namespace petition {

/// Rough grouping used by callers that map failures to exit codes.
enum class ErrorKind {
    parameter,     // bad arguments, malformed input
    protocol,      // a rule of the scheme rejected the operation
    verification,  // integrity/authenticity check failed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& detail = "")
        : std::runtime_error(detail.empty() ? code : code + ": " + detail),
          kind_(kind),
          code_(std::move(code)) {}

    ErrorKind kind() const { return kind_; }

    /// Stable machine-readable identifier, e.g. "insufficient shares".
    const std::string& code() const { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

inline Error parameter_error(const std::string& code, const std::string& detail = "") {
    return Error(ErrorKind::parameter, code, detail);
}
inline Error protocol_error(const std::string& code, const std::string& detail = "") {
    return Error(ErrorKind::protocol, code, detail);
}
inline Error verification_error(const std::string& code, const std::string& detail = "") {
    return Error(ErrorKind::verification, code, detail);
}

}  // namespace petition
