#pragma once
/// @file errors.hpp
/// @brief Error taxonomy shared by the library and the CLI exit-code mapping.

#include <stdexcept>
#include <string>

namespace stencilfab {

/// Parameter: caller passed values outside an operation's contract.
/// Validation: a structurally well-formed artifact violates a resource or
///             topology rule (fabric/plan checks).
/// Io: file, format, or parse failures.
/// Protocol: object-fifo acquire/release discipline violated.
/// Deadlock: the dataflow simulation can make no further progress.
/// Semantic: results disagree with the golden semantics (CLI exit code 1).
enum class ErrorKind { Parameter, Validation, Io, Protocol, Deadlock, Semantic };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_parameter(const std::string& msg) {
    throw Error(ErrorKind::Parameter, "parameter error: " + msg);
}
[[noreturn]] inline void fail_validation(const std::string& msg) {
    throw Error(ErrorKind::Validation, "validation error: " + msg);
}
[[noreturn]] inline void fail_io(const std::string& msg) {
    throw Error(ErrorKind::Io, "io error: " + msg);
}
[[noreturn]] inline void fail_protocol(const std::string& msg) {
    throw Error(ErrorKind::Protocol, "protocol error: " + msg);
}
[[noreturn]] inline void fail_deadlock(const std::string& msg) {
    throw Error(ErrorKind::Deadlock, "deadlock: " + msg);
}
[[noreturn]] inline void fail_semantic(const std::string& msg) {
    throw Error(ErrorKind::Semantic, "semantic mismatch: " + msg);
}

} // namespace stencilfab
