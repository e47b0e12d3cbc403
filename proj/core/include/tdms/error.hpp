#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdms {

/// Base of every error raised by the library. `kind()` is a short stable tag
/// used by the command-line tool when printing one-line diagnostics.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : Error(what + " at byte " + std::to_string(byte_offset)), offset_(byte_offset) {}
    std::size_t byte_offset() const noexcept { return offset_; }
    const char* kind() const noexcept override { return "parse"; }

private:
    std::size_t offset_;
};

/// Input was syntactically fine but carried no document content at all.
class EmptyDocumentError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "empty-document"; }
};

class FormatError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "format"; }
};

class InvalidArgument : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-argument"; }
};

class InfeasibleSplit : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "infeasible-split"; }
};

class LabelError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "label"; }
};

class TrainingError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "training"; }
};

/// The scoring endpoint could not be reached or the connection dropped.
class TransportError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "transport"; }
};

/// The endpoint answered, but not in the agreed wire format.
class ProtocolError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "protocol"; }
};

/// The endpoint understood the request and refused or failed to score it.
class ScoringError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "scoring"; }
};

class MismatchError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "mismatch"; }
};

}  // namespace tdms
