// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace phishhook
{
/// Base of every error thrown by the library. `kind()` is a short stable
/// token used by the CLI for machine-parsable error lines.
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
    /// Throws a copy of this error whose message is prefixed with `context`.
    [[noreturn]] virtual void rethrow_with_context(const std::string& context) const { throw Error(context + what()); }
};

#define PHISHHOOK_DEFINE_ERROR(Name, token)                              \
    class Name : public Error                                            \
    {                                                                    \
    public:                                                              \
        using Error::Error;                                              \
        const char* kind() const noexcept override { return token; }     \
        [[noreturn]] void rethrow_with_context(const std::string& context) const override \
        {                                                                \
            throw Name(context + what());                                \
        }                                                                \
    }

PHISHHOOK_DEFINE_ERROR(ParseError, "parse");
PHISHHOOK_DEFINE_ERROR(IntegrityError, "integrity");
PHISHHOOK_DEFINE_ERROR(DecodeError, "decode");
PHISHHOOK_DEFINE_ERROR(ValidationError, "validation");
PHISHHOOK_DEFINE_ERROR(IoError, "io");
PHISHHOOK_DEFINE_ERROR(TransportError, "transport");
PHISHHOOK_DEFINE_ERROR(EmptyInputError, "empty-input");
PHISHHOOK_DEFINE_ERROR(DegenerateError, "degenerate");
PHISHHOOK_DEFINE_ERROR(ShapeError, "shape");

#undef PHISHHOOK_DEFINE_ERROR

/// JSON-RPC error object returned by the remote node.
class RemoteError : public Error
{
public:
    RemoteError(long code, const std::string& message)
      : Error("rpc error " + std::to_string(code) + ": " + message), code_(code)
    {}
    const char* kind() const noexcept override { return "remote"; }
    long code() const noexcept { return code_; }
    [[noreturn]] void rethrow_with_context(const std::string& context) const override
    {
        throw RemoteError(code_, context + what(), 0);
    }

private:
    RemoteError(long code, const std::string& full_message, int) : Error(full_message), code_(code) {}
    long code_;
};
}  // namespace phishhook
