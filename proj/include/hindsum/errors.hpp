#pragma once

#include <stdexcept>
#include <string>

namespace hindsum {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Program text could not be parsed; carries a 1-based line number.
struct ParseError : Error {
    ParseError(std::string msg, std::size_t line)
        : Error("parse error (line " + std::to_string(line) + "): " + std::move(msg)),
          line(line) {}
    std::size_t line = 0;
};

struct ForwardReferenceError : Error {
    ForwardReferenceError(const std::string& name, std::size_t line)
        : Error("forward reference to '" + name + "' (line " + std::to_string(line) + ")"),
          line(line) {}
    std::size_t line = 0;
};

struct CyclicReferenceError : Error {
    using Error::Error;
};

// An oracle call had no staged decision to answer it.  Seeing this during a
// staged run means the staging order is broken.
struct UnresolvedOracleError : Error {
    using Error::Error;
};

// The filter could not decide the queried set at this horizon.
struct UndecidedOracleError : Error {
    using Error::Error;
};

struct UndecidedGoalError : Error {
    using Error::Error;
};

struct ColoringPartialError : Error {
    using Error::Error;
};

struct SpaceTooLargeError : Error {
    using Error::Error;
};

struct EmptyIntersectionError : Error {
    using Error::Error;
};

struct EvalError : Error {
    using Error::Error;
};

// The solver could not refine the generator sequence at this horizon.  The
// finite approximation was too tight; distinct from any soundness failure.
struct RefinementFailedError : Error {
    RefinementFailedError(int stage, const std::string& why)
        : Error("refinement failed at stage " + std::to_string(stage) + ": " + why),
          stage(stage) {}
    int stage = 0;
};

struct SchemaError : Error {
    using Error::Error;
};

}  // namespace hindsum
