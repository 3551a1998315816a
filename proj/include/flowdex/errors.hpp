#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace flowdex {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed graph, certificate or cover text. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    enum class Kind { Malformed, Loop, VertexOutOfRange, MissingSection, Truncated };

    ParseError(Kind kind, std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

/// A search ran out of nodes before it could decide. Distinct from "none found".
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(std::uint64_t budget)
        : Error("search budget of " + std::to_string(budget) + " nodes exceeded"), budget_(budget) {}

    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t budget_;
};

/// A construction needed an object (flow, cover) that does not exist for this graph.
class NotFound : public Error {
public:
    using Error::Error;
};

/// Precondition violations on arguments (dimension mismatch, bad parameter order, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A guaranteed outcome did not happen. Indicates a bug.
class InternalConsistency : public Error {
public:
    using Error::Error;
};

}  // namespace flowdex
