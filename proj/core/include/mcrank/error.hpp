#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcrank {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed textual input (corpus lines, CLI values).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what) {}

    // 1-based line number, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

// Corrupt or truncated binary model/table files.
class FormatError : public Error {
public:
    using Error::Error;
};

// A configured draw or entry budget was exhausted before completion.
class BudgetError : public Error {
public:
    using Error::Error;
};

// API used against its contract, e.g. a bin index paired with a foreign table.
class MisuseError : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace mcrank
