#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace convote {

/// Square matrix of exact integer edge weights / tallies.
using WeightMatrix = std::vector<std::vector<std::uint64_t>>;

/// Invalid input: malformed ballot files, contract violations on user-supplied
/// data. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure with a 1-based line number of the offending ballot-file line.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* context) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw InputError(std::string(context) + ": 64-bit overflow");
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* context) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw InputError(std::string(context) + ": 64-bit overflow");
    return r;
}

} // namespace detail

} // namespace convote
