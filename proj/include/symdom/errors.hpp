#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symdom {

/// A constant, dimension or shape outside its documented domain.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An exact computation would exceed its enumeration cap.
class CapacityError : public std::length_error {
public:
    CapacityError(const std::string& what, std::uint64_t requested, std::uint64_t cap)
        : std::length_error(what + " (requested " + std::to_string(requested) + ", cap " +
                            std::to_string(cap) + ")"),
          requested_(requested), cap_(cap) {}

    std::uint64_t requested() const noexcept { return requested_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t requested_;
    std::uint64_t cap_;
};

/// An experiment's input did not satisfy the hypothesis it relies on.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace symdom
