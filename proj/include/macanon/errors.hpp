#pragma once

#include <stdexcept>
#include <string>

namespace macanon {

// Malformed textual input (MAC strings, hex salts, CSV structure).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arguments outside an operation's mathematical domain.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A request that exceeds what a finite resource can hold
// (e.g. sampling more unique addresses than a range contains).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structurally invalid policy or configuration.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runtime resource exhaustion (KDF memory, entropy source).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace macanon
