#pragma once

#include <stdexcept>
#include <string>

namespace ewfs {

// Base for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed scenario or protocol text.
class parse_error : public error {
public:
    using error::error;
};

// A numeric check (norm, orthogonality, deviation) exceeded its tolerance.
class tolerance_error : public error {
public:
    using error::error;
};

}  // namespace ewfs
