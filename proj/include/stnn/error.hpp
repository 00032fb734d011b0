#pragma once

#include <stdexcept>
#include <string>

namespace stnn {

// Bad configuration or arguments supplied by the caller.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Mismatched vector/matrix shapes.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Coordinate or index outside the configured grid.
class OutOfBoundsError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Malformed input data: unreadable files, bad headers, empty sets.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Corrupt, truncated or unsupported binary file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stnn
