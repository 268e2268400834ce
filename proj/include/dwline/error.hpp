#pragma once

#include <stdexcept>
#include <string>

namespace dwline {

/// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A table, file, or argument that does not describe a valid object.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A windowed lift was asked for a value outside its certified window.
class WindowError : public Error {
public:
    using Error::Error;
};

/// A certificate check failed after construction. Indicates a bug, never bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace dwline
