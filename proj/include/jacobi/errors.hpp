#pragma once

#include <stdexcept>
#include <string>

namespace jacobi {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on the arguments was violated (bad parameter, empty window, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A truncation is too small to answer the question that was asked.
class InsufficientResolution : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// A document (JSON coefficient file, S-fraction file) could not be parsed.
class InputFileError : public Error {
public:
    using Error::Error;
};

// An iterative method failed to converge within its documented cap.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

// Arguments are well-formed but outside the range an algorithm supports.
class UnsupportedRange : public Error {
public:
    using Error::Error;
};

}  // namespace jacobi
