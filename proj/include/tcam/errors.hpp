#pragma once

#include <stdexcept>
#include <string>

namespace tcam {

// Bad user input: malformed files, unknown names, invalid parameters.
// The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Failures inside a numerical routine. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CycleError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class DuplicateEdgeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class NodeMismatchError : public InputError {
public:
    using InputError::InputError;
};

class DuplicatePositionError : public InputError {
public:
    using InputError::InputError;
};

class SingularBasisError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateFoldError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ZeroVarianceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace tcam
