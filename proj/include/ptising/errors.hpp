#pragma once

#include <stdexcept>
#include <string>

namespace ptising {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments (bad grid size, out-of-range branch, malformed config).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The quasiparticle gap closes on the sampled momenta, so derivatives diverge.
class GaplessError : public Error {
public:
    using Error::Error;
};

/// A resonance denominator of the composite-operator construction vanishes.
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

/// Formula evaluated at a point where it is singular.
class SingularInput : public Error {
public:
    using Error::Error;
};

/// An iterative solver did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace ptising
