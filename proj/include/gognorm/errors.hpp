#pragma once

#include <stdexcept>
#include <string>

namespace gognorm {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Word / presentation layer.
struct UnknownGeneratorError : Error { using Error::Error; };
struct VertexMismatchError : Error { using Error::Error; };
struct GraphMismatchError : Error { using Error::Error; };

// Transplant layer.
struct DegreeTooLowError : Error { using Error::Error; };
struct NotFreeProductError : Error { using Error::Error; };

// Quasimorphism layer.
struct OddnessViolationError : Error { using Error::Error; };

// Seminorm layer.
struct NegativeThetaError : Error { using Error::Error; };
struct NotACycleError : Error { using Error::Error; };
struct NotAConeCycleError : Error { using Error::Error; };
struct NonpositiveEpsilonError : Error { using Error::Error; };
struct InterfaceMismatchError : Error { using Error::Error; };
struct UnfillableError : Error { using Error::Error; };
struct MalformedProblemError : Error { using Error::Error; };

}  // namespace gognorm
