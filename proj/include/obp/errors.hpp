#pragma once

#include <stdexcept>
#include <string>

namespace obp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid process/server/edge id or malformed instance parameters.
class InstanceError : public Error { using Error::Error; };
/// Requests appended out of time order, or a gap in a process' time layers.
class SequencingError : public Error { using Error::Error; };
/// A path reuses an edge already owned by the certificate.
class OverlapError : public Error { using Error::Error; };
/// A path is not a simple server-to-server path.
class ShapeError : public Error { using Error::Error; };
/// Operation on a terminated FLOW instance.
class LifecycleError : public Error { using Error::Error; };
/// Request endpoint outside an instance scope, or overlapping scopes on merge.
class ScopeError : public Error { using Error::Error; };
/// Witness requested for a process of the special piece.
class UndefinedWitnessError : public Error { using Error::Error; };
/// Input broke a model precondition (learning restriction, load bound).
class ModelViolation : public Error { using Error::Error; };
/// Exact oracle would exceed its enumeration budget.
class ScaleError : public Error { using Error::Error; };
/// Adversary construction reached a state its invariants rule out.
class ConstructionError : public Error { using Error::Error; };
/// Bad experiment configuration or unparsable input file.
class ConfigError : public Error { using Error::Error; };

} // namespace obp
