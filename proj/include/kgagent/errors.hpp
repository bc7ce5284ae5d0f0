#pragma once

#include <stdexcept>
#include <string>

namespace kgagent {

// All failures surface as exceptions rooted here so callers can catch one type
// at the CLI boundary and map it to an exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedTermError : Error {
  using Error::Error;
};

// N-Quads / JSON parse problems; message carries line or field context.
struct ParseError : Error {
  using Error::Error;
};

struct MalformedCapsuleError : Error {
  using Error::Error;
};

struct ConfigInvalidError : Error {
  using Error::Error;
};

// Raised when a metric's denominator is zero; callers that want the
// empty-graph boundary to read as 0 use evaluate_metric_or_zero.
struct UndefinedMetricError : Error {
  using Error::Error;
};

struct EmptyKnowledgeBaseError : Error {
  using Error::Error;
};

struct UnknownPredicateError : Error {
  using Error::Error;
};

struct UnknownEntityTypeError : Error {
  using Error::Error;
};

struct NoAvailableActionError : Error {
  using Error::Error;
};

struct EmptyBatchError : Error {
  using Error::Error;
};

struct ShapeMismatchError : Error {
  using Error::Error;
};

struct CheckpointCorruptError : Error {
  using Error::Error;
};

}  // namespace kgagent
