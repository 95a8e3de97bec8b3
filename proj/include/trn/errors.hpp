#ifndef TRN_ERRORS_HPP
#define TRN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trn {

// Base class for all recoverable errors raised by the pipeline. The CLI maps
// UsageError to exit code 2 and everything else to exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed source file (TORQUE / TB-Dense / normalized schema).
struct IngestionError : Error {
  using Error::Error;
};

// Structurally valid input that violates a documented invariant
// (answer index out of bounds, group members on different passages, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Word/token or word/parse segmentation could not be reconciled.
struct AlignmentError : Error {
  using Error::Error;
};

// Sequence does not fit the encoder window; never truncated silently.
struct TruncationError : Error {
  using Error::Error;
};

// Dependency parsing or joint-graph construction failure.
struct GraphError : Error {
  using Error::Error;
};

// Checkpoint file missing, corrupt, or incompatible with this build/config.
struct CheckpointError : Error {
  using Error::Error;
};

// Metric evaluation over misaligned gold/prediction files.
struct EvaluationError : Error {
  using Error::Error;
};

// Bad command line or config file contents.
struct UsageError : Error {
  using Error::Error;
};

// Training diverged (non-finite loss) or hit an internal inconsistency.
struct TrainingError : Error {
  using Error::Error;
};

}  // namespace trn

#endif
