#pragma once

#include <stdexcept>

namespace dio {

// Failure modes a caller may reasonably want to catch and handle get their
// own types.  Plain precondition violations use std::invalid_argument and
// checked integer arithmetic throws std::overflow_error.

// No integer coefficient pair exists for the requested rate triple.
struct UnsolvableTriple : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sampling schedule entry landed on the wrong side of zero for its slot.
struct ScheduleInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A stream or snapshot set was asked for an index it does not hold.
struct IncompleteStream : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A source draw hit the aliasing condition of the third-order estimator.
struct DegenerateSourceSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested co-array lag has no witness triple in the geometry.
struct NotCovered : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A pseudospectrum did not expose enough local maxima for the model order.
struct DegenerateSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dio
