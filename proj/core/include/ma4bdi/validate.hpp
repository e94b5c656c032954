#pragma once
// Envelope validation: range checks on payload fields and consistency
// between the payload variant and the declared source kind. Idempotent.

#include "ma4bdi/types.hpp"

namespace ma4bdi {

// Returns the observation unchanged iff all type invariants hold; otherwise
// throws malformed-timestamp, payload-kind-mismatch or out-of-range-field
// naming the offending field.
Observation validate_observation(Observation obs);

}  // namespace ma4bdi
