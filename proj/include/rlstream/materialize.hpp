#pragma once

#include <span>
#include <vector>

#include "rlstream/interpretation.hpp"
#include "rlstream/ontology.hpp"
#include "rlstream/stream.hpp"

namespace rlstream {

// Canonical model of each momentary ABox on its own, one result per input.
// The OpenMP version distributes ABoxes across threads; the serial one is
// the reference it is tested against.
std::vector<CanonicalResult> materialize_batch(std::span<const MomentaryABox> aboxes, const TBox& tbox);
std::vector<CanonicalResult> materialize_batch_serial(std::span<const MomentaryABox> aboxes,
                                                      const TBox& tbox);

}  // namespace rlstream
