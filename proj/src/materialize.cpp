#include "rlstream/materialize.hpp"

namespace rlstream {

std::vector<CanonicalResult> materialize_batch(std::span<const MomentaryABox> aboxes, const TBox& tbox) {
  std::vector<CanonicalResult> out(aboxes.size());
  const auto n = static_cast<long>(aboxes.size());
#pragma omp parallel for schedule(dynamic) if (n > 1)
  for (long i = 0; i < n; ++i) out[i] = canonical_model(aboxes[i].atoms, tbox);
  return out;
}

std::vector<CanonicalResult> materialize_batch_serial(std::span<const MomentaryABox> aboxes,
                                                      const TBox& tbox) {
  std::vector<CanonicalResult> out;
  out.reserve(aboxes.size());
  for (const auto& abox : aboxes) out.push_back(canonical_model(abox.atoms, tbox));
  return out;
}

}  // namespace rlstream
