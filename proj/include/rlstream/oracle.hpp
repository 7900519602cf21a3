#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rlstream/interpretation.hpp"
#include "rlstream/ontology.hpp"
#include "rlstream/stream.hpp"
#include "rlstream/window_engine.hpp"

namespace rlstream::oracle {

inline constexpr std::size_t kDefaultCap = 16;

// canonical_model of the window ABox with timestamps forgotten.
CanonicalResult naive_window_materialization(std::span<const MomentaryABox> stream, const WindowExtent& extent,
                                             const TBox& tbox);

// Consistency of every subset of a fixed atom universe, answered from the
// minimal inconsistent subsets found by a level-wise scan.
class ConsistencyTable {
 public:
  ConsistencyTable(const TBox& tbox, std::vector<Atom> universe, std::size_t cap = kDefaultCap);

  bool consistent(const std::set<Atom>& atoms) const;
  bool consistent_mask(std::uint32_t mask) const;
  std::uint32_t mask_of(const Atom& atom) const;  // throws std::out_of_range

  const std::vector<std::uint32_t>& minimal_inconsistent() const { return mis_; }

 private:
  std::vector<Atom> universe_;
  std::map<Atom, std::uint32_t> bit_;
  std::vector<std::uint32_t> mis_;
};

// U ⊆_W V: equal, or at the newest timestamp where they differ U's slice is a
// proper subset of V's.
bool window_order_leq(const std::set<Occurrence>& u, const std::set<Occurrence>& v);

// ⊆_W-maximal consistent subsets (consistency under the original TBox).
std::vector<std::set<Occurrence>> maximal_consistent_subsets(const std::set<Occurrence>& occurrences,
                                                             const TBox& tbox, std::size_t cap = kDefaultCap);
std::vector<std::set<Occurrence>> maximal_consistent_subsets(const std::set<Occurrence>& occurrences,
                                                             const ConsistencyTable& table,
                                                             std::size_t cap = kDefaultCap);

// Timestamp by timestamp, keep the intersection of the ⊆_W-maximal
// consistent subsets of what was kept so far plus the new momentary ABox.
std::set<Occurrence> definitional_window_repair(std::span<const MomentaryABox> stream, const WindowExtent& extent,
                                                const TBox& tbox, std::size_t cap = kDefaultCap);
std::set<Occurrence> definitional_window_repair(std::span<const MomentaryABox> stream, const WindowExtent& extent,
                                                const ConsistencyTable& table, std::size_t cap = kDefaultCap);

// Maximal consistent subsets under the preference order induced by `levels`
// (later levels are preferred).
std::vector<std::set<Atom>> preferred_repairs(std::span<const std::set<Atom>> levels, const TBox& tbox,
                                              std::size_t cap = kDefaultCap);

struct OracleVerdict {
  WindowExtent subject;
  Interpretation expected_model;
  Interpretation actual_model;
  std::set<Occurrence> expected_kept;
  std::set<Occurrence> actual_kept;
  bool match = true;
  std::vector<std::string> diff;
};

// Engine window interpretation vs. from-scratch materialization of the
// engine's surviving assertions, and those assertions vs. the definitional
// window repair.
OracleVerdict cross_check(const WindowModel& wm, std::span<const MomentaryABox> stream, const WindowExtent& extent,
                          const TBox& tbox, std::size_t cap = kDefaultCap);

std::string render(const OracleVerdict& verdict);

}  // namespace rlstream::oracle
