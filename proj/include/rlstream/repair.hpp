#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rlstream/ontology.hpp"
#include "rlstream/stream.hpp"
#include "rlstream/window_engine.hpp"

namespace rlstream {

// A minimally inconsistent set of occurrences together with the flattened
// negative body it satisfies and the individual that body was matched at.
struct ConflictSet {
  std::vector<Occurrence> occurrences;  // sorted
  std::vector<Occurrence> min_set;      // the oldest ones, sorted
  ConceptExpr violated;
  Symbol binding;

  Timestamp min_timestamp() const { return min_set.front().timestamp; }
};

std::string to_string(const ConflictSet& conflict);

// Every minimal occurrence set over current ∪ incoming whose standard
// interpretation satisfies a flattened negative body. Two copies of one atom
// at different timestamps give different conflict sets.
std::vector<ConflictSet> find_conflicts(const std::set<Occurrence>& current, const MomentaryABox& incoming,
                                        const NormalizedTBox& ntbox);

// Newest conflicts first: oldest members of single-oldest conflicts are
// removed outright; among the rest, the ⊆-minimal oldest-member sets are
// removed whole. Returns everything to delete.
std::set<Occurrence> resolve_conflicts(std::vector<ConflictSet> conflicts);

RetractStats apply_repair(WindowModel& wm, const std::set<Occurrence>& removed);

struct RepairReport {
  std::set<Occurrence> removed;
  std::vector<ConflictSet> conflicts;
  RetractStats maintenance;
};

// Repairs against `abox`, withdraws the losers already in the window, and
// adds what is left of `abox` (possibly nothing, which still leaves an entry).
RepairReport add_abox_with_repair(WindowModel& wm, const MomentaryABox& abox, const NormalizedTBox& ntbox);

// `REMOVED <timestamp> <atom>` lines, sorted by timestamp then atom text.
std::string format_removals(const std::set<Occurrence>& removed);

RepairHook make_repair_hook(std::shared_ptr<const NormalizedTBox> ntbox);

}  // namespace rlstream
