#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <unordered_set>
#include <vector>

#include "rlstream/fact_index.hpp"
#include "rlstream/interpretation.hpp"
#include "rlstream/ontology.hpp"
#include "rlstream/stream.hpp"

namespace rlstream {

// Compiled form of a TBox for the window engine.
class RuleSet {
 public:
  struct RoleRule {
    RoleExpr sub;
    Symbol sup;
  };

  explicit RuleSet(TBox tbox);

  const TBox& tbox() const { return tbox_; }
  std::span<const CompiledBody> concept_bodies() const { return concept_bodies_; }
  std::span<const Symbol> concept_heads() const { return concept_heads_; }
  std::span<const RoleRule> role_rules() const { return role_rules_; }
  std::span<const CompiledBody> negative_bodies() const { return negative_bodies_; }
  std::span<const NegativeInclusion> negatives() const { return negatives_; }

  // Rule ids in derivation records: concept rules first, then role rules.
  std::size_t rule_count() const { return concept_bodies_.size() + role_rules_.size(); }
  std::string describe_rule(std::size_t id) const;

 private:
  TBox tbox_;
  std::vector<CompiledBody> concept_bodies_;
  std::vector<Symbol> concept_heads_;
  std::vector<RoleRule> role_rules_;
  std::vector<CompiledBody> negative_bodies_;
  std::vector<NegativeInclusion> negatives_;
};

struct DerivationRecord {
  std::uint32_t rule;
  std::vector<Occurrence> body;  // sorted, duplicate-free
  Occurrence head;

  friend bool operator==(const DerivationRecord&, const DerivationRecord&) = default;
};

struct DerivationRecordHash {
  std::size_t operator()(const DerivationRecord& r) const noexcept;
};

struct AttributedAtom {
  enum class Origin { Asserted, Derived };

  Atom atom;
  Origin origin;
  std::set<Timestamp> homes;
  std::set<Timestamp> asserted_at;  // subset of homes
};

struct RetractStats {
  std::size_t overdeleted = 0;
  std::size_t rederived = 0;
  bool rebuilt = false;  // derivation log had overflowed
};

inline constexpr std::size_t kDefaultLogCap = 100000;

// Canonical window model: per-timestamp interpretations in which every
// derived atom sits at the oldest timestamp of some instantiation that
// produced it, so expiring old timestamps needs no reasoning.
class WindowModel {
 public:
  WindowModel(WindowExtent extent, std::shared_ptr<const RuleSet> rules,
              std::size_t log_cap = kDefaultLogCap);
  WindowModel(WindowExtent extent, const TBox& tbox, std::size_t log_cap = kDefaultLogCap);

  const WindowExtent& extent() const { return extent_; }
  const RuleSet& rules() const { return *rules_; }
  std::shared_ptr<const RuleSet> shared_rules() const { return rules_; }

  // Appends `abox` as the newest entry and saturates. `precomputed`, when
  // given, must be the canonical model of abox.atoms under the model's TBox.
  // Throws StaleTimestamp, std::invalid_argument (outside the extent) and
  // UnexpectedInconsistency (a negative inclusion fired; the model is then
  // left partially saturated).
  void add_abox(const MomentaryABox& abox, const CanonicalResult* precomputed = nullptr);

  // Forgets entries older than `cutoff` together with everything homed there.
  void drop_before(Timestamp cutoff);

  // Moves to a later extent: drops what falls off the front. Throws
  // std::invalid_argument when either bound would move backwards.
  void advance_to(const WindowExtent& next);

  // Withdraws asserted occurrences and their consequences (delete and
  // rederive over the derivation log).
  RetractStats retract(const std::set<Occurrence>& removed);

  Interpretation window_interpretation() const;
  bool entails(const Atom& atom) const;

  // Entry timestamps with their interpretations, ascending.
  std::vector<std::pair<Timestamp, Interpretation>> entries() const;
  const std::set<Timestamp>& entry_timestamps() const { return entry_times_; }

  std::vector<AttributedAtom> attributed_atoms() const;  // AtomTextOrder
  std::set<Occurrence> asserted_occurrences() const;
  std::set<Occurrence> occurrences() const;

  const std::unordered_set<DerivationRecord, DerivationRecordHash>& derivation_log() const {
    return log_;
  }
  bool log_overflowed() const { return log_overflow_; }

  // Latest timestamp whose momentary ABox has been considered.
  std::optional<Timestamp> processed_through() const { return processed_through_; }
  void mark_processed_through(Timestamp t);

  const FactIndex& facts() const { return facts_; }

  // Test hook: plants an occurrence without reasoning.
  void inject_for_testing(const Occurrence& occ, std::uint8_t bits) { facts_.insert(occ, bits); }

 private:
  void saturate(std::vector<Occurrence> delta);
  void check_negatives(std::span<const Occurrence> delta) const;
  void record(std::uint32_t rule, std::vector<Occurrence> body, const Occurrence& head);
  void rebuild_without(const std::set<Occurrence>& removed);

  WindowExtent extent_;
  std::shared_ptr<const RuleSet> rules_;
  std::size_t log_cap_;
  FactIndex facts_;
  std::set<Timestamp> entry_times_;
  std::unordered_set<DerivationRecord, DerivationRecordHash> log_;
  bool log_overflow_ = false;
  std::optional<Timestamp> processed_through_;
};

WindowModel init_window_model(const WindowExtent& extent, const TBox& tbox);

// Returns the stream's assertions at one timestamp that should not enter the
// window (repair removals); the hook also performs the addition.
using RepairHook = std::function<std::set<Occurrence>(WindowModel&, const MomentaryABox&)>;

struct SlideReport {
  WindowExtent extent;
  std::size_t dropped_entries = 0;
  std::size_t added_aboxes = 0;
  std::size_t atoms_before = 0;  // window interpretation sizes
  std::size_t atoms_after = 0;
  std::set<Occurrence> removed;
};

// Drops what left the window, then adds every momentary ABox of `stream` in
// (previously processed timestamp, next.end] that lies in `next`. Without a
// hook the canonical models of the new ABoxes are computed in parallel first.
SlideReport slide(WindowModel& wm, std::span<const MomentaryABox> stream, const WindowExtent& next,
                  const RepairHook& hook = {});

// From-scratch canonical window model of one extent.
WindowModel build_window_model(std::span<const MomentaryABox> stream, const WindowExtent& extent,
                               std::shared_ptr<const RuleSet> rules);

}  // namespace rlstream
