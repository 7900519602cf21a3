#include "doctest.h"

#include <algorithm>

#include "fuzz_support.hpp"
#include "rlstream/oracle.hpp"
#include "rlstream/repair.hpp"

using namespace rlstream;

namespace {

Timestamp ts(int t) { return Timestamp::from_integer(t); }
Atom C(std::string_view name, std::string_view ind = "a") { return Atom::make_concept(name, ind); }
Occurrence occ(std::string_view name, int t) { return {C(name), ts(t)}; }
MomentaryABox box(int t, std::initializer_list<Atom> atoms) { return {ts(t), std::set<Atom>(atoms)}; }

NormalizedTBox normalized(std::string_view text) { return unfold_negative_inclusions(parse_tbox(text), 3); }

using OccSets = std::set<std::set<Occurrence>>;

OccSets occurrence_sets(const std::vector<ConflictSet>& conflicts) {
  OccSets out;
  for (const auto& c : conflicts) out.insert({c.occurrences.begin(), c.occurrences.end()});
  return out;
}

ConflictSet conflict(std::vector<Occurrence> occs) {
  std::sort(occs.begin(), occs.end());
  Timestamp oldest = occs.front().timestamp;
  for (const auto& o : occs) oldest = std::min(oldest, o.timestamp);
  std::vector<Occurrence> min_set;
  for (const auto& o : occs)
    if (o.timestamp == oldest) min_set.push_back(o);
  return {occs, min_set, ConceptExpr::name("Conflict"), Symbol::intern("a")};
}

std::set<Atom> atoms_of(const std::vector<Occurrence>& occs, std::uint32_t mask) {
  std::set<Atom> out;
  for (std::size_t i = 0; i < occs.size(); ++i)
    if (mask >> i & 1) out.insert(occs[i].atom);
  return out;
}

std::set<Atom> atoms_of(const std::set<Occurrence>& occs) {
  std::set<Atom> out;
  for (const auto& o : occs) out.insert(o.atom);
  return out;
}

// Minimal inconsistent occurrence sets by enumeration.
OccSets brute_conflicts(const std::vector<Occurrence>& occs, const TBox& tbox) {
  const std::uint32_t n = static_cast<std::uint32_t>(occs.size());
  std::vector<bool> bad(1u << n, false);
  OccSets out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bad[mask] = !is_consistent(canonical_model(atoms_of(occs, mask), tbox));
    if (!bad[mask]) continue;
    bool minimal = true;
    for (std::uint32_t i = 0; i < n && minimal; ++i)
      if (mask >> i & 1) minimal = !bad[mask & ~(1u << i)];
    if (!minimal) continue;
    std::set<Occurrence> set;
    for (std::uint32_t i = 0; i < n; ++i)
      if (mask >> i & 1) set.insert(occs[i]);
    out.insert(set);
  }
  return out;
}

Stream without(const Stream& stream, const std::set<Occurrence>& removed) {
  Stream out;
  for (const auto& abox : stream) {
    MomentaryABox kept{abox.timestamp, {}};
    for (const auto& a : abox.atoms)
      if (!removed.count({a, abox.timestamp})) kept.atoms.insert(a);
    out.push_back(std::move(kept));
  }
  return out;
}

}  // namespace

TEST_SUITE("repair") {
  TEST_CASE("car pedals") {
    auto n = normalized("GasPedalPressed & BreaksPressed < bot");
    auto gas = Atom::make_concept("GasPedalPressed", "x"), brake = Atom::make_concept("BreaksPressed", "x");
    WindowModel wm({ts(0), ts(2)}, n.base);
    add_abox_with_repair(wm, box(0, {gas}), n);
    add_abox_with_repair(wm, box(1, {gas}), n);
    wm.advance_to({ts(1), ts(3)});
    auto report = add_abox_with_repair(wm, box(3, {brake}), n);
    CHECK(report.removed == std::set<Occurrence>{{gas, ts(1)}});
    CHECK(wm.asserted_occurrences() == std::set<Occurrence>{{brake, ts(3)}});
    CHECK(format_removals(report.removed) == "REMOVED 1 GasPedalPressed(x)\n");
  }

  TEST_CASE("recency prefers the newest oldest-member") {
    auto n = normalized("A & B & C < bot\nB & D < bot");
    WindowModel wm({ts(1), ts(3)}, n.base);
    add_abox_with_repair(wm, box(1, {C("A")}), n);
    add_abox_with_repair(wm, box(2, {C("B")}), n);
    auto report = add_abox_with_repair(wm, box(3, {C("C"), C("D")}), n);
    CHECK(occurrence_sets(report.conflicts) ==
          OccSets{{occ("A", 1), occ("B", 2), occ("C", 3)}, {occ("B", 2), occ("D", 3)}});
    CHECK(report.removed == std::set<Occurrence>{occ("B", 2)});
    CHECK(wm.asserted_occurrences() == std::set<Occurrence>{occ("A", 1), occ("C", 3), occ("D", 3)});
  }

  TEST_CASE("ties at the oldest timestamp remove every oldest member") {
    auto n = normalized("A & C < bot\nB & C < bot");
    WindowModel wm({ts(0), ts(2)}, n.base);
    add_abox_with_repair(wm, box(1, {C("A"), C("B")}), n);
    auto report = add_abox_with_repair(wm, box(2, {C("C")}), n);
    CHECK(report.removed == std::set<Occurrence>{occ("A", 1), occ("B", 1)});
    CHECK(wm.window_interpretation() == standard_interpretation(std::set<Atom>{C("C")}));
  }

  TEST_CASE("two copies of one atom are two conflicts") {
    auto n = normalized("A & B < bot");
    auto conflicts = find_conflicts({occ("A", 1), occ("A", 2)}, box(3, {C("B")}), n);
    CHECK(occurrence_sets(conflicts) ==
          OccSets{{occ("A", 1), occ("B", 3)}, {occ("A", 2), occ("B", 3)}});
    CHECK(resolve_conflicts(conflicts) == std::set<Occurrence>{occ("A", 1), occ("A", 2)});
  }

  TEST_CASE("conflicts through derived atoms and roles") {
    auto n = normalized("A & C < D\nD & F < bot\nsome R . B < bot");
    auto conflicts = find_conflicts({occ("A", 1), occ("C", 2)},
                                    box(3, {C("F"), Atom::make_role("R", "a", "b"), C("B", "b")}), n);
    CHECK(occurrence_sets(conflicts) ==
          OccSets{
              {occ("A", 1), occ("C", 2), occ("F", 3)},
              {{Atom::make_role("R", "a", "b"), ts(3)}, {C("B", "b"), ts(3)}}});
  }

  TEST_CASE("resolution") {
    CHECK(resolve_conflicts({}).empty());
    // Shared oldest pair, removed whole.
    CHECK(resolve_conflicts({conflict({occ("A", 1), occ("B", 1), occ("C", 2)})}) ==
          std::set<Occurrence>{occ("A", 1), occ("B", 1)});
    // A single oldest member dooms it and settles the overlapping pair conflict.
    CHECK(resolve_conflicts({conflict({occ("A", 1), occ("B", 1), occ("C", 2)}), conflict({occ("A", 1), occ("D", 2)})}) ==
          std::set<Occurrence>{occ("A", 1)});
    // Only the smaller of two nested oldest sets is removed.
    CHECK(resolve_conflicts({conflict({occ("A", 1), occ("B", 1), occ("C", 2)}),
                             conflict({occ("A", 1), occ("B", 1), occ("E", 1), occ("F", 3)})}) ==
          std::set<Occurrence>{occ("A", 1), occ("B", 1)});
    // Newer conflicts are settled first.
    CHECK(resolve_conflicts({conflict({occ("A", 1), occ("B", 2), occ("C", 3)}), conflict({occ("B", 2), occ("D", 3)})}) ==
          std::set<Occurrence>{occ("B", 2)});
  }

  TEST_CASE("applying a repair") {
    TBox t = parse_tbox("A & C < D");
    WindowModel wm({ts(0), ts(3)}, t);
    wm.add_abox(box(1, {C("A")}));
    wm.add_abox(box(2, {C("C")}));
    auto stats = apply_repair(wm, {occ("A", 1)});
    CHECK(stats.overdeleted >= 1);
    CHECK_FALSE(wm.entails(C("D")));
    CHECK(wm.asserted_occurrences() == std::set<Occurrence>{occ("C", 2)});
    CHECK(apply_repair(wm, {}).overdeleted == 0);
  }

  TEST_CASE("found conflicts are the minimal inconsistent subsets") {
    int nonempty = 0;
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
      auto c = fuzz::repair_case(3000 + seed);
      auto n = unfold_negative_inclusions(c.tbox, 3);
      if (c.stream.size() < 2) continue;
      gen::Rng rng(seed);
      // A random consistent set of earlier occurrences against the last ABox.
      std::set<Occurrence> current;
      for (std::size_t i = 0; i + 1 < c.stream.size(); ++i)
        for (const auto& a : c.stream[i].atoms) {
          if (rng() % 4 == 0) continue;
          current.insert({a, c.stream[i].timestamp});
          if (!is_consistent(canonical_model(atoms_of(current), c.tbox))) current.erase({a, c.stream[i].timestamp});
        }
      const auto& incoming = c.stream.back();
      std::vector<Occurrence> all(current.begin(), current.end());
      for (const auto& a : incoming.atoms) all.push_back({a, incoming.timestamp});

      auto found = find_conflicts(current, incoming, n);
      auto sets = occurrence_sets(found);
      CHECK(sets.size() == found.size());
      CHECK(sets == brute_conflicts(all, c.tbox));
      for (const auto& f : found) {
        for (const auto& m : f.min_set) CHECK(m.timestamp == f.min_timestamp());
        CHECK(std::includes(f.occurrences.begin(), f.occurrences.end(), f.min_set.begin(), f.min_set.end()));
      }
      nonempty += !found.empty();
    }
    CHECK(nonempty > 50);
  }

  TEST_CASE("repaired windows stay consistent and removals are final") {
    int removals = 0;
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
      auto c = fuzz::repair_case(3500 + seed);
      auto n = unfold_negative_inclusions(c.tbox, 3);
      auto extents = window_extents(c.spec, c.horizon);
      if (extents.empty()) continue;
      auto rules = std::make_shared<const RuleSet>(c.tbox);
      WindowModel wm(extents.front(), rules);
      std::set<Occurrence> gone;
      std::optional<Timestamp> done;
      for (const auto& extent : extents) {
        wm.advance_to(extent);
        for (const auto& abox : c.stream) {
          if (!extent.contains(abox.timestamp) || (done && abox.timestamp <= *done)) continue;
          auto report = add_abox_with_repair(wm, abox, n);
          for (const auto& r : report.removed) {
            bool oldest_of_some = std::any_of(report.conflicts.begin(), report.conflicts.end(), [&](const ConflictSet& cs) {
              return std::find(cs.min_set.begin(), cs.min_set.end(), r) != cs.min_set.end();
            });
            CHECK(oldest_of_some);
          }
          gone.insert(report.removed.begin(), report.removed.end());
          removals += static_cast<int>(report.removed.size());
          done = abox.timestamp;
        }
        auto kept = wm.asserted_occurrences();
        CHECK(is_consistent(canonical_model(atoms_of(kept), c.tbox)));
        for (const auto& g : gone) CHECK(kept.count(g) == 0);
        auto scratch = build_window_model(without(c.stream, gone), extent, rules);
        CHECK(wm.occurrences() == scratch.occurrences());
      }
    }
    CHECK(removals > 100);
  }
}
