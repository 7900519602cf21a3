#include "rlstream/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "rlstream/errors.hpp"

namespace rlstream::oracle {

namespace {

std::set<Atom> forget_timestamps(const std::set<Occurrence>& occs) {
  std::set<Atom> out;
  for (const auto& o : occs) out.insert(o.atom);
  return out;
}

void require_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap || n > 30)
    throw CapExceeded(std::string(what) + ": " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap));
}

}  // namespace

CanonicalResult naive_window_materialization(std::span<const MomentaryABox> stream, const WindowExtent& extent,
                                             const TBox& tbox) {
  return canonical_model(forget_timestamps(window_abox(stream, extent)), tbox);
}

ConsistencyTable::ConsistencyTable(const TBox& tbox, std::vector<Atom> universe, std::size_t cap)
    : universe_(std::move(universe)) {
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
  require_cap(universe_.size(), cap, "atom universe");
  for (std::size_t i = 0; i < universe_.size(); ++i) bit_[universe_[i]] = std::uint32_t{1} << i;

  const std::uint32_t n = static_cast<std::uint32_t>(universe_.size());
  auto atoms_of = [&](std::uint32_t mask) {
    std::set<Atom> out;
    for (std::uint32_t i = 0; i < n; ++i)
      if (mask >> i & 1u) out.insert(universe_[i]);
    return out;
  };
  const std::uint32_t full = n == 0 ? 0 : (n == 32 ? ~0u : (1u << n) - 1);
  if (is_consistent(canonical_model(atoms_of(full), tbox))) return;

  std::vector<std::uint32_t> order(std::size_t{1} << n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  for (std::uint32_t mask : order) {
    if (!consistent_mask(mask)) continue;
    if (!is_consistent(canonical_model(atoms_of(mask), tbox))) mis_.push_back(mask);
  }
}

bool ConsistencyTable::consistent_mask(std::uint32_t mask) const {
  return std::none_of(mis_.begin(), mis_.end(), [&](std::uint32_t m) { return (m & mask) == m; });
}

std::uint32_t ConsistencyTable::mask_of(const Atom& atom) const {
  auto it = bit_.find(atom);
  if (it == bit_.end()) throw std::out_of_range("atom " + to_string(atom) + " outside the consistency table");
  return it->second;
}

bool ConsistencyTable::consistent(const std::set<Atom>& atoms) const {
  std::uint32_t mask = 0;
  for (const auto& a : atoms) mask |= mask_of(a);
  return consistent_mask(mask);
}

bool window_order_leq(const std::set<Occurrence>& u, const std::set<Occurrence>& v) {
  std::set<Timestamp> times;
  for (const auto& o : u) times.insert(o.timestamp);
  for (const auto& o : v) times.insert(o.timestamp);
  for (auto t = times.rbegin(); t != times.rend(); ++t) {
    std::set<Atom> us, vs;
    for (const auto& o : u)
      if (o.timestamp == *t) us.insert(o.atom);
    for (const auto& o : v)
      if (o.timestamp == *t) vs.insert(o.atom);
    if (us == vs) continue;
    return us.size() < vs.size() && std::includes(vs.begin(), vs.end(), us.begin(), us.end());
  }
  return true;
}

std::vector<std::set<Occurrence>> maximal_consistent_subsets(const std::set<Occurrence>& occurrences,
                                                             const ConsistencyTable& table, std::size_t cap) {
  require_cap(occurrences.size(), cap, "occurrence set");
  std::vector<Occurrence> occs(occurrences.begin(), occurrences.end());
  const std::size_t n = occs.size();
  std::vector<std::uint32_t> atom_bit(n);
  for (std::size_t i = 0; i < n; ++i) atom_bit[i] = table.mask_of(occs[i].atom);

  const std::uint32_t count = std::uint32_t{1} << n;
  std::vector<char> ok(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    std::uint32_t atoms = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) atoms |= atom_bit[i];
    ok[mask] = table.consistent_mask(atoms);
  }

  // ⊆_W-maximal sets are ⊆-maximal, so filter those first.
  std::vector<std::set<Occurrence>> candidates;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (!ok[mask]) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < n && maximal; ++i)
      if (!(mask >> i & 1u) && ok[mask | (1u << i)]) maximal = false;
    if (!maximal) continue;
    std::set<Occurrence> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) s.insert(occs[i]);
    candidates.push_back(std::move(s));
  }

  std::vector<std::set<Occurrence>> out;
  for (const auto& u : candidates) {
    bool dominated = std::any_of(candidates.begin(), candidates.end(),
                                 [&](const auto& v) { return v != u && window_order_leq(u, v); });
    if (!dominated) out.push_back(u);
  }
  return out;
}

std::vector<std::set<Occurrence>> maximal_consistent_subsets(const std::set<Occurrence>& occurrences,
                                                             const TBox& tbox, std::size_t cap) {
  require_cap(occurrences.size(), cap, "occurrence set");
  auto atoms = forget_timestamps(occurrences);
  ConsistencyTable table(tbox, {atoms.begin(), atoms.end()}, cap);
  return maximal_consistent_subsets(occurrences, table, cap);
}

std::set<Occurrence> definitional_window_repair(std::span<const MomentaryABox> stream, const WindowExtent& extent,
                                                const ConsistencyTable& table, std::size_t cap) {
  std::set<Occurrence> kept;
  for (const auto& abox : window_slice(stream, extent)) {
    std::set<Occurrence> candidate = kept;
    for (const auto& atom : abox.atoms) candidate.insert({atom, abox.timestamp});
    auto maximal = maximal_consistent_subsets(candidate, table, cap);
    kept = maximal.front();
    for (std::size_t i = 1; i < maximal.size(); ++i) {
      std::set<Occurrence> both;
      std::set_intersection(kept.begin(), kept.end(), maximal[i].begin(), maximal[i].end(),
                            std::inserter(both, both.end()));
      kept = std::move(both);
    }
  }
  return kept;
}

std::set<Occurrence> definitional_window_repair(std::span<const MomentaryABox> stream, const WindowExtent& extent,
                                                const TBox& tbox, std::size_t cap) {
  auto atoms = forget_timestamps(window_abox(stream, extent));
  ConsistencyTable table(tbox, {atoms.begin(), atoms.end()}, cap);
  return definitional_window_repair(stream, extent, table, cap);
}

std::vector<std::set<Atom>> preferred_repairs(std::span<const std::set<Atom>> levels, const TBox& tbox,
                                              std::size_t cap) {
  std::set<Occurrence> occs;
  std::set<Atom> seen;
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (const auto& atom : levels[i]) {
      if (!seen.insert(atom).second)
        throw std::invalid_argument("preference levels overlap at " + to_string(atom));
      occs.insert({atom, Timestamp::from_integer(static_cast<std::int64_t>(i) + 1)});
    }
  std::vector<std::set<Atom>> out;
  for (const auto& s : maximal_consistent_subsets(occs, tbox, cap)) out.push_back(forget_timestamps(s));
  std::sort(out.begin(), out.end());
  return out;
}

OracleVerdict cross_check(const WindowModel& wm, std::span<const MomentaryABox> stream, const WindowExtent& extent,
                          const TBox& tbox, std::size_t cap) {
  OracleVerdict v;
  v.subject = extent;
  v.actual_model = wm.window_interpretation();
  v.actual_kept = wm.asserted_occurrences();
  v.expected_kept = definitional_window_repair(stream, extent, tbox, cap);

  auto expected = canonical_model(forget_timestamps(v.actual_kept), tbox);
  if (const auto* bad = std::get_if<Inconsistent>(&expected)) {
    v.diff.push_back("model: surviving assertions are inconsistent (" + describe(*bad) + ")");
  } else {
    v.expected_model = std::get<Interpretation>(expected);
    auto want = v.expected_model.atoms();
    auto have = v.actual_model.atoms();
    for (const auto& a : want)
      if (!v.actual_model.contains(a)) v.diff.push_back("model: missing " + to_string(a));
    for (const auto& a : have)
      if (!v.expected_model.contains(a)) v.diff.push_back("model: extra " + to_string(a));
  }

  std::vector<Occurrence> missing, extra;
  std::set_difference(v.expected_kept.begin(), v.expected_kept.end(), v.actual_kept.begin(), v.actual_kept.end(),
                      std::back_inserter(missing));
  std::set_difference(v.actual_kept.begin(), v.actual_kept.end(), v.expected_kept.begin(), v.expected_kept.end(),
                      std::back_inserter(extra));
  std::sort(missing.begin(), missing.end(), OccurrenceTextOrder{});
  std::sort(extra.begin(), extra.end(), OccurrenceTextOrder{});
  for (const auto& o : missing) v.diff.push_back("kept: missing " + to_string(o));
  for (const auto& o : extra) v.diff.push_back("kept: extra " + to_string(o));

  v.match = v.diff.empty();
  return v;
}

std::string render(const OracleVerdict& verdict) {
  std::string out = "ORACLE " + to_string(verdict.subject) + (verdict.match ? " match" : " MISMATCH") + "\n";
  for (const auto& line : verdict.diff) out += "  " + line + "\n";
  return out;
}

}  // namespace rlstream::oracle
