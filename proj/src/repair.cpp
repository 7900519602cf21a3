#include "rlstream/repair.hpp"

#include <algorithm>
#include <map>

namespace rlstream {

namespace {

bool is_subset(const std::vector<Occurrence>& small, const std::vector<Occurrence>& big) {
  return small.size() <= big.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool meets(const std::vector<Occurrence>& sorted, const std::set<Occurrence>& set) {
  return std::any_of(sorted.begin(), sorted.end(), [&](const Occurrence& o) { return set.count(o) > 0; });
}

}  // namespace

std::string to_string(const ConflictSet& conflict) {
  std::vector<Occurrence> occs = conflict.occurrences;
  std::sort(occs.begin(), occs.end(), OccurrenceTextOrder{});
  std::string out = "{";
  for (std::size_t i = 0; i < occs.size(); ++i) out += (i ? ", " : "") + to_string(occs[i]);
  return out + "} violates " + to_string(conflict.violated) + " at " + conflict.binding.name();
}

std::vector<ConflictSet> find_conflicts(const std::set<Occurrence>& current, const MomentaryABox& incoming,
                                        const NormalizedTBox& ntbox) {
  FactIndex index;
  std::vector<Occurrence> all(current.begin(), current.end());
  for (const auto& atom : incoming.atoms) all.push_back({atom, incoming.timestamp});
  for (const auto& occ : all) index.insert(occ, kAsserted);

  std::vector<CompiledBody> bodies;
  for (const auto& b : ntbox.flattened_negatives) bodies.emplace_back(b);
  auto roots = roots_touching(bodies, all, index);

  std::map<std::vector<Occurrence>, std::pair<std::size_t, Symbol>> found;
  for (std::size_t i = 0; i < bodies.size(); ++i)
    for (Symbol root : roots[i])
      bodies[i].match(index, root, [&](std::span<const Occurrence> inst) {
        found.try_emplace(normalize_support(inst), i, root);
      });

  std::vector<const std::vector<Occurrence>*> by_size;
  for (const auto& [occs, _] : found) by_size.push_back(&occs);
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const auto* a, const auto* b) { return a->size() < b->size(); });

  std::set<const std::vector<Occurrence>*> minimal;
  std::vector<const std::vector<Occurrence>*> kept;
  for (const auto* s : by_size) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](const auto* k) {
      return k->size() < s->size() && is_subset(*k, *s);
    });
    if (!dominated) kept.push_back(s);
  }
  minimal.insert(kept.begin(), kept.end());

  std::vector<ConflictSet> out;
  for (const auto& [occs, where] : found) {
    if (!minimal.count(&occs)) continue;
    ConflictSet cs{occs, {}, bodies[where.first].expr(), where.second};
    Timestamp oldest = min_timestamp(occs);
    for (const auto& o : occs)
      if (o.timestamp == oldest) cs.min_set.push_back(o);
    out.push_back(std::move(cs));
  }
  return out;
}

std::set<Occurrence> resolve_conflicts(std::vector<ConflictSet> conflicts) {
  std::set<Occurrence> doomed;
  std::vector<std::vector<Occurrence>> n;

  while (!conflicts.empty()) {
    Timestamp newest = conflicts.front().min_timestamp();
    for (const auto& c : conflicts) newest = std::max(newest, c.min_timestamp());

    std::vector<ConflictSet> recent;
    for (const auto& c : conflicts)
      if (c.min_timestamp() == newest) recent.push_back(c);

    for (const auto& c : recent)
      if (c.min_set.size() == 1) doomed.insert(c.min_set.front());
    std::erase_if(conflicts, [&](const ConflictSet& c) { return meets(c.occurrences, doomed); });
    std::erase_if(recent, [&](const ConflictSet& c) { return meets(c.occurrences, doomed); });

    for (const auto& c : recent) {
      bool minimal = std::none_of(recent.begin(), recent.end(), [&](const ConflictSet& other) {
        return other.min_set.size() < c.min_set.size() && is_subset(other.min_set, c.min_set);
      });
      if (minimal) n.push_back(c.min_set);
    }
    std::erase_if(conflicts, [&](const ConflictSet& c) {
      return std::any_of(n.begin(), n.end(), [&](const auto& m) { return is_subset(m, c.occurrences); });
    });
  }

  for (const auto& m : n) doomed.insert(m.begin(), m.end());
  return doomed;
}

RetractStats apply_repair(WindowModel& wm, const std::set<Occurrence>& removed) { return wm.retract(removed); }

RepairReport add_abox_with_repair(WindowModel& wm, const MomentaryABox& abox, const NormalizedTBox& ntbox) {
  RepairReport report;
  const auto current = wm.asserted_occurrences();
  report.conflicts = find_conflicts(current, abox, ntbox);
  report.removed = resolve_conflicts(report.conflicts);

  std::set<Occurrence> existing;
  MomentaryABox kept{abox.timestamp, {}};
  for (const auto& o : report.removed)
    if (current.count(o)) existing.insert(o);
  for (const auto& atom : abox.atoms)
    if (!report.removed.count({atom, abox.timestamp})) kept.atoms.insert(atom);

  report.maintenance = apply_repair(wm, existing);
  wm.add_abox(kept);
  return report;
}

std::string format_removals(const std::set<Occurrence>& removed) {
  std::vector<Occurrence> sorted(removed.begin(), removed.end());
  std::sort(sorted.begin(), sorted.end(), OccurrenceTextOrder{});
  std::string out;
  for (const auto& o : sorted) out += "REMOVED " + to_string(o.timestamp) + " " + to_string(o.atom) + "\n";
  return out;
}

RepairHook make_repair_hook(std::shared_ptr<const NormalizedTBox> ntbox) {
  return [ntbox](WindowModel& wm, const MomentaryABox& abox) {
    return add_abox_with_repair(wm, abox, *ntbox).removed;
  };
}

}  // namespace rlstream
