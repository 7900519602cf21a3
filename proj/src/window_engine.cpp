#include "rlstream/window_engine.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "rlstream/errors.hpp"
#include "rlstream/materialize.hpp"

namespace rlstream {

RuleSet::RuleSet(TBox tbox) : tbox_(std::move(tbox)) {
  for (const auto& ci : tbox_.concept_inclusions()) {
    concept_bodies_.emplace_back(ci.body);
    concept_heads_.push_back(ci.head);
  }
  for (const auto& ri : tbox_.role_inclusions()) role_rules_.push_back({ri.sub, ri.sup.name});
  for (const auto& ni : tbox_.negative_inclusions()) {
    negative_bodies_.emplace_back(ni.body);
    negatives_.push_back(ni);
  }
}

std::string RuleSet::describe_rule(std::size_t id) const {
  if (id < concept_bodies_.size())
    return to_string(concept_bodies_[id].expr()) + " < " + concept_heads_[id].name();
  const auto& rr = role_rules_.at(id - concept_bodies_.size());
  return to_string(rr.sub) + " < " + rr.sup.name();
}

std::size_t DerivationRecordHash::operator()(const DerivationRecord& r) const noexcept {
  std::hash<Occurrence> h;
  std::size_t seed = r.rule;
  auto mix = [&](std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2); };
  for (const auto& o : r.body) mix(h(o));
  mix(h(r.head));
  return seed;
}

WindowModel::WindowModel(WindowExtent extent, std::shared_ptr<const RuleSet> rules, std::size_t log_cap)
    : extent_(extent), rules_(std::move(rules)), log_cap_(log_cap) {}

WindowModel::WindowModel(WindowExtent extent, const TBox& tbox, std::size_t log_cap)
    : WindowModel(extent, std::make_shared<const RuleSet>(tbox), log_cap) {}

WindowModel init_window_model(const WindowExtent& extent, const TBox& tbox) {
  return WindowModel(extent, tbox);
}

void WindowModel::mark_processed_through(Timestamp t) {
  if (!processed_through_ || *processed_through_ < t) processed_through_ = t;
}

void WindowModel::add_abox(const MomentaryABox& abox, const CanonicalResult* precomputed) {
  const Timestamp t = abox.timestamp;
  if (!entry_times_.empty() && t <= *entry_times_.rbegin()) {
    throw StaleTimestamp("momentary ABox at " + to_string(t) + " is not newer than the entry at " +
                         to_string(*entry_times_.rbegin()));
  }
  if (!extent_.contains(t))
    throw std::invalid_argument("timestamp " + to_string(t) + " lies outside " + to_string(extent_));

  CanonicalResult local;
  if (!precomputed) {
    local = canonical_model(abox.atoms, rules_->tbox());
    precomputed = &local;
  }
  if (const auto* bad = std::get_if<Inconsistent>(precomputed))
    throw UnexpectedInconsistency("momentary ABox at " + to_string(t) + ": " + describe(*bad));

  entry_times_.insert(t);
  mark_processed_through(t);
  std::vector<Occurrence> delta;
  for (const auto& atom : std::get<Interpretation>(*precomputed).atoms()) {
    Occurrence occ{atom, t};
    facts_.insert(occ, abox.atoms.count(atom) ? kAsserted : kDerived);
    delta.push_back(occ);
  }
  saturate(std::move(delta));
}

void WindowModel::record(std::uint32_t rule, std::vector<Occurrence> body, const Occurrence& head) {
  if (log_overflow_) return;
  DerivationRecord rec{rule, std::move(body), head};
  if (log_.size() >= log_cap_ && !log_.count(rec)) {
    log_overflow_ = true;
    return;
  }
  log_.insert(std::move(rec));
}

void WindowModel::check_negatives(std::span<const Occurrence> delta) const {
  const auto bodies = rules_->negative_bodies();
  if (bodies.empty()) return;
  auto roots = roots_touching(bodies, delta, facts_);
  struct Hit {};
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    for (Symbol root : roots[i]) {
      try {
        bodies[i].match(facts_, root, [](std::span<const Occurrence>) { throw Hit{}; });
      } catch (const Hit&) {
        throw UnexpectedInconsistency(to_string(Axiom{rules_->negatives()[i]}) + " fires for " +
                                      root.name());
      }
    }
  }
}

void WindowModel::saturate(std::vector<Occurrence> delta) {
  const auto bodies = rules_->concept_bodies();
  const auto heads = rules_->concept_heads();
  const auto role_rules = rules_->role_rules();

  while (!delta.empty()) {
    check_negatives(delta);

    std::unordered_set<Occurrence> in_delta(delta.begin(), delta.end());
    std::vector<Occurrence> heads_found;

    auto roots = roots_touching(bodies, delta, facts_);
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      for (Symbol root : roots[i]) {
        bodies[i].match(facts_, root, [&](std::span<const Occurrence> inst) {
          if (std::none_of(inst.begin(), inst.end(), [&](const Occurrence& o) { return in_delta.count(o) > 0; }))
            return;
          auto support = normalize_support(inst);
          Occurrence head{Atom::make_concept(heads[i], root), min_timestamp(support)};
          record(static_cast<std::uint32_t>(i), std::move(support), head);
          heads_found.push_back(head);
        });
      }
    }
    for (const auto& fact : delta) {
      if (!fact.atom.is_role()) continue;
      for (std::size_t j = 0; j < role_rules.size(); ++j) {
        const auto& rr = role_rules[j];
        if (rr.sub.name != fact.atom.predicate) continue;
        Atom head_atom = rr.sub.inverse ? Atom::make_role(rr.sup, fact.atom.object, fact.atom.subject)
                                        : Atom::make_role(rr.sup, fact.atom.subject, fact.atom.object);
        Occurrence head{head_atom, fact.timestamp};
        record(static_cast<std::uint32_t>(bodies.size() + j), {fact}, head);
        heads_found.push_back(head);
      }
    }

    std::vector<Occurrence> next;
    for (const auto& h : heads_found)
      if (facts_.insert(h, kDerived)) next.push_back(h);
    delta = std::move(next);
  }
}

void WindowModel::drop_before(Timestamp cutoff) {
  facts_.erase_before(cutoff);
  entry_times_.erase(entry_times_.begin(), entry_times_.lower_bound(cutoff));
  std::erase_if(log_, [&](const DerivationRecord& r) { return r.head.timestamp < cutoff; });
}

void WindowModel::advance_to(const WindowExtent& next) {
  if (next.start < extent_.start || next.end < extent_.end) {
    throw std::invalid_argument("cannot move window " + to_string(extent_) + " back to " +
                                to_string(next));
  }
  extent_ = next;
  drop_before(next.start);
}

RetractStats WindowModel::retract(const std::set<Occurrence>& removed) {
  RetractStats stats;
  if (removed.empty()) return stats;
  if (log_overflow_) {
    rebuild_without(removed);
    stats.rebuilt = true;
    return stats;
  }

  std::unordered_map<Occurrence, std::vector<const DerivationRecord*>> by_body, by_head;
  for (const auto& rec : log_) {
    for (const auto& b : rec.body) by_body[b].push_back(&rec);
    by_head[rec.head].push_back(&rec);
  }

  // Overdelete: anything with a recorded derivation through a marked fact.
  std::unordered_set<Occurrence> marked;
  std::vector<Occurrence> work;
  for (const auto& occ : removed) {
    if (!facts_.contains(occ)) continue;
    facts_.set_bits(occ, facts_.bits(occ) & ~kAsserted);
    if (marked.insert(occ).second) work.push_back(occ);
  }
  while (!work.empty()) {
    Occurrence o = work.back();
    work.pop_back();
    if (auto it = by_body.find(o); it != by_body.end())
      for (const auto* rec : it->second)
        if (marked.insert(rec->head).second) work.push_back(rec->head);
  }

  // Rederive: still asserted, or some record's body is entirely alive.
  std::unordered_set<Occurrence> restored;
  auto alive = [&](const Occurrence& o) { return !marked.count(o) || restored.count(o); };
  auto supported = [&](const Occurrence& m) {
    if (facts_.bits(m) & kAsserted) return true;
    auto it = by_head.find(m);
    if (it == by_head.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [&](const DerivationRecord* rec) {
      return std::all_of(rec->body.begin(), rec->body.end(), alive);
    });
  };
  for (const auto& m : marked)
    if (!restored.count(m) && supported(m)) {
      restored.insert(m);
      work.push_back(m);
    }
  while (!work.empty()) {
    Occurrence o = work.back();
    work.pop_back();
    auto it = by_body.find(o);
    if (it == by_body.end()) continue;
    for (const auto* rec : it->second) {
      const auto& h = rec->head;
      if (!marked.count(h) || restored.count(h)) continue;
      if (std::all_of(rec->body.begin(), rec->body.end(), alive)) {
        restored.insert(h);
        work.push_back(h);
      }
    }
  }

  std::unordered_set<Occurrence> dead;
  for (const auto& m : marked)
    if (!restored.count(m)) {
      facts_.erase(m);
      dead.insert(m);
    }
  std::erase_if(log_, [&](const DerivationRecord& r) {
    return dead.count(r.head) ||
           std::any_of(r.body.begin(), r.body.end(), [&](const Occurrence& b) { return dead.count(b) > 0; });
  });

  stats.overdeleted = marked.size();
  stats.rederived = restored.size();
  return stats;
}

void WindowModel::rebuild_without(const std::set<Occurrence>& removed) {
  std::map<Timestamp, MomentaryABox> by_time;
  for (Timestamp t : entry_times_) by_time[t].timestamp = t;
  for (const auto& occ : asserted_occurrences())
    if (!removed.count(occ)) by_time[occ.timestamp].atoms.insert(occ.atom);

  facts_ = FactIndex();
  log_.clear();
  log_overflow_ = false;
  entry_times_.clear();
  for (const auto& [_, abox] : by_time) add_abox(abox);
}

Interpretation WindowModel::window_interpretation() const {
  Interpretation out;
  for (const auto& [atom, _] : facts_.facts()) out.add(atom);
  return out;
}

bool WindowModel::entails(const Atom& atom) const { return facts_.homes(atom) != nullptr; }

std::vector<std::pair<Timestamp, Interpretation>> WindowModel::entries() const {
  std::map<Timestamp, Interpretation> by_time;
  for (Timestamp t : entry_times_) by_time[t];
  for (const auto& [atom, homes] : facts_.facts())
    for (const auto& [t, _] : homes) by_time[t].add(atom);
  return {by_time.begin(), by_time.end()};
}

std::vector<AttributedAtom> WindowModel::attributed_atoms() const {
  std::vector<AttributedAtom> out;
  for (const auto& [atom, homes] : facts_.facts()) {
    AttributedAtom a{atom, AttributedAtom::Origin::Derived, {}, {}};
    for (const auto& [t, bits] : homes) {
      a.homes.insert(t);
      if (bits & kAsserted) a.asserted_at.insert(t);
    }
    if (!a.asserted_at.empty()) a.origin = AttributedAtom::Origin::Asserted;
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end(),
            [](const AttributedAtom& x, const AttributedAtom& y) { return AtomTextOrder{}(x.atom, y.atom); });
  return out;
}

std::set<Occurrence> WindowModel::asserted_occurrences() const {
  std::set<Occurrence> out;
  for (const auto& [atom, homes] : facts_.facts())
    for (const auto& [t, bits] : homes)
      if (bits & kAsserted) out.insert({atom, t});
  return out;
}

std::set<Occurrence> WindowModel::occurrences() const {
  std::set<Occurrence> out;
  for (const auto& [atom, homes] : facts_.facts())
    for (const auto& [t, _] : homes) out.insert({atom, t});
  return out;
}

SlideReport slide(WindowModel& wm, std::span<const MomentaryABox> stream, const WindowExtent& next,
                  const RepairHook& hook) {
  SlideReport report;
  report.extent = next;
  report.atoms_before = wm.facts().facts().size();
  const std::size_t entries_before = wm.entry_timestamps().size();
  wm.advance_to(next);
  report.dropped_entries = entries_before - wm.entry_timestamps().size();

  auto slice = window_slice(stream, next);
  if (auto done = wm.processed_through()) {
    auto first = std::upper_bound(slice.begin(), slice.end(), *done,
                                  [](Timestamp t, const MomentaryABox& a) { return t < a.timestamp; });
    slice = slice.subspan(static_cast<std::size_t>(first - slice.begin()));
  }

  if (hook) {
    for (const auto& abox : slice) {
      auto removed = hook(wm, abox);
      report.removed.insert(removed.begin(), removed.end());
    }
  } else {
    auto models = materialize_batch(slice, wm.rules().tbox());
    for (std::size_t i = 0; i < slice.size(); ++i) wm.add_abox(slice[i], &models[i]);
  }
  wm.mark_processed_through(next.end);
  report.added_aboxes = slice.size();
  report.atoms_after = wm.facts().facts().size();
  return report;
}

WindowModel build_window_model(std::span<const MomentaryABox> stream, const WindowExtent& extent,
                               std::shared_ptr<const RuleSet> rules) {
  WindowModel wm(extent, std::move(rules));
  slide(wm, stream, extent);
  return wm;
}

}  // namespace rlstream
