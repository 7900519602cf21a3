#include "rlstream/fact_index.hpp"

#include <algorithm>

namespace rlstream {

bool FactIndex::insert(const Occurrence& occ, std::uint8_t bits) {
  auto [it, fresh_atom] = facts_.try_emplace(occ.atom);
  auto [home, fresh] = it->second.try_emplace(occ.timestamp, bits);
  if (!fresh) {
    home->second |= bits;
    return false;
  }
  ++occurrences_;
  if (fresh_atom) link(occ.atom);
  return true;
}

void FactIndex::erase(const Occurrence& occ) {
  auto it = facts_.find(occ.atom);
  if (it == facts_.end()) return;
  if (it->second.erase(occ.timestamp) == 0) return;
  --occurrences_;
  if (it->second.empty()) {
    unlink(occ.atom);
    facts_.erase(it);
  }
}

bool FactIndex::contains(const Occurrence& occ) const {
  auto it = facts_.find(occ.atom);
  return it != facts_.end() && it->second.count(occ.timestamp) > 0;
}

std::uint8_t FactIndex::bits(const Occurrence& occ) const {
  auto it = facts_.find(occ.atom);
  if (it == facts_.end()) return 0;
  auto h = it->second.find(occ.timestamp);
  return h == it->second.end() ? 0 : h->second;
}

void FactIndex::set_bits(const Occurrence& occ, std::uint8_t bits) {
  auto it = facts_.find(occ.atom);
  if (it == facts_.end()) return;
  if (auto h = it->second.find(occ.timestamp); h != it->second.end()) h->second = bits;
}

const FactIndex::Homes* FactIndex::homes(const Atom& atom) const {
  auto it = facts_.find(atom);
  return it == facts_.end() ? nullptr : &it->second;
}

void FactIndex::erase_before(Timestamp cutoff) {
  for (auto it = facts_.begin(); it != facts_.end();) {
    auto& homes = it->second;
    auto keep = homes.lower_bound(cutoff);
    occurrences_ -= static_cast<std::size_t>(std::distance(homes.begin(), keep));
    homes.erase(homes.begin(), keep);
    if (homes.empty()) {
      unlink(it->first);
      it = facts_.erase(it);
    } else {
      ++it;
    }
  }
}

const std::set<Symbol>& FactIndex::successors(const RoleExpr& role, Symbol x) const {
  static const std::set<Symbol> none;
  const auto& side = role.inverse ? backward_ : forward_;
  auto r = side.find(role.name);
  if (r == side.end()) return none;
  auto s = r->second.find(x);
  return s == r->second.end() ? none : s->second;
}

void FactIndex::link(const Atom& atom) {
  if (!atom.is_role()) return;
  forward_[atom.predicate][atom.subject].insert(atom.object);
  backward_[atom.predicate][atom.object].insert(atom.subject);
}

void FactIndex::unlink(const Atom& atom) {
  if (!atom.is_role()) return;
  auto drop = [](auto& side, Symbol role, Symbol from, Symbol to) {
    auto r = side.find(role);
    if (r == side.end()) return;
    auto s = r->second.find(from);
    if (s == r->second.end()) return;
    s->second.erase(to);
    if (s->second.empty()) r->second.erase(s);
    if (r->second.empty()) side.erase(r);
  };
  drop(forward_, atom.predicate, atom.subject, atom.object);
  drop(backward_, atom.predicate, atom.object, atom.subject);
}

// ---- compiled bodies -------------------------------------------------------

namespace {

void collect_positions(const ConceptExpr& e, std::vector<RoleExpr>& path,
                       std::vector<BodyPosition>& out) {
  switch (e.kind()) {
    case ConceptExpr::Kind::Name:
      out.push_back({Atom::Kind::Concept, e.concept_name(), false, path});
      break;
    case ConceptExpr::Kind::Exists:
      out.push_back({Atom::Kind::Role, e.role().name, e.role().inverse, path});
      path.push_back(e.role());
      collect_positions(e.filler(), path, out);
      path.pop_back();
      break;
    case ConceptExpr::Kind::Conj:
      for (const auto& c : e.conjuncts()) collect_positions(c, path, out);
      break;
  }
}

struct Goal {
  const ConceptExpr* expr;
  Symbol individual;
};

class Matcher {
 public:
  Matcher(const FactIndex& index, const std::function<void(std::span<const Occurrence>)>& emit)
      : index_(index), emit_(emit) {}

  void run(const ConceptExpr& body, Symbol root) {
    pending_.push_back({&body, root});
    solve();
  }

 private:
  void solve() {
    if (pending_.empty()) {
      emit_(trail_);
      return;
    }
    Goal goal = pending_.back();
    pending_.pop_back();
    const ConceptExpr& e = *goal.expr;
    switch (e.kind()) {
      case ConceptExpr::Kind::Name: {
        Atom atom = Atom::make_concept(e.concept_name(), goal.individual);
        if (const auto* homes = index_.homes(atom)) {
          for (const auto& [t, _] : *homes) {
            trail_.push_back({atom, t});
            solve();
            trail_.pop_back();
          }
        }
        break;
      }
      case ConceptExpr::Kind::Conj: {
        auto parts = e.conjuncts();
        for (auto it = parts.rbegin(); it != parts.rend(); ++it)
          pending_.push_back({&*it, goal.individual});
        solve();
        pending_.resize(pending_.size() - parts.size());
        break;
      }
      case ConceptExpr::Kind::Exists: {
        const RoleExpr& role = e.role();
        // Copy: solve() never mutates the index, but keep iteration local.
        for (Symbol next : index_.successors(role, goal.individual)) {
          Atom edge = role.inverse ? Atom::make_role(role.name, next, goal.individual)
                                   : Atom::make_role(role.name, goal.individual, next);
          const auto* homes = index_.homes(edge);
          if (!homes) continue;
          for (const auto& [t, _] : *homes) {
            trail_.push_back({edge, t});
            pending_.push_back({&e.filler(), next});
            solve();
            pending_.pop_back();
            trail_.pop_back();
          }
        }
        break;
      }
    }
    pending_.push_back(goal);
  }

  const FactIndex& index_;
  const std::function<void(std::span<const Occurrence>)>& emit_;
  std::vector<Goal> pending_;
  std::vector<Occurrence> trail_;
};

}  // namespace

CompiledBody::CompiledBody(ConceptExpr expr) : expr_(std::move(expr)) {
  std::vector<RoleExpr> path;
  collect_positions(expr_, path, positions_);
}

void CompiledBody::roots_touching(const Atom& fact, const FactIndex& index,
                                  std::set<Symbol>& out) const {
  for (const auto& pos : positions_) {
    if (pos.kind != fact.kind || pos.predicate != fact.predicate) continue;
    Symbol node;
    if (fact.is_role()) {
      node = pos.inverse_edge ? fact.object : fact.subject;
    } else {
      node = fact.subject;
    }
    std::set<Symbol> frontier{node};
    for (auto step = pos.path.rbegin(); step != pos.path.rend() && !frontier.empty(); ++step) {
      // parent --step--> child, so parents are the child's successors
      // along the inverted role.
      std::set<Symbol> parents;
      for (Symbol child : frontier) {
        const auto& ps = index.successors(step->inverted(), child);
        parents.insert(ps.begin(), ps.end());
      }
      frontier = std::move(parents);
    }
    out.insert(frontier.begin(), frontier.end());
  }
}

void CompiledBody::match(const FactIndex& index, Symbol root,
                         const std::function<void(std::span<const Occurrence>)>& emit) const {
  Matcher(index, emit).run(expr_, root);
}

std::vector<std::set<Symbol>> roots_touching(std::span<const CompiledBody> bodies,
                                             std::span<const Occurrence> facts,
                                             const FactIndex& index) {
  std::vector<std::set<Symbol>> out(bodies.size());
  for (const auto& f : facts)
    for (std::size_t i = 0; i < bodies.size(); ++i) bodies[i].roots_touching(f.atom, index, out[i]);
  return out;
}

std::vector<Occurrence> normalize_support(std::span<const Occurrence> occs) {
  std::vector<Occurrence> out(occs.begin(), occs.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Timestamp min_timestamp(std::span<const Occurrence> occs) {
  Timestamp m = occs.front().timestamp;
  for (const auto& o : occs) m = std::min(m, o.timestamp);
  return m;
}

}  // namespace rlstream
