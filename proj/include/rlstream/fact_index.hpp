#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rlstream/ontology.hpp"
#include "rlstream/stream.hpp"

namespace rlstream {

enum ProvenanceBits : std::uint8_t { kAsserted = 1, kDerived = 2 };

// Ground atoms, each present at one or more timestamps, with subject/object
// adjacency per role so tree-shaped rule bodies can be matched top-down.
class FactIndex {
 public:
  using Homes = std::map<Timestamp, std::uint8_t>;

  // Returns true when (atom, timestamp) was not present before.
  bool insert(const Occurrence& occ, std::uint8_t bits);
  void erase(const Occurrence& occ);
  bool contains(const Occurrence& occ) const;
  std::uint8_t bits(const Occurrence& occ) const;
  void set_bits(const Occurrence& occ, std::uint8_t bits);

  // Timestamps at which the atom is present; nullptr when absent.
  const Homes* homes(const Atom& atom) const;

  // Drops every occurrence older than `cutoff`.
  void erase_before(Timestamp cutoff);

  // Individuals y with role(x, y) at some timestamp (or role(y, x) for an inverse).
  const std::set<Symbol>& successors(const RoleExpr& role, Symbol x) const;

  const std::unordered_map<Atom, Homes>& facts() const { return facts_; }
  std::size_t occurrence_count() const { return occurrences_; }
  bool empty() const { return facts_.empty(); }

 private:
  void link(const Atom& atom);
  void unlink(const Atom& atom);

  std::unordered_map<Atom, Homes> facts_;
  // role -> subject -> objects, and role -> object -> subjects
  std::unordered_map<Symbol, std::unordered_map<Symbol, std::set<Symbol>>> forward_;
  std::unordered_map<Symbol, std::unordered_map<Symbol, std::set<Symbol>>> backward_;
  std::size_t occurrences_ = 0;
};

// Where a predicate occurs inside a tree-shaped body: the chain of roles
// leading from the root variable to the node that holds it. For an Exists
// edge the node is the edge's source.
struct BodyPosition {
  Atom::Kind kind;
  Symbol predicate;
  bool inverse_edge = false;    // Exists over inv(predicate)
  std::vector<RoleExpr> path;   // root -> node
};

class CompiledBody {
 public:
  explicit CompiledBody(ConceptExpr expr);

  const ConceptExpr& expr() const { return expr_; }
  std::span<const BodyPosition> positions() const { return positions_; }

  // Root individuals at which an instantiation could use `fact`.
  void roots_touching(const Atom& fact, const FactIndex& index, std::set<Symbol>& out) const;

  // Calls `emit` with the occurrence list of every instantiation of the body
  // rooted at `root` (in match order, possibly with repeats).
  void match(const FactIndex& index, Symbol root,
             const std::function<void(std::span<const Occurrence>)>& emit) const;

 private:
  ConceptExpr expr_;
  std::vector<BodyPosition> positions_;
};

// All roots touched by any of `facts`, per body.
std::vector<std::set<Symbol>> roots_touching(std::span<const CompiledBody> bodies,
                                             std::span<const Occurrence> facts,
                                             const FactIndex& index);

// Sorted, duplicate-free copy of an instantiation's occurrence list.
std::vector<Occurrence> normalize_support(std::span<const Occurrence> occs);

Timestamp min_timestamp(std::span<const Occurrence> occs);

}  // namespace rlstream
