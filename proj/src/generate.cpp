#include "rlstream/generate.hpp"

#include <string>
#include <vector>

namespace rlstream::gen {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Symbol concept_name(int i) { return Symbol::intern(std::string(1, static_cast<char>('A' + i))); }
Symbol role_name(int i) { return Symbol::intern(std::string(1, static_cast<char>('R' + i))); }

RoleExpr random_role(Rng& rng, const TBoxShape& shape) {
  return RoleExpr{role_name(uniform(rng, 0, shape.roles - 1)), coin(rng, 0.3)};
}

ConceptExpr random_body(Rng& rng, const TBoxShape& shape, int depth) {
  const int pick = uniform(rng, 0, 9);
  if (pick < 4 || (pick >= 7 && depth <= 0) || shape.roles == 0)
    return ConceptExpr::name(concept_name(uniform(rng, 0, shape.concepts - 1)));
  if (pick < 7) {
    std::vector<ConceptExpr> parts;
    const int n = uniform(rng, 2, 3);
    for (int i = 0; i < n; ++i) parts.push_back(random_body(rng, shape, depth - 1));
    return ConceptExpr::conj(std::move(parts));
  }
  return ConceptExpr::exists(random_role(rng, shape), random_body(rng, shape, depth - 1));
}

}  // namespace

TBox random_tbox(Rng& rng, const TBoxShape& shape) {
  std::vector<Axiom> axioms;
  const int total = uniform(rng, 1, shape.max_axioms);
  const int negatives = uniform(rng, 0, std::min(shape.max_negatives, total));
  const int role_incs = shape.roles > 0 ? uniform(rng, 0, std::min(shape.max_role_inclusions, total - negatives)) : 0;
  for (int i = 0; i < negatives; ++i) axioms.push_back(NegativeInclusion{random_body(rng, shape, shape.max_body_depth)});
  for (int i = 0; i < role_incs; ++i) {
    RoleExpr sub = random_role(rng, shape);
    RoleExpr sup{role_name(uniform(rng, 0, shape.roles - 1)), false};
    if (sub.name == sup.name && !sub.inverse) continue;
    axioms.push_back(RoleInclusion::make(sub, sup));
  }
  for (int i = negatives + role_incs; i < total; ++i) {
    axioms.push_back(ConceptInclusion{random_body(rng, shape, shape.max_body_depth),
                                      concept_name(uniform(rng, 0, shape.concepts - 1))});
  }
  return TBox(std::move(axioms));
}

Stream random_stream(Rng& rng, const StreamShape& shape) {
  Stream out;
  int budget = shape.max_occurrences > 0 ? shape.max_occurrences : INT32_MAX;
  auto individual = [&] {
    return Symbol::intern(std::string(1, static_cast<char>('a' + uniform(rng, 0, shape.individuals - 1))));
  };
  for (int t = 1; t <= shape.timestamps && budget > 0; ++t) {
    if (!coin(rng, shape.density)) continue;
    MomentaryABox abox{Timestamp::from_integer(t), {}};
    const int n = std::min(uniform(rng, 1, shape.max_atoms_per_tick), budget);
    for (int i = 0; i < n; ++i) {
      if (shape.roles > 0 && coin(rng, shape.role_fraction)) {
        abox.atoms.insert(Atom::make_role(role_name(uniform(rng, 0, shape.roles - 1)), individual(), individual()));
      } else {
        abox.atoms.insert(Atom::make_concept(concept_name(uniform(rng, 0, shape.concepts - 1)), individual()));
      }
    }
    budget -= static_cast<int>(abox.atoms.size());
    out.push_back(std::move(abox));
  }
  return out;
}

Stream bench_stream(Rng& rng, int ticks, int atoms_per_tick) {
  constexpr int kConcepts = 8;
  constexpr int kIndividuals = 60;
  const char* roles[] = {"R", "S"};
  Stream out;
  for (int t = 1; t <= ticks; ++t) {
    MomentaryABox abox{Timestamp::from_integer(t), {}};
    while (static_cast<int>(abox.atoms.size()) < atoms_per_tick) {
      auto ind = [&] { return "i" + std::to_string(uniform(rng, 0, kIndividuals - 1)); };
      if (coin(rng, 0.35)) {
        abox.atoms.insert(Atom::make_role(roles[uniform(rng, 0, 1)], ind(), ind()));
      } else {
        abox.atoms.insert(Atom::make_concept("C" + std::to_string(uniform(rng, 0, kConcepts - 1)), ind()));
      }
    }
    out.push_back(std::move(abox));
  }
  return out;
}

TBox bench_tbox() {
  return parse_tbox(
      "C0 & C1 < D0\n"
      "some R . C2 < D1\n"
      "D0 & some S . D1 < D2\n"
      "R < T\n"
      "inv(S) < U\n"
      "some T . C3 < D3\n"
      "C4 < C5\n"
      "D3 & C6 < D4\n"
      "some U . D2 < D5\n"
      "some T . (C5 & D1) < D6\n"
      "D6 & C7 < D0\n");
}

}  // namespace rlstream::gen
