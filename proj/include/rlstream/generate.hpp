#pragma once

#include <cstdint>
#include <random>

#include "rlstream/ontology.hpp"
#include "rlstream/stream.hpp"

namespace rlstream::gen {

using Rng = std::mt19937_64;

struct TBoxShape {
  int concepts = 5;          // A, B, C, ...
  int roles = 2;             // R, S, ...
  int max_axioms = 10;
  int max_negatives = 2;
  int max_role_inclusions = 2;
  int max_body_depth = 2;    // nesting of some-restrictions
};

struct StreamShape {
  int concepts = 5;
  int roles = 2;
  int individuals = 3;
  int timestamps = 8;         // ticks 1..timestamps, each present with probability `density`
  int max_atoms_per_tick = 4;
  double density = 0.8;
  double role_fraction = 0.3;
  int max_occurrences = 0;    // 0: unbounded
};

// Random RL TBox over the names A.. and R..; heads are always names.
TBox random_tbox(Rng& rng, const TBoxShape& shape);

Stream random_stream(Rng& rng, const StreamShape& shape);

// Bench workload: `ticks` timestamps with exactly `atoms_per_tick` atoms each
// over a larger vocabulary, and a TBox with chains and joins across roles.
Stream bench_stream(Rng& rng, int ticks, int atoms_per_tick);
TBox bench_tbox();

}  // namespace rlstream::gen
