// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "fuzz_support.hpp"
#include "rlstream/driver.hpp"
#include "rlstream/oracle.hpp"
#include "rlstream/repair.hpp"
#include "rlstream/window_engine.hpp"

using namespace rlstream;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;  // printed under the verdict line
};

Timestamp ts(int t) { return Timestamp::from_integer(t); }
Atom concept_atom(std::string_view name, std::string_view ind = "a") { return Atom::make_concept(name, ind); }
Occurrence occ(std::string_view name, int t) { return {concept_atom(name), ts(t)}; }

// Collects the first few failure descriptions from parallel loops.
class Failures {
 public:
  void add(std::string what) {
    std::lock_guard lock(mu_);
    ++count_;
    if (samples_.size() < 5) samples_.push_back(std::move(what));
  }
  std::size_t count() const { return count_; }
  const std::vector<std::string>& samples() const { return samples_; }

 private:
  std::mutex mu_;
  std::size_t count_ = 0;
  std::vector<std::string> samples_;
};

std::string run_cli(const RunConfig& cfg, const std::string& tbox, const std::string& stream, int& status) {
  std::ostringstream out, err;
  status = run_text(cfg, tbox, stream, out, err);
  return out.str();
}

RunConfig window_config(int width, int slide, std::optional<int> origin, bool repair) {
  RunConfig cfg;
  cfg.width = ts(width);
  cfg.slide = ts(slide);
  if (origin) cfg.origin = ts(*origin);
  cfg.repair = repair;
  cfg.check_oracle = true;
  return cfg;
}

Outcome attribution_example() {
  int status = 0;
  auto out = run_cli(window_config(2, 1, 2, false), "A & C < D\nB & D < E\n",
                     "1 A(a)\n1 B(a)\n2 C(a)\n3 A(a)\n4 B(a)\n", status);
  const std::string expected =
      "WINDOW [0, 2]\nA(a) @ {1}\nB(a) @ {1}\nC(a) @ {2}\nD(a) @ {1}\nE(a) @ {1}\n"
      "WINDOW [1, 3]\nA(a) @ {1, 3}\nB(a) @ {1}\nC(a) @ {2}\nD(a) @ {1, 2}\nE(a) @ {1}\n"
      "WINDOW [2, 4]\nA(a) @ {3}\nB(a) @ {4}\nC(a) @ {2}\nD(a) @ {2}\nE(a) @ {2}\n";
  if (status != kExitOk || out != expected) return {false, "output differs:\n" + out};
  return {true, "three windows, homes D@1, E@1, then D@{1,2}, then E@2"};
}

Outcome recency_example() {
  TBox tbox = parse_tbox("A & B & C < bot\nB & D < bot\n");
  auto ntbox = unfold_negative_inclusions(tbox, 3);
  std::set<Occurrence> current{occ("A", 1), occ("B", 2)};
  MomentaryABox incoming{ts(3), {concept_atom("C"), concept_atom("D")}};

  auto conflicts = find_conflicts(current, incoming, ntbox);
  std::set<std::vector<Occurrence>> found;
  for (const auto& c : conflicts) found.insert(c.occurrences);
  const std::set<std::vector<Occurrence>> expected_conflicts{{occ("A", 1), occ("B", 2), occ("C", 3)},
                                                             {occ("B", 2), occ("D", 3)}};
  if (found != expected_conflicts) return {false, "unexpected conflict sets"};
  if (resolve_conflicts(conflicts) != std::set<Occurrence>{occ("B", 2)}) return {false, "unexpected removal set"};

  WindowModel wm({ts(1), ts(3)}, tbox);
  wm.add_abox({ts(1), {concept_atom("A")}});
  wm.add_abox({ts(2), {concept_atom("B")}});
  auto report = add_abox_with_repair(wm, incoming, ntbox);
  const std::set<Occurrence> survivors{occ("A", 1), occ("C", 3), occ("D", 3)};
  if (report.removed != std::set<Occurrence>{occ("B", 2)} || wm.asserted_occurrences() != survivors)
    return {false, "engine survivors differ"};
  Stream stream = parse_stream("1 A(a)\n2 B(a)\n3 C(a)\n3 D(a)\n");
  if (oracle::definitional_window_repair(stream, {ts(1), ts(3)}, tbox) != survivors)
    return {false, "oracle survivors differ"};
  return {true, "both conflicts found; removed {B(a)@2}; survivors {A(a)@1, C(a)@3, D(a)@3}"};
}

Outcome preference_example() {
  TBox tbox = parse_tbox("A & C < bot\nB & C < bot\n");
  auto ntbox = unfold_negative_inclusions(tbox, 3);
  WindowModel wm({ts(1), ts(2)}, tbox);
  add_abox_with_repair(wm, {ts(1), {concept_atom("A"), concept_atom("B")}}, ntbox);
  add_abox_with_repair(wm, {ts(2), {concept_atom("C")}}, ntbox);
  if (wm.window_interpretation().atoms() != std::vector<Atom>{concept_atom("C")})
    return {false, "entailed set is not {C(a)}"};
  std::vector<std::set<Atom>> levels{{concept_atom("A"), concept_atom("B")}, {concept_atom("C")}};
  if (oracle::preferred_repairs(levels, tbox) != std::vector<std::set<Atom>>{{concept_atom("C")}})
    return {false, "preferred repairs are not { {C(a)} }"};
  return {true, "entailed {C(a)}; preferred repairs { {C(a)} }"};
}

Outcome car_pedals_example() {
  int status = 0;
  auto out = run_cli(window_config(2, 1, std::nullopt, true), "GasPedalPressed & BreaksPressed < bot\n",
                     "0 GasPedalPressed(x)\n1 GasPedalPressed(x)\n3 BreaksPressed(x)\n4 BreaksPressed(x)\n"
                     "4 ClutchPressed(x)\n",
                     status);
  const std::string expected =
      "WINDOW [0, 2]\nGasPedalPressed(x) @ {0, 1}\n"
      "WINDOW [1, 3]\nBreaksPressed(x) @ {3}\nREMOVED 1 GasPedalPressed(x)\n"
      "WINDOW [2, 4]\nBreaksPressed(x) @ {3, 4}\nClutchPressed(x) @ {4}\n";
  if (status != kExitOk || out != expected) return {false, "output differs:\n" + out};
  return {true, "REMOVED 1 GasPedalPressed(x) at [1, 3], never inconsistent"};
}

Outcome incremental_vs_scratch() {
  constexpr int kCases = 1000;
  Failures failures;
  long windows = 0, deriving = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : windows, deriving)
  for (int i = 0; i < kCases; ++i) {
    auto c = fuzz::consistent_case(5000 + i);
    const auto extents = window_extents(c.spec, c.horizon);
    WindowModel wm(extents.front(), c.tbox);
    for (const auto& extent : extents) {
      ++windows;
      try {
        slide(wm, c.stream, extent);
      } catch (const std::exception& e) {
        failures.add("case " + std::to_string(i) + ": " + e.what());
        break;
      }
      auto naive = oracle::naive_window_materialization(c.stream, extent, c.tbox);
      if (!is_consistent(naive) || !(std::get<Interpretation>(naive) == wm.window_interpretation())) {
        failures.add("case " + std::to_string(i) + " window " + to_string(extent));
        break;
      }
      std::set<Atom> asserted;
      for (const auto& o : window_abox(c.stream, extent)) asserted.insert(o.atom);
      if (wm.window_interpretation().size() > asserted.size()) ++deriving;
    }
  }
  Outcome o{failures.count() == 0,
            std::to_string(kCases) + " cases, " + std::to_string(windows) + " windows (" +
                std::to_string(deriving) + " with derived atoms), " +
                std::to_string(failures.count()) + " mismatches",
            failures.samples()};
  return o;
}

Outcome drop_oldest() {
  constexpr int kCases = 500;
  Failures failures;
  long checked = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : checked)
  for (int i = 0; i < kCases; ++i) {
    auto c = fuzz::consistent_case(9000 + i);
    auto rules = std::make_shared<const RuleSet>(c.tbox);
    for (const auto& extent : window_extents(c.spec, c.horizon)) {
      WindowModel wm = build_window_model(c.stream, extent, rules);
      const auto& entries = wm.entry_timestamps();
      if (entries.size() < 2) continue;
      Timestamp cutoff = *std::next(entries.begin());
      wm.drop_before(cutoff);
      WindowExtent shorter{cutoff, extent.end};
      auto naive = oracle::naive_window_materialization(c.stream, shorter, c.tbox);
      ++checked;
      if (!is_consistent(naive) || !(std::get<Interpretation>(naive) == wm.window_interpretation()) ||
          !(build_window_model(c.stream, shorter, rules).window_interpretation() == wm.window_interpretation()))
        failures.add("case " + std::to_string(i) + " window " + to_string(extent));
    }
  }
  return {failures.count() == 0,
          std::to_string(kCases) + " cases, " + std::to_string(checked) + " drops, " +
              std::to_string(failures.count()) + " mismatches",
          failures.samples()};
}

Outcome repair_vs_definitional() {
  constexpr int kCases = 500;
  Failures failures;
  long windows = 0, removing = 0, suffixes = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : windows, removing, suffixes)
  for (int i = 0; i < kCases; ++i) {
    auto c = fuzz::repair_case(20000 + i);
    auto atoms = fuzz::all_atoms(c.stream);
    oracle::ConsistencyTable table(c.tbox, {atoms.begin(), atoms.end()});
    auto ntbox = std::make_shared<const NormalizedTBox>(unfold_negative_inclusions(c.tbox, 3));
    const auto extents = window_extents(c.spec, c.horizon);
    WindowModel wm(extents.front(), c.tbox);
    auto hook = make_repair_hook(ntbox);
    bool removed_any = false;
    for (const auto& extent : extents) {
      ++windows;
      SlideReport report;
      try {
        report = slide(wm, c.stream, extent, hook);
      } catch (const std::exception& e) {
        failures.add("case " + std::to_string(i) + " window " + to_string(extent) + ": " + e.what());
        break;
      }
      removed_any = removed_any || !report.removed.empty();
      auto expected = oracle::definitional_window_repair(c.stream, extent, table);
      if (wm.asserted_occurrences() != expected) {
        failures.add("case " + std::to_string(i) + " window " + to_string(extent) + ":\n" + to_string(c.tbox) +
                     to_string(c.stream));
        break;
      }
      for (const auto& abox : window_slice(c.stream, extent)) {
        if (abox.timestamp == extent.start) continue;
        std::set<Occurrence> restricted;
        for (const auto& o : expected)
          if (o.timestamp >= abox.timestamp) restricted.insert(o);
        ++suffixes;
        if (restricted != oracle::definitional_window_repair(c.stream, {abox.timestamp, extent.end}, table))
          failures.add("case " + std::to_string(i) + " suffix from " + to_string(abox.timestamp));
      }
    }
    if (removed_any) ++removing;
  }
  return {failures.count() == 0,
          std::to_string(kCases) + " cases (" + std::to_string(removing) + " with removals), " +
              std::to_string(windows) + " windows, " + std::to_string(suffixes) + " suffix checks, " +
              std::to_string(failures.count()) + " mismatches",
          failures.samples()};
}

Outcome normal_form_soundness() {
  constexpr int kCases = 500;
  Failures failures;
  long inconsistent = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : inconsistent)
  for (int i = 0; i < kCases; ++i) {
    gen::Rng rng(40000 + i);
    gen::TBoxShape tshape{5, 2, 8, 3, 2, 2};
    gen::StreamShape sshape{5, 2, 3, 1, 10, 1.0, 0.35, 0};
    while (true) {
      TBox tbox = gen::random_tbox(rng, tshape);
      auto abox = gen::random_stream(rng, sshape).front().atoms;
      NormalizedTBox ntbox;
      try {
        ntbox = unfold_negative_inclusions(tbox, 3);
      } catch (const BudgetExceeded&) {
        continue;
      }
      if (!ntbox.exact()) continue;
      Interpretation standard = standard_interpretation(abox);
      bool flattened_hit = std::any_of(ntbox.flattened_negatives.begin(), ntbox.flattened_negatives.end(),
                                       [&](const ConceptExpr& b) { return !eval_concept(b, standard).empty(); });
      bool chase_hit = !is_consistent(canonical_model(abox, tbox));
      if (chase_hit) ++inconsistent;
      if (flattened_hit != chase_hit) failures.add("case " + std::to_string(i) + ":\n" + to_string(tbox));
      break;
    }
  }
  return {failures.count() == 0,
          std::to_string(kCases) + " exact TBox/ABox pairs (" + std::to_string(inconsistent) +
              " inconsistent), " + std::to_string(failures.count()) + " mismatches",
          failures.samples()};
}

Outcome performance_smoke() {
  BenchConfig cfg;
  cfg.seed = 42;
  cfg.overlap_percent = 90;
  cfg.timestamps = 200;
  cfg.atoms_per_tick = 20;
  auto result = run_bench(cfg);
  std::printf("%s", bench_csv(result).c_str());
  char buf[160];
  std::snprintf(buf, sizeof buf, "median incremental %.1f us vs scratch %.1f us, ratio %.3f (limit 0.5)",
                result.median_incr, result.median_scratch, result.ratio());
  return {result.ratio() <= 0.5 && result.mismatched_windows == 0, buf};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "attribution example", 1, attribution_example},
      {2, "recency repair example", 1, recency_example},
      {3, "preference levels as timestamps", 1, preference_example},
      {4, "car pedals", 1, car_pedals_example},
      {5, "incremental equals from scratch", 60, incremental_vs_scratch},
      {6, "drop oldest entry", 30, drop_oldest},
      {7, "repair equals definitional repair", 120, repair_vs_definitional},
      {8, "normal form soundness", 30, normal_form_soundness},
      {9, "performance smoke", 0, performance_smoke},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %d %s: %s (%.2f s%s) %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                in_time ? "" : ", over time limit", o.detail.c_str());
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
