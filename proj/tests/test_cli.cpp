#include "doctest.h"

#include <fstream>
#include <map>
#include <sstream>

#include "fuzz_support.hpp"
#include "rlstream/driver.hpp"

using namespace rlstream;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(RLSTREAM_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

RunConfig config(int width, int slide, std::optional<int> origin = {}) {
  RunConfig c;
  c.width = Timestamp::from_integer(width);
  c.slide = Timestamp::from_integer(slide);
  if (origin) c.origin = Timestamp::from_integer(*origin);
  return c;
}

Outcome run_example(const RunConfig& c, const std::string& name) {
  std::ostringstream out, err;
  int status = run_text(c, slurp(name + ".tbox"), slurp(name + ".stream"), out, err);
  return {status, out.str(), err.str()};
}

Outcome run_inline(const RunConfig& c, std::string_view tbox, std::string_view stream) {
  std::ostringstream out, err;
  int status = run_text(c, tbox, stream, out, err);
  return {status, out.str(), err.str()};
}

// Window headers mapped to the atom texts listed under them.
std::vector<std::pair<std::string, std::set<std::string>>> windows_of(const std::string& text) {
  std::vector<std::pair<std::string, std::set<std::string>>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("WINDOW ", 0) == 0) {
      out.push_back({line, {}});
    } else if (line.rfind("REMOVED ", 0) != 0) {
      out.back().second.insert(line.substr(0, line.find(" @ ")));
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::set<std::string>>> replay_diffs(const std::string& text) {
  std::vector<std::pair<std::string, std::set<std::string>>> out;
  std::set<std::string> state;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("WINDOW ", 0) == 0) {
      out.push_back({line, state});
      continue;
    }
    if (line.rfind("+ ", 0) == 0) state.insert(line.substr(2));
    if (line.rfind("- ", 0) == 0) state.erase(line.substr(2));
    out.back().second = state;
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("attribution example") {
    auto r = run_example(config(2, 1, 2), "attribution");
    CHECK(r.status == kExitOk);
    CHECK(r.out ==
          "WINDOW [0, 2]\nA(a) @ {1}\nB(a) @ {1}\nC(a) @ {2}\nD(a) @ {1}\nE(a) @ {1}\n"
          "WINDOW [1, 3]\nA(a) @ {1, 3}\nB(a) @ {1}\nC(a) @ {2}\nD(a) @ {1, 2}\nE(a) @ {1}\n"
          "WINDOW [2, 4]\nA(a) @ {3}\nB(a) @ {4}\nC(a) @ {2}\nD(a) @ {2}\nE(a) @ {2}\n");
    CHECK(r.err.empty());
  }

  TEST_CASE("origin defaults to the first timestamp plus the width") {
    auto r = run_example(config(2, 1), "attribution");
    CHECK(r.out.rfind("WINDOW [1, 3]\n", 0) == 0);
  }

  TEST_CASE("car pedals with and without repair") {
    auto c = config(2, 1);
    auto plain = run_example(c, "car_pedals");
    CHECK(plain.status == kExitInconsistent);
    CHECK(plain.out == "WINDOW [0, 2]\nGasPedalPressed(x) @ {0, 1}\nWINDOW [1, 3]\nINCONSISTENT\n");
    CHECK(plain.err.find("inconsistent window [1, 3]") != std::string::npos);

    c.repair = true;
    c.check_oracle = true;
    auto repaired = run_example(c, "car_pedals");
    CHECK(repaired.status == kExitOk);
    CHECK(repaired.out ==
          "WINDOW [0, 2]\nGasPedalPressed(x) @ {0, 1}\n"
          "WINDOW [1, 3]\nBreaksPressed(x) @ {3}\nREMOVED 1 GasPedalPressed(x)\n"
          "WINDOW [2, 4]\nBreaksPressed(x) @ {3, 4}\nClutchPressed(x) @ {4}\n");
  }

  TEST_CASE("skipping inconsistent windows") {
    auto c = config(2, 1);
    c.skip_inconsistent = true;
    auto r = run_example(c, "car_pedals");
    CHECK(r.status == kExitOk);
    CHECK(r.out ==
          "WINDOW [0, 2]\nGasPedalPressed(x) @ {0, 1}\nWINDOW [1, 3]\nINCONSISTENT\n"
          "WINDOW [2, 4]\nBreaksPressed(x) @ {3, 4}\nClutchPressed(x) @ {4}\n");
  }

  TEST_CASE("repair examples pass the oracle") {
    auto c = config(2, 1);
    c.repair = true;
    c.check_oracle = true;
    auto recency = run_example(c, "recency");
    CHECK(recency.status == kExitOk);
    CHECK(recency.out == "WINDOW [1, 3]\nA(a) @ {1}\nC(a) @ {3}\nD(a) @ {3}\nREMOVED 2 B(a)\n");
    c.origin = Timestamp::from_integer(2);
    auto preference = run_example(c, "preference");
    CHECK(preference.status == kExitOk);
    CHECK(preference.out == "WINDOW [0, 2]\nC(a) @ {2}\nREMOVED 1 A(a)\nREMOVED 1 B(a)\n");
  }

  TEST_CASE("diff mode") {
    auto c = config(2, 1);
    c.repair = true;
    c.emit = EmitMode::Diff;
    auto r = run_example(c, "car_pedals");
    CHECK(r.out ==
          "WINDOW [0, 2]\n+ GasPedalPressed(x)\n"
          "WINDOW [1, 3]\n+ BreaksPressed(x)\n- GasPedalPressed(x)\nREMOVED 1 GasPedalPressed(x)\n"
          "WINDOW [2, 4]\n+ ClutchPressed(x)\n");
  }

  TEST_CASE("empty stream prints nothing") {
    auto r = run_inline(config(2, 1), "A < B", "# nothing\n");
    CHECK(r.status == kExitOk);
    CHECK(r.out.empty());
  }

  TEST_CASE("error statuses") {
    CHECK(run_inline(config(2, 1), "A < ", "1 A(a)\n").status == kExitParse);
    CHECK(run_inline(config(2, 1), "A < B", "1 A(a\n").status == kExitParse);
    CHECK(run_inline(config(2, 1), "A < B", "2 A(a)\n1 A(a)\n").status == kExitParse);
    CHECK(run_inline(config(1, 2), "A < B", "1 A(a)\n").status == kExitParse);
    CHECK(run_inline(config(0, 0), "A < B", "1 A(a)\n").status == kExitParse);
    auto tbox_error = run_inline(config(2, 1), "A < some R . B", "1 A(a)\n");
    CHECK(tbox_error.status == kExitParse);
    CHECK(tbox_error.err.find("tbox") != std::string::npos);

    RunConfig missing = config(2, 1);
    missing.tbox_path = "/nonexistent/x.tbox";
    missing.stream_path = std::string(RLSTREAM_DATA_DIR) + "/attribution.stream";
    std::ostringstream out, err;
    CHECK(run(missing, out, err) == kExitIo);
  }

  TEST_CASE("files on disk") {
    RunConfig c = config(2, 1, 2);
    c.tbox_path = std::string(RLSTREAM_DATA_DIR) + "/attribution.tbox";
    c.stream_path = std::string(RLSTREAM_DATA_DIR) + "/attribution.stream";
    std::ostringstream out, err;
    CHECK(run(c, out, err) == kExitOk);
    CHECK(out.str() == run_example(config(2, 1, 2), "attribution").out);
  }

  TEST_CASE("diffs compose to the windows and runs are deterministic") {
    int windows = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
      auto fc = seed % 2 ? fuzz::consistent_case(8000 + seed) : fuzz::repair_case(8000 + seed);
      RunConfig c;
      c.width = fc.spec.width;
      c.slide = fc.spec.slide;
      c.origin = fc.spec.origin;
      c.repair = seed % 2 == 0;
      c.check_oracle = true;
      auto tbox = to_string(fc.tbox), stream = to_string(fc.stream);
      auto full = run_inline(c, tbox, stream);
      c.emit = EmitMode::Diff;
      auto diff = run_inline(c, tbox, stream);
      REQUIRE(full.status == kExitOk);
      REQUIRE(diff.status == kExitOk);
      CHECK(windows_of(full.out) == replay_diffs(diff.out));
      CHECK(run_inline(c, tbox, stream).out == diff.out);
      windows += static_cast<int>(windows_of(full.out).size());
    }
    CHECK(windows > 200);
  }

  TEST_CASE("bench slide lengths") {
    CHECK(bench_slide(20, 90) == 2);
    CHECK(bench_slide(20, 0) == 20);
    CHECK(bench_slide(20, 100) == 1);
    CHECK(bench_slide(20, 97) == 1);
    CHECK(bench_slide(20, 50) == 10);
  }

  TEST_CASE("bench output") {
    BenchConfig small{7, 50, 60, 5, 10};
    auto a = run_bench(small);
    auto b = run_bench(small);
    CHECK(a.mismatched_windows == 0);
    REQUIRE(a.rows.size() == b.rows.size());
    REQUIRE(!a.rows.empty());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].window_end == b.rows[i].window_end);
    CHECK(a.rows.front().window_end == Timestamp::from_integer(11));
    CHECK(a.rows[1].window_end - a.rows[0].window_end == Timestamp::from_integer(5));

    auto csv = bench_csv(a);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "window_end,incr_micros,scratch_micros");
    std::size_t data = 0;
    bool summary = false;
    while (std::getline(in, line)) {
      if (line.rfind("# ", 0) == 0) {
        summary = true;
        continue;
      }
      CHECK(std::count(line.begin(), line.end(), ',') == 2);
      ++data;
    }
    CHECK(data == a.rows.size());
    CHECK(summary);

    BenchConfig tumbling{7, 0, 60, 5, 10};
    CHECK(run_bench(tumbling).mismatched_windows == 0);
  }
}
