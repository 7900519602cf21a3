#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rlstream/stream.hpp"

namespace rlstream {

enum ExitStatus : int {
  kExitOk = 0,
  kExitOracleMismatch = 1,
  kExitInconsistent = 2,
  kExitIo = 3,
  kExitParse = 4,
};

enum class EmitMode { Window, Diff };

struct RunConfig {
  std::string tbox_path;
  std::string stream_path;
  Timestamp width = Timestamp::from_integer(1);
  Timestamp slide = Timestamp::from_integer(1);
  std::optional<Timestamp> origin;  // default: first stream timestamp + width
  bool repair = false;
  unsigned unfold_depth = 3;
  EmitMode emit = EmitMode::Window;
  bool check_oracle = false;
  bool skip_inconsistent = false;
};

// Reads both files and calls run_text. I/O failures give kExitIo.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Window loop over already loaded inputs; config paths are ignored.
int run_text(const RunConfig& config, std::string_view tbox_text, std::string_view stream_text, std::ostream& out,
             std::ostream& err);

struct BenchConfig {
  std::uint64_t seed = 42;
  int overlap_percent = 90;
  int timestamps = 200;
  int atoms_per_tick = 20;
  int width = 20;  // ticks
};

struct BenchRow {
  Timestamp window_end;
  double incr_micros = 0;
  double scratch_micros = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  double median_incr = 0;
  double median_scratch = 0;
  std::size_t mismatched_windows = 0;  // incremental vs scratch interpretation

  double ratio() const { return median_scratch > 0 ? median_incr / median_scratch : 0; }
};

// Slide step length for a given overlap: max(1, round(width * (100 - overlap) / 100)).
int bench_slide(int width, int overlap_percent);

BenchResult run_bench(const BenchConfig& config);
std::string bench_csv(const BenchResult& result);

}  // namespace rlstream
