#include "rlstream/driver.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>

#include "rlstream/errors.hpp"
#include "rlstream/generate.hpp"
#include "rlstream/oracle.hpp"
#include "rlstream/repair.hpp"
#include "rlstream/window_engine.hpp"

namespace rlstream {

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return !in.bad();
}

std::string homes_text(const std::set<Timestamp>& homes) {
  std::string out = "{";
  bool first = true;
  for (Timestamp t : homes) {
    out += (first ? "" : ", ") + to_string(t);
    first = false;
  }
  return out + "}";
}

void emit_window(std::ostream& out, const WindowModel& wm) {
  for (const auto& a : wm.attributed_atoms()) out << to_string(a.atom) << " @ " << homes_text(a.homes) << "\n";
}

void emit_diff(std::ostream& out, const Interpretation& before, const Interpretation& after) {
  std::vector<std::pair<Atom, char>> lines;
  for (const auto& a : after.atoms())
    if (!before.contains(a)) lines.push_back({a, '+'});
  for (const auto& a : before.atoms())
    if (!after.contains(a)) lines.push_back({a, '-'});
  std::sort(lines.begin(), lines.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return AtomTextOrder{}(x.first, y.first);
    return x.second < y.second;
  });
  for (const auto& [atom, sign] : lines) out << sign << " " << to_string(atom) << "\n";
}

std::set<std::string> role_names_in(const Stream& stream) {
  std::set<std::string> out;
  for (const auto& abox : stream)
    for (const auto& atom : abox.atoms)
      if (atom.is_role()) out.insert(atom.predicate.name());
  return out;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string tbox_text, stream_text;
  if (!read_file(config.tbox_path, tbox_text)) {
    err << "error: cannot read TBox file '" << config.tbox_path << "'\n";
    return kExitIo;
  }
  if (!read_file(config.stream_path, stream_text)) {
    err << "error: cannot read stream file '" << config.stream_path << "'\n";
    return kExitIo;
  }
  return run_text(config, tbox_text, stream_text, out, err);
}

int run_text(const RunConfig& config, std::string_view tbox_text, std::string_view stream_text, std::ostream& out,
             std::ostream& err) {
  Stream stream;
  TBox tbox;
  std::shared_ptr<const NormalizedTBox> ntbox;
  std::vector<WindowExtent> extents;
  try {
    try {
      stream = parse_stream(stream_text);
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.column(), std::string("stream: ") + e.what());
    }
    try {
      tbox = parse_tbox(tbox_text, role_names_in(stream));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.column(), std::string("tbox: ") + e.what());
    }
    if (stream.empty()) return kExitOk;
    WindowSpec spec{config.width, config.slide, config.origin.value_or(stream.front().timestamp + config.width)};
    extents = window_extents(spec, stream.back().timestamp);
    if (config.repair) {
      ntbox = std::make_shared<const NormalizedTBox>(unfold_negative_inclusions(tbox, config.unfold_depth));
      for (const auto& inc : ntbox->inclusions)
        if (!inc.status.exact())
          err << "warning: " << to_string(Axiom{inc.original}) << " unfolds only to "
              << to_string(inc.status) << "; repair is best-effort\n";
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  auto rules = std::make_shared<const RuleSet>(tbox);
  RepairHook hook = config.repair ? make_repair_hook(ntbox) : RepairHook{};
  WindowModel wm(extents.empty() ? WindowExtent{} : extents.front(), rules);
  Interpretation previous;

  for (const auto& extent : extents) {
    out << "WINDOW " << to_string(extent) << "\n";
    SlideReport report;
    try {
      report = slide(wm, stream, extent, hook);
    } catch (const UnexpectedInconsistency& e) {
      out << "INCONSISTENT\n";
      err << "inconsistent window " << to_string(extent) << ": " << e.what() << "\n";
      if (!config.skip_inconsistent) return kExitInconsistent;
      if (config.emit == EmitMode::Diff) previous = Interpretation{};
      wm = WindowModel(extent, rules);
      continue;
    }

    Interpretation current = wm.window_interpretation();
    if (config.emit == EmitMode::Window) {
      emit_window(out, wm);
    } else {
      emit_diff(out, previous, current);
    }
    out << format_removals(report.removed);
    previous = std::move(current);

    if (config.check_oracle) {
      try {
        auto verdict = oracle::cross_check(wm, stream, extent, tbox);
        if (!verdict.match) {
          err << oracle::render(verdict);
          return kExitOracleMismatch;
        }
      } catch (const CapExceeded& e) {
        err << "warning: oracle skipped for " << to_string(extent) << ": " << e.what() << "\n";
      }
    }
  }
  return kExitOk;
}

int bench_slide(int width, int overlap_percent) {
  const double step = width * (100.0 - overlap_percent) / 100.0;
  return std::max(1, static_cast<int>(step + 0.5));
}

BenchResult run_bench(const BenchConfig& config) {
  gen::Rng rng(config.seed);
  Stream stream = gen::bench_stream(rng, config.timestamps, config.atoms_per_tick);
  auto rules = std::make_shared<const RuleSet>(gen::bench_tbox());
  WindowSpec spec{Timestamp::from_integer(config.width),
                  Timestamp::from_integer(bench_slide(config.width, config.overlap_percent)),
                  Timestamp::from_integer(1 + config.width)};
  const auto extents = window_extents(spec, Timestamp::from_integer(config.timestamps));

  using Clock = std::chrono::steady_clock;
  auto micros = [](Clock::duration d) { return std::chrono::duration<double, std::micro>(d).count(); };

  BenchResult result;
  WindowModel incremental(extents.empty() ? WindowExtent{} : extents.front(), rules);
  for (const auto& extent : extents) {
    auto t0 = Clock::now();
    slide(incremental, stream, extent);
    auto t1 = Clock::now();
    WindowModel scratch = build_window_model(stream, extent, rules);
    auto t2 = Clock::now();
    if (!(incremental.window_interpretation() == scratch.window_interpretation())) ++result.mismatched_windows;
    result.rows.push_back({extent.end, micros(t1 - t0), micros(t2 - t1)});
  }
  std::vector<double> incr, scratch;
  for (const auto& r : result.rows) {
    incr.push_back(r.incr_micros);
    scratch.push_back(r.scratch_micros);
  }
  result.median_incr = median(incr);
  result.median_scratch = median(scratch);
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::ostringstream out;
  out << "window_end,incr_micros,scratch_micros\n";
  out.setf(std::ios::fixed);
  out.precision(1);
  for (const auto& r : result.rows)
    out << to_string(r.window_end) << "," << r.incr_micros << "," << r.scratch_micros << "\n";
  out.precision(3);
  out << "# median_incr_micros=" << result.median_incr << " median_scratch_micros=" << result.median_scratch
      << " ratio=" << result.ratio() << " mismatched_windows=" << result.mismatched_windows << "\n";
  return out.str();
}

}  // namespace rlstream
