#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rlstream/driver.hpp"

using namespace rlstream;

namespace {

Timestamp parse_duration(const std::string& text, const char* flag) {
  try {
    return Timestamp::parse(text);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError(flag, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental OWL2 RL reasoning over sliding windows of a timestamped ABox stream"};
  app.require_subcommand(0, 1);

  RunConfig config;
  std::string width, slide_by, origin, emit = "window";
  app.add_option("--tbox", config.tbox_path, "TBox file");
  app.add_option("--stream", config.stream_path, "stream file");
  app.add_option("--width", width, "window width");
  app.add_option("--slide", slide_by, "slide step");
  app.add_option("--origin", origin, "end of the first window (default: first timestamp + width)");
  app.add_flag("--repair", config.repair, "repair inconsistencies, newest assertions win");
  app.add_option("--unfold-depth", config.unfold_depth, "rewriting depth for negative inclusions")
      ->capture_default_str();
  app.add_option("--emit", emit, "window | diff")->check(CLI::IsMember({"window", "diff"}))->capture_default_str();
  app.add_flag("--check-oracle", config.check_oracle, "cross-check every window against brute force");
  app.add_flag("--skip-inconsistent", config.skip_inconsistent, "keep going after an inconsistent window");

  BenchConfig bench;
  auto* bench_cmd = app.add_subcommand("bench", "time incremental slides against from-scratch rebuilds (CSV)");
  bench_cmd->add_option("--seed", bench.seed, "generator seed")->required();
  bench_cmd->add_option("--overlap", bench.overlap_percent, "overlap of consecutive windows in percent")
      ->check(CLI::Range(0, 99))
      ->capture_default_str();
  bench_cmd->add_option("--timestamps", bench.timestamps, "stream length in ticks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--atoms-per-tick", bench.atoms_per_tick, "atoms per tick")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--width", bench.width, "window width in ticks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (*bench_cmd) {
      auto result = run_bench(bench);
      std::cout << bench_csv(result);
      return result.mismatched_windows == 0 ? kExitOk : kExitOracleMismatch;
    }
    for (const auto& [value, flag] : {std::pair{&config.tbox_path, "--tbox"}, std::pair{&config.stream_path, "--stream"},
                                      std::pair{&width, "--width"}, std::pair{&slide_by, "--slide"}})
      if (value->empty()) throw CLI::RequiredError(flag);
    config.width = parse_duration(width, "--width");
    config.slide = parse_duration(slide_by, "--slide");
    if (!origin.empty()) config.origin = parse_duration(origin, "--origin");
    config.emit = emit == "diff" ? EmitMode::Diff : EmitMode::Window;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitParse;
  }
  return run(config, std::cout, std::cerr);
}
