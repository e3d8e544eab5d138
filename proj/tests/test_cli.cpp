// End-to-end checks of the command-line tool: exit codes, output lines,
// and the artifacts it writes. Each case shells out to the built binary.
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neurogate/harness/generator.hpp"
#include "neurogate/harness/scenario.hpp"
#include "neurogate/intent/stream_io.hpp"
#include "neurogate/monitor/trace.hpp"
#include "neurogate/signal/io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CmdResult {
  int exit_code{-1};
  std::string output;  // stdout and stderr interleaved

  bool contains(const std::string& needle) const {
    return output.find(needle) != std::string::npos;
  }
};

std::string cli_path() {
  if (const char* env = std::getenv("NEUROGATE_CLI")) return env;
  return NEUROGATE_CLI_PATH;
}

CmdResult run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "neurogate-cli-tests";
  fs::create_directories(dir);
  return dir;
}

std::string fixture_path() {
  return std::string(NEUROGATE_DATA_DIR) + "/fixtures/session100.csv";
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

}  // namespace

TEST_CASE("help and argument errors") {
  const CmdResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.contains("monitor"));
  CHECK(help.contains("replay-verify"));

  CHECK(run_cli("").exit_code == 2);                 // a subcommand is required
  CHECK(run_cli("frobnicate").exit_code == 2);       // unknown subcommand
  CHECK(run_cli("monitor").exit_code == 2);          // missing positional
  CHECK(run_cli("calibrate x --bins 0").exit_code == 2);
  CHECK(run_cli("bench --steps 0").exit_code == 2);
}

TEST_CASE("monitor gates the pinned session and replay-verify reproduces it") {
  const fs::path trace = work_dir() / "base.jsonl";
  const CmdResult res =
      run_cli("monitor " + fixture_path() + " --out " + trace.string());
  CHECK(res.exit_code == 0);
  CHECK(res.contains("frames 100"));
  CHECK(res.contains("labeled 100"));
  CHECK(res.contains("latency p50"));
  CHECK(res.contains("trace: " + trace.string()));

  const auto t = neurogate::monitor::read_trace(trace.string());
  CHECK(t.records.size() == 100);
  CHECK(t.header.domain_hash != 0);
  CHECK(t.records.front().cause == "warmup");

  const CmdResult rv = run_cli("replay-verify " + trace.string());
  CHECK(rv.exit_code == 0);
  CHECK(rv.contains("trace verified: 100 records reproduce byte for byte"));
}

TEST_CASE("a zero entropy ceiling halts every frame") {
  const fs::path trace = work_dir() / "zero.jsonl";
  const CmdResult res = run_cli("monitor " + fixture_path() + " --tau-h 0.0 --out " +
                                trace.string());
  CHECK(res.exit_code == 0);
  CHECK(res.contains("executed 0"));
  CHECK(res.contains("halted 100"));

  const auto t = neurogate::monitor::read_trace(trace.string());
  REQUIRE(t.records.size() == 100);
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    CHECK(t.records[i].verdict == "HALT");
    CHECK(t.records[i].cause == (i < 10 ? "warmup" : "low-confidence"));
  }
}

TEST_CASE("monitor rejects bad inputs with exit code 2") {
  const CmdResult missing = run_cli("monitor /no/such/stream.csv");
  CHECK(missing.exit_code == 2);
  CHECK(missing.contains("error:"));
  CHECK(missing.contains("/no/such/stream.csv"));

  const CmdResult ablate = run_cli("monitor " + fixture_path() + " --ablate bogus");
  CHECK(ablate.exit_code == 2);
  CHECK(ablate.contains("unknown check in --ablate"));
}

TEST_CASE("malformed stream lines are reported but do not abort the run") {
  using neurogate::harness::ScenarioSpec;
  const auto records = neurogate::harness::make_posterior_records(ScenarioSpec{}, 2);
  std::string text = neurogate::intent::format_posterior_stream(records);
  text += "this line is not a record\n";
  const fs::path stream = work_dir() / "ragged.csv";
  spit(stream, text);

  const CmdResult res = run_cli("monitor " + stream.string());
  CHECK(res.exit_code == 0);
  CHECK(res.contains(stream.string() + ":4:"));
  CHECK(res.contains("frames 2"));
  CHECK(res.contains("rejected input lines 1"));
}

TEST_CASE("monitor consumes a raw recording for the artifact check") {
  std::mt19937 gen(12345);
  std::normal_distribution<double> noise(0.0, 1.0);
  neurogate::signal::RawEeg raw;
  raw.sample_rate_hz = 250.0;
  raw.m = neurogate::signal::ChannelMatrix::zeros(4, 15 * 250);
  for (std::size_t ch = 0; ch < raw.m.channels; ++ch)
    for (double& x : raw.m.channel(ch)) x = noise(gen);
  const fs::path eeg = work_dir() / "quiet.csv";
  neurogate::signal::write_raw_csv(eeg.string(), raw);

  using neurogate::harness::ScenarioSpec;
  const auto records = neurogate::harness::make_posterior_records(ScenarioSpec{}, 30);
  const fs::path stream = work_dir() / "short.csv";
  spit(stream, neurogate::intent::format_posterior_stream(records));

  const CmdResult res =
      run_cli("monitor " + stream.string() + " --eeg " + eeg.string());
  CHECK(res.exit_code == 0);
  CHECK(res.contains("windows, baseline over first 10 s"));
  CHECK(res.contains("frames 30"));
}

TEST_CASE("calibrate prints a report and writes JSON on request") {
  const CmdResult res = run_cli("calibrate " + fixture_path());
  CHECK(res.exit_code == 0);
  CHECK(res.contains("n 100"));
  CHECK(res.contains("ece"));
  CHECK(res.contains("temperature"));

  const fs::path json_path = work_dir() / "cal.json";
  const CmdResult with_json =
      run_cli("calibrate " + fixture_path() + " --json " + json_path.string());
  CHECK(with_json.exit_code == 0);
  CHECK(with_json.contains("report: " + json_path.string()));

  const ordered_json j = ordered_json::parse(slurp(json_path));
  CHECK(j.at("n").get<std::size_t>() == 100);
  CHECK(j.contains("ece"));
  CHECK(j.at("per_bin").size() == 10);
  CHECK(j.contains("temperature"));
}

TEST_CASE("sweep reports an optimum and validates its options") {
  const CmdResult res = run_cli("sweep " + fixture_path());
  CHECK(res.exit_code == 0);
  CHECK(res.contains("tau*"));

  const CmdResult bad_grid = run_cli("sweep " + fixture_path() + " --grid 1:0:0.1");
  CHECK(bad_grid.exit_code == 2);

  const CmdResult bad_weights = run_cli("sweep " + fixture_path() + " --weights 1,0");
  CHECK(bad_weights.exit_code == 2);
  CHECK(bad_weights.contains("three values"));
}

TEST_CASE("noise-test runs a scenario file and writes line-delimited results") {
  neurogate::harness::ScenarioSpec spec;
  spec.trials = 8;
  spec.dwell_frames = 2;
  spec.snr_schedule_db = {10.0, 0.0};
  spec.repetitions = 2;
  spec.channels = 4;
  spec.emit_windows = false;
  spec.seed = 3;
  const fs::path scen = work_dir() / "tiny.json";
  neurogate::harness::save_scenario(spec, scen.string());

  const fs::path out = work_dir() / "results";
  const CmdResult res =
      run_cli("noise-test " + scen.string() + " --ablation --out " + out.string());
  CHECK(res.exit_code == 0);
  CHECK(res.contains("seed: 3"));
  CHECK(res.contains("pooled:"));
  CHECK(res.contains("decoder calibration:"));
  CHECK(res.contains("confidence-only"));
  CHECK(res.contains("results: " + out.string()));

  const auto bins = lines_of(slurp(out / "bins.jsonl"));
  REQUIRE(bins.size() == 4);  // 2 repetitions x 2 SNR bins
  for (const auto& line : bins) {
    const ordered_json j = ordered_json::parse(line);
    CHECK(j.contains("snr_db"));
    CHECK(j.contains("safety_rate"));
    CHECK(j.at("trials").get<std::uint64_t>() == 4);
  }

  const auto ablation = lines_of(slurp(out / "ablation.jsonl"));
  REQUIRE(ablation.size() == 7);
  CHECK(ordered_json::parse(ablation.front()).at("variant") == "full");
  CHECK(ordered_json::parse(ablation.back()).at("variant") == "confidence-only");

  const CmdResult reseeded = run_cli("noise-test " + scen.string() + " --seed 9");
  CHECK(reseeded.exit_code == 0);
  CHECK(reseeded.contains("seed: 9"));
}

TEST_CASE("bench reports latency percentiles and cache stats") {
  neurogate::harness::ScenarioSpec spec;
  spec.trials = 8;
  spec.dwell_frames = 2;
  spec.snr_schedule_db = {10.0};
  spec.repetitions = 1;
  spec.channels = 4;
  spec.emit_windows = false;
  spec.seed = 3;
  const fs::path scen = work_dir() / "bench.json";
  neurogate::harness::save_scenario(spec, scen.string());

  const CmdResult res = run_cli("bench " + scen.string() + " --steps 300");
  CHECK(res.exit_code == 0);
  CHECK(res.contains("steps 300"));
  CHECK(res.contains("p99"));
  CHECK(res.contains("throughput"));
  CHECK(res.contains("plan cache:"));
}

TEST_CASE("replay-verify flags tampered traces") {
  const fs::path trace = work_dir() / "base.jsonl";
  if (!fs::exists(trace)) {
    REQUIRE(run_cli("monitor " + fixture_path() + " --out " + trace.string())
                .exit_code == 0);
  }
  const std::string original = slurp(trace);

  SUBCASE("a flipped verdict diverges") {
    std::string text = original;
    const auto pos = text.find("\"verdict\":\"HALT\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("\"verdict\":\"HALT\"").size(),
                 "\"verdict\":\"EXECUTE\"");
    const fs::path tampered = work_dir() / "tampered.jsonl";
    spit(tampered, text);

    const CmdResult res = run_cli("replay-verify " + tampered.string());
    CHECK(res.exit_code == 1);
    CHECK(res.contains("diverge"));
    CHECK(res.contains("recorded:"));
  }

  SUBCASE("a foreign domain hash is rejected before replaying") {
    const auto lines = lines_of(original);
    REQUIRE(!lines.empty());
    ordered_json header = ordered_json::parse(lines.front());
    header["domain_hash"] = header.at("domain_hash").get<std::uint64_t>() ^ 1u;
    std::string text = header.dump();
    text += '\n';
    for (std::size_t i = 1; i < lines.size(); ++i) {
      text += lines[i];
      text += '\n';
    }
    const fs::path tampered = work_dir() / "badhash.jsonl";
    spit(tampered, text);

    const CmdResult res = run_cli("replay-verify " + tampered.string());
    CHECK(res.exit_code == 1);
    CHECK(res.contains("domain hash mismatch"));
  }

  SUBCASE("a missing trace is an input error") {
    const CmdResult res = run_cli("replay-verify /no/such/trace.jsonl");
    CHECK(res.exit_code == 2);
    CHECK(res.contains("error:"));
  }
}
