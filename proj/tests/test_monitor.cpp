#include <stdexcept>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "neurogate/monitor/session.hpp"
#include "neurogate/planner/parser.hpp"

using namespace neurogate;
using namespace neurogate::monitor;

namespace {

const std::string kDataDir = NEUROGATE_DATA_DIR;

struct Fixture {
  std::shared_ptr<planner::GroundModel> model;
  planner::WorldState init;
  planner::TaskContext ctx{"r1", "cup", "shelf", "down"};
  std::uint64_t domain_hash{0};
};

Fixture desk(const std::vector<planner::Literal>& drop = {}) {
  auto d = planner::load_domain(kDataDir + "/assistive_robot.pddl");
  auto p = planner::load_problem(kDataDir + "/desk_task.pddl");
  for (const auto& lit : drop) std::erase(p.init, lit);
  Fixture f;
  f.domain_hash = planner::domain_hash(d);
  f.model = std::make_shared<planner::GroundModel>(std::move(d), p.objects);
  f.init = f.model->state_from_literals(p.init);
  return f;
}

intent::IntentPosterior confident(intent::Action a, double c = 0.9) {
  std::array<double, 4> p{};
  p.fill((1.0 - c) / 3.0);
  p[std::size_t(a)] = c;
  return intent::IntentPosterior(p);
}

FrameInput frame(std::uint64_t i, const intent::IntentPosterior& p) {
  FrameInput in;
  in.index = i;
  in.posterior = p;
  return in;
}

}  // namespace

TEST_CASE("first failing cause mapping") {
  std::array<bool, 6> all_pass;
  all_pass.fill(true);
  CHECK(first_failing_cause(all_pass) == Cause::None);

  const Cause expected[6] = {Cause::LowConfidence,   Cause::HighArtifact,
                             Cause::HighOscillation, Cause::LogicalPhi1,
                             Cause::LogicalPhi2,     Cause::LogicalPhi3};
  for (int fail = 0; fail < 6; ++fail) {
    auto passed = all_pass;
    passed[std::size_t(fail)] = false;
    CHECK(first_failing_cause(passed) == expected[fail]);
    // later failures never mask an earlier one
    for (int later = fail + 1; later < 6; ++later) {
      auto both = passed;
      both[std::size_t(later)] = false;
      CHECK(first_failing_cause(both) == expected[fail]);
    }
  }
}

TEST_CASE("cause and verdict names") {
  CHECK(std::string(to_string(Verdict::Execute)) == "EXECUTE");
  CHECK(std::string(to_string(Verdict::Halt)) == "HALT");
  CHECK(std::string(to_string(Cause::Warmup)) == "warmup");
  CHECK(std::string(to_string(Cause::LowConfidence)) == "low-confidence");
  CHECK(std::string(to_string(Cause::LogicalPhi3)) == "logical-phi3");
}

TEST_CASE("monitor construction guards") {
  auto f = desk();
  CHECK_THROWS_AS(Monitor(nullptr, f.init, f.ctx, MonitorConfig{}), std::invalid_argument);
  MonitorConfig bad;
  bad.tau_h = 1.5;
  CHECK_THROWS_AS(Monitor(f.model, f.init, f.ctx, bad), std::invalid_argument);
  MonitorConfig zero;
  zero.tau_h = 0.0;  // halting on every frame is a valid configuration
  CHECK_NOTHROW(Monitor(f.model, f.init, f.ctx, zero));
}

TEST_CASE("warm-up halts until the history fills") {
  auto f = desk();
  Monitor mon(f.model, f.init, f.ctx, MonitorConfig{});
  const auto fp0 = mon.state().fingerprint();

  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto r = mon.step(frame(i, confident(intent::Action::Grasp)));
    CHECK(r.decision.verdict == Verdict::Halt);
    CHECK(r.decision.cause == Cause::Warmup);
    CHECK(r.decision.action.empty());
    CHECK(r.decision.detail.find("history") != std::string::npos);
    CHECK(!r.planned);
  }
  CHECK(mon.state().fingerprint() == fp0);

  const auto r = mon.step(frame(10, confident(intent::Action::Grasp)));
  CHECK(r.decision.verdict == Verdict::Execute);
  CHECK(r.decision.cause == Cause::None);
  CHECK(r.decision.action == "(grasp r1 cup table)");
  CHECK(r.planned);
  REQUIRE(r.plan.found());
  CHECK(r.plan.steps.size() == 1);
  CHECK(mon.state().contains(
      *f.model->find_atom("holding", std::array<std::string, 2>{"r1", "cup"})));
}

TEST_CASE("execution consumes one plan step per frame") {
  auto f = desk();
  MonitorConfig cfg;
  cfg.warmup_halt = false;
  Monitor mon(f.model, f.init, f.ctx, cfg);

  // RELEASE onto the shelf needs grasp, move_to, release in that order
  const char* expected[] = {"(grasp r1 cup table)", "(move_to r1 shelf)",
                            "(release r1 cup shelf)"};
  for (int i = 0; i < 3; ++i) {
    const auto r = mon.step(frame(std::uint64_t(i), confident(intent::Action::Release)));
    CHECK(r.decision.verdict == Verdict::Execute);
    CHECK(r.decision.action == expected[i]);
    CHECK(r.plan.steps.size() == std::size_t(3 - i));
  }

  // goal reached: further frames verify but execute nothing
  const auto done = mon.step(frame(3, confident(intent::Action::Release)));
  CHECK(done.decision.verdict == Verdict::Execute);
  CHECK(done.decision.action.empty());
  CHECK(done.decision.detail == "goal already satisfied");
}

TEST_CASE("plan cache keys on goal and state") {
  auto f = desk();
  MonitorConfig cfg;
  cfg.warmup_halt = false;
  Monitor mon(f.model, f.init, f.ctx, cfg);

  // frame 1 plans for GRASP and executes; state changes, so no reuse yet
  mon.step(frame(0, confident(intent::Action::Grasp)));
  CHECK(mon.plan_cache_size() == 1);
  CHECK(mon.plan_cache_hits() == 0);

  // goal satisfied now: a fresh (goal, state) entry
  mon.step(frame(1, confident(intent::Action::Grasp)));
  CHECK(mon.plan_cache_size() == 2);
  CHECK(mon.plan_cache_hits() == 0);

  // identical goal and state: served from the cache
  mon.step(frame(2, confident(intent::Action::Grasp)));
  CHECK(mon.plan_cache_size() == 2);
  CHECK(mon.plan_cache_hits() == 1);
}

TEST_CASE("entropy gate") {
  auto f = desk();
  MonitorConfig cfg;
  cfg.warmup_halt = false;
  Monitor mon(f.model, f.init, f.ctx, cfg);

  const auto r = mon.step(frame(0, intent::IntentPosterior{}));  // uniform
  CHECK(r.decision.verdict == Verdict::Halt);
  CHECK(r.decision.cause == Cause::LowConfidence);
  CHECK(r.m.entropy == 1.0);
  CHECK(r.decision.detail.find("entropy") != std::string::npos);

  SUBCASE("a zero ceiling halts even confident frames") {
    MonitorConfig zero = cfg;
    zero.tau_h = 0.0;
    Monitor strict(f.model, f.init, f.ctx, zero);
    const auto s = strict.step(frame(0, confident(intent::Action::Grasp, 0.99)));
    CHECK(s.decision.cause == Cause::LowConfidence);
  }

  SUBCASE("masked off, the uniform frame reaches the planner") {
    AblationMask mask;
    mask.entropy = false;
    Monitor loose(f.model, f.init, f.ctx, cfg, std::nullopt, mask);
    const auto s = loose.step(frame(0, intent::IntentPosterior{}));
    CHECK(s.decision.verdict == Verdict::Execute);  // argmax ties to GRASP
    CHECK(s.decision.action == "(grasp r1 cup table)");
  }
}

TEST_CASE("artifact gate") {
  auto f = desk();
  MonitorConfig cfg;
  cfg.warmup_halt = false;

  SUBCASE("precomputed score at or above the ceiling halts") {
    Monitor mon(f.model, f.init, f.ctx, cfg);
    auto in = frame(0, confident(intent::Action::Grasp));
    in.artifact_score = 5.0;
    const auto r = mon.step(in);
    CHECK(r.decision.cause == Cause::HighArtifact);
    CHECK(r.m.artifact == 5.0);
    CHECK(r.decision.detail.find("artifact") != std::string::npos);

    auto calm = frame(1, confident(intent::Action::Grasp));
    calm.artifact_score = 1.0;
    CHECK(mon.step(calm).decision.verdict == Verdict::Execute);
  }

  SUBCASE("an unmeasured artifact passes") {
    Monitor mon(f.model, f.init, f.ctx, cfg);
    const auto r = mon.step(frame(0, confident(intent::Action::Grasp)));
    CHECK(!r.m.artifact.has_value());
    CHECK(r.decision.verdict == Verdict::Execute);
  }

  SUBCASE("masked off, a hot score passes") {
    AblationMask mask;
    mask.artifact = false;
    Monitor mon(f.model, f.init, f.ctx, cfg, std::nullopt, mask);
    auto in = frame(0, confident(intent::Action::Grasp));
    in.artifact_score = 50.0;
    CHECK(mon.step(in).decision.verdict == Verdict::Execute);
  }

  SUBCASE("windows require baseline statistics") {
    Monitor mon(f.model, f.init, f.ctx, cfg);
    signal::EegWindow w;
    w.m = signal::ChannelMatrix::zeros(2, 16);
    w.sample_rate_hz = 250.0;
    auto in = frame(0, confident(intent::Action::Grasp));
    in.window = &w;
    CHECK_THROWS_AS(mon.step(in), std::invalid_argument);

    signal::BaselineStats base;
    base.mean = {0.0, 0.0, 0.0};
    base.stddev = {1.0, 1.0, 1.0};
    Monitor with_base(f.model, f.init, f.ctx, cfg, base);
    CHECK_THROWS_AS(with_base.step(in), std::invalid_argument);  // channel mismatch
  }
}

TEST_CASE("oscillation gate") {
  auto f = desk();
  Monitor mon(f.model, f.init, f.ctx, MonitorConfig{});

  // alternate confidently through the warm-up window; the history is full
  // of flips when the warm-up gate lifts
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto a = (i % 2) ? intent::Action::Release : intent::Action::Grasp;
    CHECK(mon.step(frame(i, confident(a))).decision.cause == Cause::Warmup);
  }
  const auto r = mon.step(frame(10, confident(intent::Action::Grasp)));
  CHECK(r.decision.verdict == Verdict::Halt);
  CHECK(r.decision.cause == Cause::HighOscillation);
  CHECK(r.m.omega == 1.0);
  CHECK(r.decision.detail.find("oscillation") != std::string::npos);

  SUBCASE("masked off, the same stream executes") {
    AblationMask mask;
    mask.oscillation = false;
    Monitor loose(f.model, f.init, f.ctx, MonitorConfig{}, std::nullopt, mask);
    for (std::uint64_t i = 0; i < 10; ++i) {
      const auto a = (i % 2) ? intent::Action::Release : intent::Action::Grasp;
      loose.step(frame(i, confident(a)));
    }
    const auto s = loose.step(frame(10, confident(intent::Action::Grasp)));
    CHECK(s.decision.verdict == Verdict::Execute);
  }
}

TEST_CASE("calibration shapes the working posterior") {
  auto f = desk();
  MonitorConfig cfg;
  cfg.warmup_halt = false;

  Monitor mon(f.model, f.init, f.ctx, cfg);
  const auto p = confident(intent::Action::Grasp);
  const auto r = mon.step(frame(0, p));
  CHECK(r.posterior_raw == p.probs());
  for (int i = 0; i < 4; ++i)
    CHECK(r.posterior_cal[std::size_t(i)] ==
          doctest::Approx(0.8 * p.probs()[std::size_t(i)] + 0.05).epsilon(1e-15));

  AblationMask mask;
  mask.calibration = false;
  Monitor raw(f.model, f.init, f.ctx, cfg, std::nullopt, mask);
  const auto s = raw.step(frame(0, p));
  CHECK(s.posterior_cal == s.posterior_raw);
}

TEST_CASE("logical gate causes") {
  MonitorConfig cfg;
  cfg.warmup_halt = false;

  SUBCASE("ungroundable goal halts as phi1") {
    auto f = desk();
    planner::TaskContext no_item{"r1", std::nullopt, "shelf", "down"};
    Monitor mon(f.model, f.init, no_item, cfg);
    const auto r = mon.step(frame(0, confident(intent::Action::Grasp)));
    CHECK(r.decision.cause == Cause::LogicalPhi1);
    CHECK(r.decision.detail.find("ungroundable") != std::string::npos);
    CHECK(!r.planned);
  }

  SUBCASE("unreachable goal halts as phi1") {
    auto f = desk({planner::Literal{"safe-configuration", {}}});
    Monitor mon(f.model, f.init, f.ctx, cfg);
    const auto r = mon.step(frame(0, confident(intent::Action::MoveTo)));
    CHECK(r.decision.cause == Cause::LogicalPhi1);
    CHECK(r.decision.detail.find("no plan") != std::string::npos);
    CHECK(r.planned);
    CHECK(r.plan.status == planner::PlanStatus::NoPlan);
  }

  SUBCASE("exhausted search budget halts as phi3") {
    auto f = desk();
    planner::SearchLimits tight;
    tight.max_visited = 1;
    Monitor mon(f.model, f.init, f.ctx, cfg, std::nullopt, AblationMask{}, tight);
    const auto r = mon.step(frame(0, confident(intent::Action::MoveTo)));
    CHECK(r.decision.cause == Cause::LogicalPhi3);
    CHECK(r.decision.detail.find("budget") != std::string::npos);
  }

  SUBCASE("masked off, the intent passes straight through") {
    auto f = desk({planner::Literal{"safe-configuration", {}}});
    AblationMask mask;
    mask.logical = false;
    Monitor mon(f.model, f.init, f.ctx, cfg, std::nullopt, mask);
    const auto fp0 = mon.state().fingerprint();
    const auto r = mon.step(frame(0, confident(intent::Action::MoveTo)));
    CHECK(r.decision.verdict == Verdict::Execute);
    CHECK(r.decision.action.empty());
    CHECK(!r.planned);
    CHECK(mon.state().fingerprint() == fp0);
  }
}

TEST_CASE("halts leave the world state untouched") {
  auto f = desk();
  Monitor mon(f.model, f.init, f.ctx, MonitorConfig{});
  const auto fp0 = mon.state().fingerprint();
  mon.step(frame(0, intent::IntentPosterior{}));
  auto hot = frame(1, confident(intent::Action::Grasp));
  hot.artifact_score = 99.0;
  mon.step(hot);
  CHECK(mon.state().fingerprint() == fp0);
  CHECK(mon.frames_seen() == 2);
}

TEST_CASE("session accounting") {
  auto f = desk();
  Monitor mon(f.model, f.init, f.ctx, MonitorConfig{});

  std::vector<SessionFrame> frames;
  for (int i = 0; i < 30; ++i) {
    SessionFrame sf;
    sf.posterior = confident(intent::Action::Grasp);
    sf.label = (i < 25) ? intent::Action::Grasp : intent::Action::Release;
    frames.push_back(sf);
  }

  const auto res = run_session(mon, frames, nullptr, true);
  CHECK(res.frames == 30);
  CHECK(res.halted == 10);
  CHECK(res.executed == 20);
  CHECK(res.rejected == 0);
  CHECK(res.steps.size() == 30);
  CHECK(res.ledger.fp == 10);  // warm-up interventions on correct decodes
  CHECK(res.ledger.tn == 15);
  CHECK(res.ledger.fn == 5);
  CHECK(res.ledger.tp == 0);
  CHECK(res.ledger.cause_counts.at("warmup") == 10);
  CHECK(res.final_state == mon.state());
  CHECK(res.latency.max_us > 0.0);

  Monitor again(f.model, f.init, f.ctx, MonitorConfig{});
  std::vector<SessionFrame> unlabeled(3);
  for (auto& sf : unlabeled) sf.posterior = confident(intent::Action::Grasp);
  const auto r2 = run_session(again, unlabeled);
  CHECK(r2.ledger.labeled() == 0);
  CHECK(r2.ledger.unlabeled == 3);
  CHECK(r2.steps.empty());
}

TEST_CASE("latency summary uses nearest-rank percentiles") {
  std::vector<double> us(100);
  for (int i = 0; i < 100; ++i) us[std::size_t(i)] = double(100 - i);  // unsorted
  const auto s = summarize_latency(us);
  CHECK(s.p50_us == 50.0);
  CHECK(s.p95_us == 95.0);
  CHECK(s.p99_us == 99.0);
  CHECK(s.max_us == 100.0);
  CHECK(s.decisions_per_sec == doctest::Approx(1e6 / 50.5));
  CHECK(summarize_latency({}).max_us == 0.0);
}

namespace {

Trace write_and_read_trace(const Fixture& f, const std::vector<SessionFrame>& frames,
                           const std::string& path, MonitorConfig cfg = {},
                           planner::SearchLimits limits = {}) {
  Monitor mon(f.model, f.init, f.ctx, cfg, std::nullopt, AblationMask{}, limits);
  TraceHeader header;
  header.cfg = cfg;
  header.ctx = f.ctx;
  header.limits = limits;
  header.domain_hash = f.domain_hash;
  header.init_hash = f.init.fingerprint();
  header.seed = 7;
  {
    TraceWriter writer(path, header, 8);  // small queue to exercise blocking
    run_session(mon, frames, &writer);
  }
  return read_trace(path);
}

}  // namespace

TEST_CASE("traces round trip and replay byte for byte") {
  auto f = desk();
  std::vector<SessionFrame> frames;
  for (int i = 0; i < 24; ++i) {
    SessionFrame sf;
    switch (i % 4) {
      case 0: sf.posterior = confident(intent::Action::Grasp); break;
      case 1: sf.posterior = intent::IntentPosterior{}; break;
      case 2:
        sf.posterior = confident(intent::Action::Release, 0.97);
        sf.artifact_score = 6.5;
        break;
      default: sf.posterior = confident(intent::Action::MoveTo, 0.61); break;
    }
    if (i % 3 == 0) sf.label = intent::Action::Grasp;
    frames.push_back(sf);
  }

  const std::string path = "/tmp/neurogate_test_trace.jsonl";
  const auto trace = write_and_read_trace(f, frames, path);

  REQUIRE(trace.records.size() == 24);
  CHECK(trace.header.cfg.tau_h == 0.75);
  CHECK(trace.header.cfg.k_frames == 10);
  CHECK(trace.header.mask.all_on());
  CHECK(trace.header.limits.max_depth == 64);
  CHECK(trace.header.limits.max_visited == 200000);
  CHECK(trace.header.domain_hash == f.domain_hash);
  CHECK(trace.header.init_hash == f.init.fingerprint());
  CHECK(trace.header.seed == 7);
  REQUIRE(trace.header.ctx.item.has_value());
  CHECK(*trace.header.ctx.item == "cup");

  CHECK(trace.records[0].cause == "warmup");
  CHECK(trace.records[2].artifact_score == 6.5);
  CHECK(trace.records[0].label.has_value());
  CHECK(!trace.records[1].label.has_value());

  const auto replay = replay_trace(trace, f.model, f.init);
  CHECK(replay.frames == 24);
  CHECK(replay.ok());

  SUBCASE("tampered records are caught") {
    auto bad = trace;
    bad.records[12].verdict = bad.records[12].verdict == "HALT" ? "EXECUTE" : "HALT";
    const auto res = replay_trace(bad, f.model, f.init);
    REQUIRE(res.mismatches.size() == 1);
    CHECK(res.mismatches[0].frame == 12);
    CHECK(res.mismatches[0].recorded != res.mismatches[0].replayed);
  }

  SUBCASE("decision lines ignore timing fields") {
    auto a = trace.records[5];
    auto b = a;
    b.t_us += 12345;
    b.latency_us *= 3.0;
    CHECK(decision_line(a) == decision_line(b));
    b.detail += "x";
    CHECK(decision_line(a) != decision_line(b));
  }
}

TEST_CASE("replay honors recorded search limits") {
  auto f = desk();
  MonitorConfig cfg;
  cfg.warmup_halt = false;
  planner::SearchLimits tight;
  tight.max_visited = 1;

  std::vector<SessionFrame> frames(4);
  for (auto& sf : frames) sf.posterior = confident(intent::Action::MoveTo);

  const std::string path = "/tmp/neurogate_test_trace_limits.jsonl";
  const auto trace = write_and_read_trace(f, frames, path, cfg, tight);
  REQUIRE(trace.records.size() == 4);
  CHECK(trace.records[0].cause == "logical-phi3");
  CHECK(trace.header.limits.max_visited == 1);

  const auto replay = replay_trace(trace, f.model, f.init);
  CHECK(replay.ok());
}

TEST_CASE("trace parsing rejects malformed input") {
  CHECK_THROWS_AS(read_trace("/nonexistent/trace.jsonl"), std::runtime_error);

  const std::string path = "/tmp/neurogate_test_trace_bad.jsonl";
  std::ofstream(path) << "not json\n";
  CHECK_THROWS_WITH_AS(read_trace(path), doctest::Contains(":1"), std::runtime_error);
}
