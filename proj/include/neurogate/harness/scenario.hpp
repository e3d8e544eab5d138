#pragma once

#include <memory>
#include <string>

#include "neurogate/harness/decoder.hpp"
#include "neurogate/monitor/config.hpp"
#include "neurogate/planner/goal.hpp"
#include "neurogate/planner/parser.hpp"
#include "neurogate/planner/search.hpp"
#include "neurogate/signal/types.hpp"

namespace neurogate::harness {

// One experiment's ingredients: trial budget, the SNR ramp, signal-shape
// parameters, the decoder model, and the gate configuration under test.
// Serialized as a single JSON document (see scenario_to_json).
struct ScenarioSpec {
  std::uint64_t trials{5000};  // total, split evenly across SNR bins
  std::size_t dwell_frames{10};
  std::vector<double> snr_schedule_db{20.0, 13.75, 7.5, 1.25, -5.0};
  std::size_t repetitions{5};
  std::uint64_t seed{42};

  std::size_t channels{8};
  double sample_rate_hz{250.0};
  double window_seconds{1.0};
  double stride_seconds{0.1};
  bool emit_windows{true};
  // Muscle-burst power relative to clean signal power during
  // artifact-corrupted trials. Real muscle artifacts dwarf cortical
  // signal, so the default sits well above 1.
  double burst_power_ratio{2.0};
  double w_white{0.7}, w_pink{0.2}, w_emg{0.1};

  double confidence_only_tau{0.5};

  SyntheticDecoderModel decoder;
  monitor::MonitorConfig config;
  monitor::AblationMask mask;
  planner::SearchLimits limits;

  // Empty paths select the built-in assistive-robot desk task.
  std::string domain_path;
  std::string problem_path;

  void validate() const;
};

std::string scenario_to_json(const ScenarioSpec& s);
ScenarioSpec scenario_from_json(const std::string& text);

ScenarioSpec load_scenario(const std::string& path);
void save_scenario(const ScenarioSpec& s, const std::string& path);

// The compiled-in desk task (kept textually identical to the files under
// data/; a test pins that).
const std::string& default_domain_text();
const std::string& default_problem_text();

struct TaskSetup {
  std::shared_ptr<planner::GroundModel> model;
  planner::WorldState initial_state;
  planner::TaskContext context;
  std::uint64_t domain_hash{0};
};

// Parses and grounds the scenario's domain/problem (built-in when paths
// are empty) and derives the default task context: the first declared
// object of each type.
TaskSetup build_task(const ScenarioSpec& s);
planner::TaskContext default_context(const planner::GroundModel& model);

}  // namespace neurogate::harness
