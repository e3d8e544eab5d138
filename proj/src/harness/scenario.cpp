#include "neurogate/harness/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace neurogate::harness {

using ordered_json = nlohmann::ordered_json;

void ScenarioSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("scenario needs at least one trial");
  if (dwell_frames < 1) throw std::invalid_argument("scenario dwell must be at least one frame");
  if (snr_schedule_db.empty()) throw std::invalid_argument("scenario needs at least one SNR bin");
  if (repetitions < 1) throw std::invalid_argument("scenario needs at least one repetition");
  if (channels < 1) throw std::invalid_argument("scenario needs at least one channel");
  if (!(sample_rate_hz > 0)) throw std::invalid_argument("scenario sample rate must be positive");
  if (!(window_seconds > 0 && stride_seconds > 0))
    throw std::invalid_argument("scenario window and stride must be positive");
  if (!(burst_power_ratio >= 0)) throw std::invalid_argument("burst power ratio must be nonnegative");
  if (!(confidence_only_tau >= 0 && confidence_only_tau <= 1))
    throw std::invalid_argument("confidence_only_tau must lie in [0, 1]");
  decoder.validate();
  config.validate();
}

std::string scenario_to_json(const ScenarioSpec& s) {
  ordered_json j;
  j["trials"] = s.trials;
  j["dwell_frames"] = s.dwell_frames;
  j["snr_schedule_db"] = s.snr_schedule_db;
  j["repetitions"] = s.repetitions;
  j["seed"] = s.seed;
  j["signal"] = {
      {"channels", s.channels},
      {"sample_rate_hz", s.sample_rate_hz},
      {"window_seconds", s.window_seconds},
      {"stride_seconds", s.stride_seconds},
      {"emit_windows", s.emit_windows},
      {"burst_power_ratio", s.burst_power_ratio},
      {"w_white", s.w_white},
      {"w_pink", s.w_pink},
      {"w_emg", s.w_emg},
  };
  j["confidence_only_tau"] = s.confidence_only_tau;
  j["decoder"] = {
      {"base_accuracy", s.decoder.base_accuracy},
      {"accuracy_loss_per_db", s.decoder.accuracy_loss_per_db},
      {"ref_snr_db", s.decoder.ref_snr_db},
      {"chance_accuracy", s.decoder.chance_accuracy},
      {"overconfidence_gap", s.decoder.overconfidence_gap},
      {"diffuse_rate", s.decoder.diffuse_rate},
      {"osc_share", s.decoder.osc_share},
      {"diffuse_flip_prob", s.decoder.diffuse_flip_prob},
      {"mu_conf_wrong", s.decoder.mu_conf_wrong},
      {"mu_osc", s.decoder.mu_osc},
      {"mu_diffuse", s.decoder.mu_diffuse},
      {"kappa_locked", s.decoder.kappa_locked},
      {"kappa_conf_wrong", s.decoder.kappa_conf_wrong},
      {"kappa_osc", s.decoder.kappa_osc},
      {"kappa_diffuse", s.decoder.kappa_diffuse},
  };
  j["monitor"] = {
      {"tau_h", s.config.tau_h},
      {"tau_a", s.config.tau_a},
      {"tau_omega", s.config.tau_omega},
      {"alpha_m", s.config.alpha_m},
      {"k_frames", s.config.k_frames},
      {"warmup_halt", s.config.warmup_halt},
  };
  j["mask"] = {
      {"entropy", s.mask.entropy},
      {"artifact", s.mask.artifact},
      {"oscillation", s.mask.oscillation},
      {"calibration", s.mask.calibration},
      {"logical", s.mask.logical},
  };
  j["limits"] = {
      {"max_depth", s.limits.max_depth},
      {"max_visited", s.limits.max_visited},
  };
  j["domain_path"] = s.domain_path;
  j["problem_path"] = s.problem_path;
  return j.dump(2) + "\n";
}

namespace {

template <typename T>
void get_if_present(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ScenarioSpec scenario_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw std::runtime_error(std::string("scenario: ") + e.what());
  }

  ScenarioSpec s;
  try {
    get_if_present(j, "trials", s.trials);
    get_if_present(j, "dwell_frames", s.dwell_frames);
    get_if_present(j, "snr_schedule_db", s.snr_schedule_db);
    get_if_present(j, "repetitions", s.repetitions);
    get_if_present(j, "seed", s.seed);
    if (j.contains("signal")) {
      const auto& g = j.at("signal");
      get_if_present(g, "channels", s.channels);
      get_if_present(g, "sample_rate_hz", s.sample_rate_hz);
      get_if_present(g, "window_seconds", s.window_seconds);
      get_if_present(g, "stride_seconds", s.stride_seconds);
      get_if_present(g, "emit_windows", s.emit_windows);
      get_if_present(g, "burst_power_ratio", s.burst_power_ratio);
      get_if_present(g, "w_white", s.w_white);
      get_if_present(g, "w_pink", s.w_pink);
      get_if_present(g, "w_emg", s.w_emg);
    }
    get_if_present(j, "confidence_only_tau", s.confidence_only_tau);
    if (j.contains("decoder")) {
      const auto& d = j.at("decoder");
      get_if_present(d, "base_accuracy", s.decoder.base_accuracy);
      get_if_present(d, "accuracy_loss_per_db", s.decoder.accuracy_loss_per_db);
      get_if_present(d, "ref_snr_db", s.decoder.ref_snr_db);
      get_if_present(d, "chance_accuracy", s.decoder.chance_accuracy);
      get_if_present(d, "overconfidence_gap", s.decoder.overconfidence_gap);
      get_if_present(d, "diffuse_rate", s.decoder.diffuse_rate);
      get_if_present(d, "osc_share", s.decoder.osc_share);
      get_if_present(d, "diffuse_flip_prob", s.decoder.diffuse_flip_prob);
      get_if_present(d, "mu_conf_wrong", s.decoder.mu_conf_wrong);
      get_if_present(d, "mu_osc", s.decoder.mu_osc);
      get_if_present(d, "mu_diffuse", s.decoder.mu_diffuse);
      get_if_present(d, "kappa_locked", s.decoder.kappa_locked);
      get_if_present(d, "kappa_conf_wrong", s.decoder.kappa_conf_wrong);
      get_if_present(d, "kappa_osc", s.decoder.kappa_osc);
      get_if_present(d, "kappa_diffuse", s.decoder.kappa_diffuse);
    }
    if (j.contains("monitor")) {
      const auto& m = j.at("monitor");
      get_if_present(m, "tau_h", s.config.tau_h);
      get_if_present(m, "tau_a", s.config.tau_a);
      get_if_present(m, "tau_omega", s.config.tau_omega);
      get_if_present(m, "alpha_m", s.config.alpha_m);
      get_if_present(m, "k_frames", s.config.k_frames);
      get_if_present(m, "warmup_halt", s.config.warmup_halt);
    }
    if (j.contains("mask")) {
      const auto& m = j.at("mask");
      get_if_present(m, "entropy", s.mask.entropy);
      get_if_present(m, "artifact", s.mask.artifact);
      get_if_present(m, "oscillation", s.mask.oscillation);
      get_if_present(m, "calibration", s.mask.calibration);
      get_if_present(m, "logical", s.mask.logical);
    }
    if (j.contains("limits")) {
      const auto& l = j.at("limits");
      get_if_present(l, "max_depth", s.limits.max_depth);
      get_if_present(l, "max_visited", s.limits.max_visited);
    }
    get_if_present(j, "domain_path", s.domain_path);
    get_if_present(j, "problem_path", s.problem_path);
  } catch (const ordered_json::exception& e) {
    throw std::runtime_error(std::string("scenario: ") + e.what());
  }

  s.decoder.rng_seed = s.seed;
  s.validate();
  return s;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return scenario_from_json(ss.str());
}

void save_scenario(const ScenarioSpec& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write scenario file: " + path);
  f << scenario_to_json(s);
}

const std::string& default_domain_text() {
  static const std::string text = R"PDDL((define (domain assistive-robot)
  (:requirements :strips :typing)
  (:types
      location - object
      item - object
      robot - object
      orientation - object
    )
  (:predicates
      (at ?r - robot ?l - location)
      (holding ?r - robot ?i - item)
      (empty-handed ?r - robot)
      (item-at ?i - item ?l - location)
      (oriented ?r - robot ?o - orientation)
      (item-oriented ?i - item ?o - orientation)
      (reachable ?l - location)
      (safe-configuration)
      (valid-transition ?from ?to - location)
      (valid-rotation ?from ?to - orientation)
    )
  (:action grasp
      :parameters (?r - robot ?i - item ?l - location)
      :precondition (and
        (at ?r ?l)
        (item-at ?i ?l)
        (empty-handed ?r)
      )
      :effect (and
        (holding ?r ?i)
        (not (empty-handed ?r))
        (not (item-at ?i ?l))
      )
    )
  (:action release
      :parameters (?r - robot ?i - item  ?l - location)
      :precondition (and
        (at ?r ?l)
        (holding ?r ?i)
      )
      :effect (and
        (item-at ?i ?l)
        (empty-handed ?r)
        (not (holding ?r ?i))
      )
    )
  (:action move_to
      :parameters (?r - robot ?l - location)
      :precondition (and
        (reachable ?l)
        (safe-configuration)
      )
      :effect (at ?r ?l)
    )
  (:action rotate
      :parameters (?r - robot ?from ?to - orientation)
      :precondition (and
        (oriented ?r ?from)
        (valid-rotation ?from ?to)
        (safe-configuration)
      )
      :effect (and
        (oriented ?r ?to)
        (not (oriented ?r ?from))
    )
  )
)
)PDDL";
  return text;
}

const std::string& default_problem_text() {
  static const std::string text = R"PDDL(; Desk-scale pick-and-place task: one arm, one cup, two reachable
; surfaces, two valid orientations.
(define (problem desk-task)
  (:domain assistive-robot)
  (:objects
      r1 - robot
      cup - item
      table shelf - location
      up down - orientation
    )
  (:init
      (at r1 table)
      (item-at cup table)
      (empty-handed r1)
      (oriented r1 up)
      (reachable table)
      (reachable shelf)
      (safe-configuration)
      (valid-transition table shelf)
      (valid-transition shelf table)
      (valid-rotation up down)
      (valid-rotation down up)
    )
  (:goal (and
      (holding r1 cup)
    ))
)
)PDDL";
  return text;
}

planner::TaskContext default_context(const planner::GroundModel& model) {
  planner::TaskContext ctx;
  const auto first_of = [&](const char* type) -> std::optional<std::string> {
    const auto objs = model.objects_of_type(type);
    if (objs.empty()) return std::nullopt;
    return objs.front();
  };
  ctx.robot = first_of("robot");
  ctx.item = first_of("item");
  ctx.location = first_of("location");
  ctx.orientation = first_of("orientation");
  return ctx;
}

TaskSetup build_task(const ScenarioSpec& s) {
  planner::DomainDef domain = s.domain_path.empty()
                                  ? planner::parse_domain(default_domain_text())
                                  : planner::load_domain(s.domain_path);
  planner::ProblemDef problem = s.problem_path.empty()
                                    ? planner::parse_problem(default_problem_text())
                                    : planner::load_problem(s.problem_path);
  if (problem.domain_name != domain.name)
    throw std::runtime_error("problem '" + problem.name + "' targets domain '" +
                             problem.domain_name + "', not '" + domain.name + "'");

  TaskSetup t;
  t.domain_hash = planner::domain_hash(domain);
  t.model = std::make_shared<planner::GroundModel>(std::move(domain), problem.objects);
  t.initial_state = t.model->state_from_literals(problem.init);
  t.context = default_context(*t.model);
  return t;
}

}  // namespace neurogate::harness
