#include "neurogate/monitor/trace.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace neurogate::monitor {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json ctx_json(const planner::TaskContext& ctx) {
  ordered_json j = ordered_json::object();
  j["robot"] = ctx.robot ? ordered_json(*ctx.robot) : ordered_json(nullptr);
  j["item"] = ctx.item ? ordered_json(*ctx.item) : ordered_json(nullptr);
  j["location"] = ctx.location ? ordered_json(*ctx.location) : ordered_json(nullptr);
  j["orientation"] = ctx.orientation ? ordered_json(*ctx.orientation) : ordered_json(nullptr);
  return j;
}

std::optional<std::string> opt_string(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

// Decision fields only; shared by the full line and the replay comparison
// so the two can never drift apart.
ordered_json decision_json(const TraceRecord& r) {
  ordered_json j;
  j["frame"] = r.frame;
  j["p"] = r.posterior_raw;
  j["p_cal"] = r.posterior_cal;
  j["artifact"] = r.artifact_score ? ordered_json(*r.artifact_score) : ordered_json(nullptr);
  j["label"] = r.label ? ordered_json(*r.label) : ordered_json(nullptr);
  j["entropy"] = r.entropy;
  j["omega"] = r.omega;
  j["max_prob"] = r.max_prob;
  j["intent"] = r.intent;
  j["verdict"] = r.verdict;
  j["cause"] = r.cause;
  j["action"] = r.action;
  j["detail"] = r.detail;
  j["plan_status"] = r.plan_status ? ordered_json(*r.plan_status) : ordered_json(nullptr);
  j["plan"] = r.plan;
  return j;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string trace_header_line(const TraceHeader& h) {
  ordered_json j;
  j["trace"] = "neurogate session v1";
  j["config"] = {
      {"tau_h", h.cfg.tau_h},
      {"tau_a", h.cfg.tau_a},
      {"tau_omega", h.cfg.tau_omega},
      {"alpha_m", h.cfg.alpha_m},
      {"k_frames", h.cfg.k_frames},
      {"warmup_halt", h.cfg.warmup_halt},
  };
  j["mask"] = {
      {"entropy", h.mask.entropy},
      {"artifact", h.mask.artifact},
      {"oscillation", h.mask.oscillation},
      {"calibration", h.mask.calibration},
      {"logical", h.mask.logical},
  };
  j["context"] = ctx_json(h.ctx);
  j["limits"] = {
      {"max_depth", h.limits.max_depth},
      {"max_visited", h.limits.max_visited},
  };
  j["domain_hash"] = h.domain_hash;
  j["init_hash"] = h.init_hash;
  j["seed"] = h.seed;
  return j.dump();
}

std::string decision_line(const TraceRecord& r) { return decision_json(r).dump(); }

std::string trace_record_line(const TraceRecord& r) {
  ordered_json j = decision_json(r);
  j["t_us"] = r.t_us;
  j["latency_us"] = r.latency_us;
  return j.dump();
}

TraceWriter::TraceWriter(const std::string& path, const TraceHeader& header,
                         std::size_t queue_capacity)
    : out_(path), capacity_(queue_capacity == 0 ? 1 : queue_capacity) {
  if (!out_) throw std::runtime_error("cannot open trace file: " + path);
  out_ << trace_header_line(header) << '\n';
  worker_ = std::thread([this] { run(); });
}

TraceWriter::~TraceWriter() { close(); }

void TraceWriter::write(const TraceRecord& rec) {
  std::string line = trace_record_line(rec);
  std::unique_lock lk(mu_);
  not_full_.wait(lk, [this] { return queue_.size() < capacity_ || done_; });
  if (done_) throw std::logic_error("write on closed trace");
  queue_.push_back(std::move(line));
  not_empty_.notify_one();
}

void TraceWriter::close() {
  {
    std::lock_guard lk(mu_);
    if (done_) return;
    done_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }
  if (worker_.joinable()) worker_.join();
  out_.flush();
  out_.close();
}

void TraceWriter::run() {
  for (;;) {
    std::string line;
    {
      std::unique_lock lk(mu_);
      not_empty_.wait(lk, [this] { return !queue_.empty() || done_; });
      if (queue_.empty()) return;  // done_ and drained
      line = std::move(queue_.front());
      queue_.pop_front();
      not_full_.notify_one();
    }
    out_ << line << '\n';
  }
}

Trace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);

  Trace t;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) fail(path, 1, "empty trace");
  ++lineno;
  try {
    const auto j = ordered_json::parse(line);
    if (j.value("trace", "") != std::string("neurogate session v1"))
      fail(path, lineno, "not a neurogate session trace");
    const auto& c = j.at("config");
    t.header.cfg.tau_h = c.at("tau_h").get<double>();
    t.header.cfg.tau_a = c.at("tau_a").get<double>();
    t.header.cfg.tau_omega = c.at("tau_omega").get<double>();
    t.header.cfg.alpha_m = c.at("alpha_m").get<double>();
    t.header.cfg.k_frames = c.at("k_frames").get<std::size_t>();
    t.header.cfg.warmup_halt = c.at("warmup_halt").get<bool>();
    const auto& m = j.at("mask");
    t.header.mask.entropy = m.at("entropy").get<bool>();
    t.header.mask.artifact = m.at("artifact").get<bool>();
    t.header.mask.oscillation = m.at("oscillation").get<bool>();
    t.header.mask.calibration = m.at("calibration").get<bool>();
    t.header.mask.logical = m.at("logical").get<bool>();
    const auto& x = j.at("context");
    t.header.ctx.robot = opt_string(x, "robot");
    t.header.ctx.item = opt_string(x, "item");
    t.header.ctx.location = opt_string(x, "location");
    t.header.ctx.orientation = opt_string(x, "orientation");
    const auto& l = j.at("limits");
    t.header.limits.max_depth = l.at("max_depth").get<std::size_t>();
    t.header.limits.max_visited = l.at("max_visited").get<std::size_t>();
    t.header.domain_hash = j.at("domain_hash").get<std::uint64_t>();
    t.header.init_hash = j.at("init_hash").get<std::uint64_t>();
    t.header.seed = j.at("seed").get<std::uint64_t>();
  } catch (const ordered_json::exception& e) {
    fail(path, lineno, e.what());
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    TraceRecord r;
    try {
      const auto j = ordered_json::parse(line);
      r.frame = j.at("frame").get<std::uint64_t>();
      r.t_us = j.at("t_us").get<std::uint64_t>();
      r.posterior_raw = j.at("p").get<std::array<double, 4>>();
      r.posterior_cal = j.at("p_cal").get<std::array<double, 4>>();
      if (!j.at("artifact").is_null()) r.artifact_score = j.at("artifact").get<double>();
      if (!j.at("label").is_null()) r.label = j.at("label").get<int>();
      r.entropy = j.at("entropy").get<double>();
      r.omega = j.at("omega").get<double>();
      r.max_prob = j.at("max_prob").get<double>();
      r.intent = j.at("intent").get<int>();
      r.verdict = j.at("verdict").get<std::string>();
      r.cause = j.at("cause").get<std::string>();
      r.action = j.at("action").get<std::string>();
      r.detail = j.at("detail").get<std::string>();
      if (!j.at("plan_status").is_null())
        r.plan_status = j.at("plan_status").get<std::string>();
      r.plan = j.at("plan").get<std::vector<std::string>>();
      r.latency_us = j.at("latency_us").get<double>();
    } catch (const ordered_json::exception& e) {
      fail(path, lineno, e.what());
    }
    t.records.push_back(std::move(r));
  }
  return t;
}

}  // namespace neurogate::monitor
