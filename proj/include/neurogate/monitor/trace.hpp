#pragma once

#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <thread>

#include "neurogate/monitor/monitor.hpp"

namespace neurogate::monitor {

// One line of a session trace: the raw inputs, the measurements, the
// decision, the plan when one was synthesized, and step timing. Timing
// fields (t_us, latency_us) vary run to run; everything else must
// reproduce exactly on replay.
struct TraceRecord {
  std::uint64_t frame{0};
  std::uint64_t t_us{0};  // wall clock since session start
  std::array<double, 4> posterior_raw{};
  std::array<double, 4> posterior_cal{};
  std::optional<double> artifact_score;
  std::optional<int> label;  // intended action when known

  double entropy{0.0};
  double omega{0.0};
  double max_prob{0.0};
  int intent{0};

  std::string verdict;
  std::string cause;
  std::string action;
  std::string detail;
  std::optional<std::string> plan_status;  // set iff planning ran
  std::vector<std::string> plan;           // ground action names
  double latency_us{0.0};
};

struct TraceHeader {
  MonitorConfig cfg;
  AblationMask mask;
  planner::TaskContext ctx;
  planner::SearchLimits limits;
  std::uint64_t domain_hash{0};
  std::uint64_t init_hash{0};
  std::uint64_t seed{0};
};

struct Trace {
  TraceHeader header;
  std::vector<TraceRecord> records;
};

// Serializes records as JSON lines behind a bounded queue and a writer
// thread, so a 100 Hz loop never waits on disk unless the queue is full
// (then it blocks; records are never dropped).
class TraceWriter {
 public:
  TraceWriter(const std::string& path, const TraceHeader& header,
              std::size_t queue_capacity = 4096);
  ~TraceWriter();

  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void write(const TraceRecord& rec);
  // Flushes the queue and closes the file. Idempotent.
  void close();

 private:
  void run();

  std::ofstream out_;
  std::size_t capacity_;
  std::deque<std::string> queue_;
  std::mutex mu_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  bool done_{false};
  std::thread worker_;
};

std::string trace_header_line(const TraceHeader& h);
std::string trace_record_line(const TraceRecord& r);
// The record without its timing fields, canonically serialized. Replay
// equality is defined over these bytes.
std::string decision_line(const TraceRecord& r);

// Parses a trace written by TraceWriter. Throws std::runtime_error with
// "path:line: message" on malformed input.
Trace read_trace(const std::string& path);

}  // namespace neurogate::monitor
