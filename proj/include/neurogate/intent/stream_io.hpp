#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "neurogate/intent/posterior.hpp"

namespace neurogate::intent {

struct PosteriorRecord {
  std::uint64_t frame{0};
  std::array<double, 4> p{};
  std::optional<Action> label;
};

struct RejectedLine {
  std::size_t line{0};
  std::string reason;
};

// Line-delimited decoder output:
//
//   # posterior stream v1 columns=frame,p_grasp,p_release,p_move_to,p_rotate,label
//   0,0.85,0.05,0.05,0.05,GRASP
//   1,0.97,0.01,0.01,0.01,
//
// The trailing label column is optional per line (empty or absent means
// unlabeled). Lines that do not parse, or whose probabilities fail
// posterior validation, are returned in `rejected` so a caller can count
// and continue.
struct PosteriorStream {
  std::vector<PosteriorRecord> records;
  std::vector<RejectedLine> rejected;
};

PosteriorStream parse_posterior_stream(const std::string& text);
PosteriorStream read_posterior_stream(const std::string& path);
std::string format_posterior_stream(const std::vector<PosteriorRecord>& records);
void write_posterior_stream(const std::string& path, const std::vector<PosteriorRecord>& records);

}  // namespace neurogate::intent
