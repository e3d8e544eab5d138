#pragma once

#include <string>

#include "neurogate/signal/types.hpp"

namespace neurogate::signal {

// CSV matrix format, one row per channel:
//
//   # eeg csv v1 channels=3 samples=1000 sample_rate_hz=250
//   0.1,0.2,...
//
// The header line is required and carries the dimensions. Parse failures
// throw std::runtime_error with the offending line number.
RawEeg read_raw_csv(const std::string& path);
void write_raw_csv(const std::string& path, const RawEeg& raw);

RawEeg parse_raw_csv(const std::string& text, const std::string& origin = "<string>");
std::string format_raw_csv(const RawEeg& raw);

}  // namespace neurogate::signal
