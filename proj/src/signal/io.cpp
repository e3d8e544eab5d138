#include "neurogate/signal/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace neurogate::signal {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

bool parse_kv(const std::string& token, const std::string& key, std::string& value) {
  if (token.rfind(key + "=", 0) != 0) return false;
  value = token.substr(key.size() + 1);
  return true;
}

}  // namespace

RawEeg parse_raw_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) fail(origin, 1, "empty input");
  ++lineno;
  if (line.rfind("# eeg csv v1", 0) != 0)
    fail(origin, lineno, "missing '# eeg csv v1' header");

  std::size_t channels = 0, samples = 0;
  double fs = 0.0;
  {
    std::istringstream hs(line.substr(1));
    std::string tok, val;
    while (hs >> tok) {
      if (parse_kv(tok, "channels", val)) channels = std::stoul(val);
      else if (parse_kv(tok, "samples", val)) samples = std::stoul(val);
      else if (parse_kv(tok, "sample_rate_hz", val)) fs = std::stod(val);
    }
  }
  if (channels == 0 || samples == 0 || !(fs > 0))
    fail(origin, lineno, "header must carry channels, samples and sample_rate_hz");

  RawEeg raw;
  raw.sample_rate_hz = fs;
  raw.m = ChannelMatrix::zeros(channels, samples);

  std::size_t c = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (c >= channels) fail(origin, lineno, "more rows than declared channels");
    const char* p = line.data();
    const char* end = p + line.size();
    for (std::size_t s = 0; s < samples; ++s) {
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc())
        fail(origin, lineno, "bad value in column " + std::to_string(s + 1));
      raw.m.at(c, s) = v;
      p = next;
      if (s + 1 < samples) {
        if (p >= end || *p != ',')
          fail(origin, lineno, "expected ',' after column " + std::to_string(s + 1));
        ++p;
      }
    }
    ++c;
  }
  if (c != channels)
    fail(origin, lineno, "expected " + std::to_string(channels) + " channel rows, got " +
                             std::to_string(c));
  return raw;
}

std::string format_raw_csv(const RawEeg& raw) {
  std::string out;
  out.reserve(raw.m.data.size() * 12);
  char buf[128];
  std::snprintf(buf, sizeof buf, "# eeg csv v1 channels=%zu samples=%zu sample_rate_hz=%.17g\n",
                raw.m.channels, raw.m.samples, raw.sample_rate_hz);
  out += buf;
  for (std::size_t c = 0; c < raw.m.channels; ++c) {
    for (std::size_t s = 0; s < raw.m.samples; ++s) {
      std::snprintf(buf, sizeof buf, "%.17g", raw.m.at(c, s));
      out += buf;
      out += (s + 1 < raw.m.samples) ? ',' : '\n';
    }
  }
  return out;
}

RawEeg read_raw_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open signal file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_raw_csv(ss.str(), path);
}

void write_raw_csv(const std::string& path, const RawEeg& raw) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write signal file: " + path);
  f << format_raw_csv(raw);
}

}  // namespace neurogate::signal
