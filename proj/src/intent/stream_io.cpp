#include "neurogate/intent/stream_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace neurogate::intent {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& v) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && p == e;
}

}  // namespace

PosteriorStream parse_posterior_stream(const std::string& text) {
  PosteriorStream out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    const auto fields = split_csv(line);
    if (fields.size() != 5 && fields.size() != 6) {
      out.rejected.push_back({lineno, "expected 5 or 6 columns, got " + std::to_string(fields.size())});
      continue;
    }

    PosteriorRecord rec;
    double frame = 0.0;
    if (!parse_double(fields[0], frame) || frame < 0) {
      out.rejected.push_back({lineno, "bad frame index '" + fields[0] + "'"});
      continue;
    }
    rec.frame = std::uint64_t(frame);

    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      if (!parse_double(fields[std::size_t(i) + 1], rec.p[std::size_t(i)])) {
        out.rejected.push_back({lineno, "bad probability in column " + std::to_string(i + 2)});
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    if (fields.size() == 6 && !fields[5].empty()) {
      rec.label = action_from_string(fields[5]);
      if (!rec.label) {
        out.rejected.push_back({lineno, "unknown label '" + fields[5] + "'"});
        continue;
      }
    }

    // Posterior validation gives one authoritative rejection reason.
    try {
      IntentPosterior check(rec.p);
      (void)check;
    } catch (const std::exception& e) {
      out.rejected.push_back({lineno, e.what()});
      continue;
    }
    out.records.push_back(rec);
  }
  return out;
}

PosteriorStream read_posterior_stream(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open posterior stream: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_posterior_stream(ss.str());
}

std::string format_posterior_stream(const std::vector<PosteriorRecord>& records) {
  std::string out = "# posterior stream v1 columns=frame,p_grasp,p_release,p_move_to,p_rotate,label\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g,%s\n",
                  static_cast<unsigned long long>(r.frame), r.p[0], r.p[1], r.p[2], r.p[3],
                  r.label ? to_string(*r.label) : "");
    out += buf;
  }
  return out;
}

void write_posterior_stream(const std::string& path, const std::vector<PosteriorRecord>& records) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write posterior stream: " + path);
  f << format_posterior_stream(records);
}

}  // namespace neurogate::intent
