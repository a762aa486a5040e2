#include "wlsurv/censoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wlsurv {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("parse error at line " + std::to_string(line) + ": " + what);
}

}  // namespace

const char* scheme_name(SchemeType type) {
  switch (type) {
    case SchemeType::Complete: return "complete";
    case SchemeType::TypeI: return "type1";
    case SchemeType::TypeII: return "type2";
    case SchemeType::Random: return "random";
  }
  return "unknown";
}

CensoredSample::CensoredSample(std::vector<Observation> observations, Scheme scheme)
    : observations_(std::move(observations)), scheme_(scheme), failures_(0) {
  if (observations_.empty())
    throw std::invalid_argument("CensoredSample: empty sample");
  for (const Observation& obs : observations_) {
    if (!(obs.time > 0.0) || !std::isfinite(obs.time))
      throw std::invalid_argument("CensoredSample: times must be positive and finite");
    if (obs.status != 0 && obs.status != 1)
      throw std::invalid_argument("CensoredSample: status must be 0 or 1");
    failures_ += static_cast<std::size_t>(obs.status);
  }
  switch (scheme_.type) {
    case SchemeType::Complete:
      if (failures_ != observations_.size())
        throw std::invalid_argument("CensoredSample: complete scheme requires every status = 1");
      break;
    case SchemeType::TypeI: {
      if (!(scheme_.t_c > 0.0) || !std::isfinite(scheme_.t_c))
        throw std::invalid_argument("CensoredSample: type I cutoff must be positive");
      for (const Observation& obs : observations_) {
        if (obs.status == 1 && obs.time > scheme_.t_c)
          throw std::invalid_argument("CensoredSample: type I failure time exceeds t_c");
        if (obs.status == 0 && obs.time != scheme_.t_c)
          throw std::invalid_argument("CensoredSample: type I censored time must equal t_c");
      }
      break;
    }
    case SchemeType::TypeII: {
      const std::size_t n = observations_.size();
      if (scheme_.r < 1 || static_cast<std::size_t>(scheme_.r) > n)
        throw std::invalid_argument("CensoredSample: type II r out of range");
      if (failures_ != static_cast<std::size_t>(scheme_.r))
        throw std::invalid_argument("CensoredSample: type II requires exactly r failures");
      double t_r = 0.0;
      for (const Observation& obs : observations_)
        if (obs.status == 1) t_r = std::max(t_r, obs.time);
      for (const Observation& obs : observations_)
        if (obs.status == 0 && obs.time != t_r)
          throw std::invalid_argument(
              "CensoredSample: type II censored times must equal the r-th failure time");
      break;
    }
    case SchemeType::Random:
      break;
  }
}

std::vector<double> CensoredSample::failure_times() const {
  std::vector<double> out;
  out.reserve(failures_);
  for (const Observation& obs : observations_)
    if (obs.status == 1) out.push_back(obs.time);
  return out;
}

std::vector<double> CensoredSample::censored_times() const {
  std::vector<double> out;
  out.reserve(observations_.size() - failures_);
  for (const Observation& obs : observations_)
    if (obs.status == 0) out.push_back(obs.time);
  return out;
}

std::vector<double> CensoredSample::all_times() const {
  std::vector<double> out;
  out.reserve(observations_.size());
  for (const Observation& obs : observations_) out.push_back(obs.time);
  return out;
}

CensoredSample apply_type2(const std::vector<double>& lifetimes, int r) {
  const std::size_t n = lifetimes.size();
  if (r < 1 || static_cast<std::size_t>(r) > n)
    throw std::invalid_argument("apply_type2: r must satisfy 1 <= r <= n");
  std::vector<double> sorted = lifetimes;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Observation> obs;
  obs.reserve(n);
  const double t_r = sorted[static_cast<std::size_t>(r) - 1];
  for (std::size_t i = 0; i < static_cast<std::size_t>(r); ++i)
    obs.push_back({sorted[i], 1});
  for (std::size_t i = r; i < n; ++i) obs.push_back({t_r, 0});
  return CensoredSample(std::move(obs), Scheme::type2(r));
}

CensoredSample apply_type1(const std::vector<double>& lifetimes, double t_c) {
  if (!(t_c > 0.0) || !std::isfinite(t_c))
    throw std::invalid_argument("apply_type1: t_c must be positive and finite");
  std::vector<Observation> obs;
  obs.reserve(lifetimes.size());
  for (double t : lifetimes) {
    if (t <= t_c)
      obs.push_back({t, 1});
    else
      obs.push_back({t_c, 0});
  }
  return CensoredSample(std::move(obs), Scheme::type1(t_c));
}

CensoredSample apply_random(const std::vector<double>& lifetimes,
                            const std::vector<double>& censor_times) {
  if (lifetimes.size() != censor_times.size())
    throw std::invalid_argument("apply_random: lifetimes and censor times must have equal length");
  std::vector<Observation> obs;
  obs.reserve(lifetimes.size());
  for (std::size_t i = 0; i < lifetimes.size(); ++i) {
    if (lifetimes[i] <= censor_times[i])
      obs.push_back({lifetimes[i], 1});
    else
      obs.push_back({censor_times[i], 0});
  }
  return CensoredSample(std::move(obs), Scheme::random());
}

CensoredSample parse_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<Observation> obs;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // strip surrounding whitespace
    const auto begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t");
    std::string trimmed = line.substr(begin, end - begin + 1);
    if (!header_seen) {
      std::string squashed;
      for (char c : trimmed)
        if (c != ' ' && c != '\t') squashed += c;
      if (squashed != "time,status")
        parse_fail(line_no, "expected header 'time,status', got '" + trimmed + "'");
      header_seen = true;
      continue;
    }
    const auto comma = trimmed.find(',');
    if (comma == std::string::npos || trimmed.find(',', comma + 1) != std::string::npos)
      parse_fail(line_no, "expected exactly two comma-separated fields");
    const std::string time_str = trimmed.substr(0, comma);
    const std::string status_str = trimmed.substr(comma + 1);

    double time = 0.0;
    try {
      std::size_t used = 0;
      time = std::stod(time_str, &used);
      while (used < time_str.size() && (time_str[used] == ' ' || time_str[used] == '\t')) ++used;
      if (used != time_str.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      parse_fail(line_no, "field 'time' is not a number: '" + time_str + "'");
    }
    if (!(time > 0.0) || !std::isfinite(time))
      parse_fail(line_no, "field 'time' must be positive and finite");

    int status = -1;
    {
      std::string s = status_str;
      s.erase(std::remove_if(s.begin(), s.end(),
                             [](char c) { return c == ' ' || c == '\t'; }),
              s.end());
      if (s == "0") status = 0;
      else if (s == "1") status = 1;
      else parse_fail(line_no, "field 'status' must be 0 or 1, got '" + status_str + "'");
    }
    obs.push_back({time, status});
  }
  if (!header_seen) throw std::runtime_error("parse error: empty input, missing 'time,status' header");
  if (obs.empty()) throw std::runtime_error("parse error: no observations after the header");
  return CensoredSample(std::move(obs), Scheme::random());
}

CensoredSample parse_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return parse_dataset(in);
}

std::string serialize_dataset(const CensoredSample& sample) {
  std::string out = "time,status\n";
  for (const Observation& obs : sample.observations()) {
    out += format_double(obs.time);
    out += ',';
    out += obs.status ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace wlsurv
