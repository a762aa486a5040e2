#ifndef WLSURV_CENSORING_HPP_
#define WLSURV_CENSORING_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace wlsurv {

// One lifetime: the observed time and the failure indicator
// (1 = failure observed, 0 = right-censored).
struct Observation {
  double time;
  int status;
};

enum class SchemeType { Complete, TypeI, TypeII, Random };

struct Scheme {
  SchemeType type = SchemeType::Random;
  double t_c = 0.0;  // type I cutoff
  int r = 0;         // type II failure count

  static Scheme complete() { return {SchemeType::Complete, 0.0, 0}; }
  static Scheme type1(double t_c) { return {SchemeType::TypeI, t_c, 0}; }
  static Scheme type2(int r) { return {SchemeType::TypeII, 0.0, r}; }
  static Scheme random() { return {SchemeType::Random, 0.0, 0}; }
};

const char* scheme_name(SchemeType type);

// An immutable censored sample. Construction validates the observations
// against the declared scheme:
//   Complete: every status is 1.
//   TypeI(t_c): failures have time <= t_c, censored times equal t_c.
//   TypeII(r): exactly r failures, censored times equal the r-th failure
//     order statistic bit-for-bit.
//   Random: statuses taken as given.
class CensoredSample {
 public:
  CensoredSample(std::vector<Observation> observations, Scheme scheme);

  const std::vector<Observation>& observations() const { return observations_; }
  const Scheme& scheme() const { return scheme_; }
  std::size_t size() const { return observations_.size(); }
  std::size_t failure_count() const { return failures_; }

  std::vector<double> failure_times() const;
  std::vector<double> censored_times() const;
  std::vector<double> all_times() const;

 private:
  std::vector<Observation> observations_;
  Scheme scheme_;
  std::size_t failures_;
};

// Type II censoring: the r smallest lifetimes fail, the rest are censored
// at the r-th failure time.
CensoredSample apply_type2(const std::vector<double>& lifetimes, int r);

// Type I censoring at the fixed time t_c; a lifetime equal to t_c counts
// as a failure.
CensoredSample apply_type1(const std::vector<double>& lifetimes, double t_c);

// Random censoring: observe (min(T_i, C_i), I(T_i <= C_i)) pairwise.
CensoredSample apply_random(const std::vector<double>& lifetimes,
                            const std::vector<double>& censor_times);

// CSV ingestion, header "time,status", one observation per line. The result
// carries scheme Random (statuses taken as given). Errors mention the line
// number and offending field.
CensoredSample parse_dataset(std::istream& in);
CensoredSample parse_dataset_file(const std::string& path);

// Canonical CSV form (shortest round-trip number formatting).
std::string serialize_dataset(const CensoredSample& sample);

}  // namespace wlsurv

#endif  // WLSURV_CENSORING_HPP_
