#ifndef PROBCRIT_CALIBRATION_HPP
#define PROBCRIT_CALIBRATION_HPP

#include "probcrit/scoring.hpp"
#include "probcrit/types.hpp"

#include <string>
#include <vector>

// Decomposition of the Brier score into lack of discrimination and lack of
// reliability, plus reliability-diagram bin tables. Pure aggregation;
// partial bin tables from parallel workers merge by addition.

namespace probcrit {

// Expected Brier score if the stated forecast were perfectly reliable:
// 0.5 * (1 - sum p_i^2). Small when the forecast is near-categorical, so it
// reads as lack of discrimination.
template <typename Derived>
double expected_brier_under_reliability(const Eigen::MatrixBase<Derived>& p) {
  return 0.5 * (1.0 - p.derived().squaredNorm());
}

inline double expected_brier_under_reliability(const ProbabilityVector& p) {
  return expected_brier_under_reliability(p.values());
}

// R = B - E0(B) = sum p_i^2 - p_r. Positive mean reads as over-confidence,
// negative as diffidence; the sign is always reported, never folded away.
template <typename DerivedP, typename DerivedE>
double reliability_stat(const Eigen::MatrixBase<DerivedP>& p,
                        const Eigen::MatrixBase<DerivedE>& e) {
  detail::check_same_length(p, e);
  return p.derived().squaredNorm() - p.derived().dot(e.derived());
}

inline double reliability_stat(const ProbabilityVector& p, const OutcomeVector& e) {
  detail::check_same_length(p.values(), e.values());
  return p.values().squaredNorm() - p[e.observed()];
}

struct DecompositionRecord {
  std::string group;
  std::size_t count = 0;
  double discrimination = 0.0;  // mean E0(B)
  double reliability = 0.0;     // mean R, signed
};

// Count-weighted means per group, groups in first-appearance order.
// Counts are reported so question-weighted summaries can be recovered
// downstream. Throws Error on an empty pair set.
std::vector<DecompositionRecord> decomposition_report(const std::vector<ScoredPair>& pairs,
                                                      GroupKey key);

// Binning scheme over assessed probabilities in [0,1]. The default is the
// twelve-group scheme {0}, (0,0.1], (0.1,0.2], ..., (0.8,0.9], (0.9,1), {1}:
// exact 0 and exact 1 are singleton bins so that events ruled out (or ruled
// in) categorically are never mixed with merely-confident ones, and boundary
// values like exactly 0.10 fall in the lower-labelled bin.
class BinScheme {
public:
  static BinScheme twelve_group();

  // Custom partition [e0,e1], (e1,e2], ..., (e_{n-1},e_n] from strictly
  // increasing edges with e0 = 0 and e_n = 1. Throws Error otherwise.
  static BinScheme from_edges(std::vector<double> edges);

  std::size_t bin_count() const;
  std::size_t bin_of(double p) const;  // throws Error when p outside [0,1]
  std::string label(std::size_t bin) const;
  double lo(std::size_t bin) const;
  double hi(std::size_t bin) const;

private:
  BinScheme() = default;
  bool twelve_ = false;
  std::vector<double> edges_;
};

struct ReliabilityBinTable {
  BinScheme scheme;
  std::vector<std::size_t> n;         // events given a probability in the bin
  std::vector<std::size_t> occurred;  // of those, how many happened

  std::size_t total() const;
  // occurred/n; NaN for an empty bin.
  double fraction(std::size_t bin) const;
};

// One pair per prospective event: the probability it was given and whether
// it occurred. Every response of every scored question is such an event,
// not just the observed ones.
ReliabilityBinTable reliability_bins(const std::vector<std::pair<double, bool>>& events,
                                     const BinScheme& scheme = BinScheme::twelve_group());

// Flattens scored questions into response-level events in response order.
std::vector<std::pair<double, bool>> response_events(const std::vector<ScoredPair>& pairs);

}  // namespace probcrit

#endif  // PROBCRIT_CALIBRATION_HPP
