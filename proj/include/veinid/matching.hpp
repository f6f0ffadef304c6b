#pragma once

// Greedy nearest-feature matching with exclusion and the percentage score.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/minutiae.hpp"

namespace veinid {

struct MatchParams {
  double t1 = 10.0;                  // px
  double t2 = 15.0;                  // degrees
  double decision_threshold = 25.0;  // percent

  void validate() const {
    if (!(t1 >= 0.0)) throw InvalidParameter("match: t1 must be >= 0");
    if (!(t2 >= 0.0)) throw InvalidParameter("match: t2 must be >= 0");
    if (!(decision_threshold >= 0.0 && decision_threshold <= 100.0)) {
      throw InvalidParameter("match: decision threshold must be in [0, 100]");
    }
  }
};

struct MatchPair {
  std::size_t probe = 0;
  std::optional<std::size_t> gallery;  // empty once the gallery ran out
};

struct MatchResult {
  std::vector<MatchPair> pairs;
  std::vector<double> sd;  // px; +inf when unpaired
  std::vector<double> dd;  // degrees in [0, 180]; +inf when unpaired
  std::vector<std::uint8_t> accepted;
  double score_v = 0.0;  // percent
};

enum class Decision { accept, reject };

// |a - b| folded onto [0, 180].
inline double angle_difference(double a, double b) {
  const double d = wrap_degrees(a - b);
  return d > 180.0 ? 360.0 - d : d;
}

// Probe minutiae are visited in order; each takes the nearest gallery
// minutia not yet taken (lowest index on ties). The score is the share of
// probe minutiae whose pair is within t1 and t2.
inline MatchResult match_templates(const Template& probe, const Template& gallery,
                                   const MatchParams& p) {
  p.validate();
  if (probe.empty()) throw EmptyProbe("match_templates: probe has no minutiae");
  const std::size_t n = probe.size();
  const std::size_t m = gallery.size();
  constexpr double inf = std::numeric_limits<double>::infinity();

  MatchResult r;
  r.pairs.reserve(n);
  r.sd.reserve(n);
  r.dd.reserve(n);
  r.accepted.reserve(n);
  std::vector<bool> taken(m, false);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = probe.minutiae[i];
    std::optional<std::size_t> best;
    double best_d = inf;
    for (std::size_t j = 0; j < m; ++j) {
      if (taken[j]) continue;
      const auto& b = gallery.minutiae[j];
      const double d = std::hypot(a.x - b.x, a.y - b.y);
      if (!best || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    double dd = inf;
    if (best) {
      taken[*best] = true;
      dd = angle_difference(a.theta, gallery.minutiae[*best].theta);
    }
    const bool ok = best && best_d <= p.t1 && dd <= p.t2;
    hits += ok ? 1 : 0;
    r.pairs.push_back({i, best});
    r.sd.push_back(best_d);
    r.dd.push_back(dd);
    r.accepted.push_back(ok ? 1 : 0);
  }
  r.score_v = 100.0 * static_cast<double>(hits) / static_cast<double>(n);
  return r;
}

// Accept only when the score is strictly above the threshold.
inline Decision verify(const MatchResult& result, const MatchParams& p) {
  return result.score_v > p.decision_threshold ? Decision::accept : Decision::reject;
}

inline const char* to_string(Decision d) { return d == Decision::accept ? "accept" : "reject"; }

}  // namespace veinid
