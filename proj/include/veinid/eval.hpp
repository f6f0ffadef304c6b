#pragma once

// Genuine/impostor scoring over an enrolled gallery and the threshold sweep
// behind the accuracy, FAR/FRR and ROC curves.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/matching.hpp"
#include "veinid/minutiae.hpp"

namespace veinid {

struct ScoreSet {
  std::vector<double> genuine;   // V percent
  std::vector<double> impostor;  // V percent
};

// A sample whose template could not be extracted is an empty Template; any
// comparison involving it scores 0.
inline double pair_score(const Template& probe, const Template& gallery, const MatchParams& p) {
  if (probe.empty() || gallery.empty()) return 0.0;
  return match_templates(probe, gallery, p).score_v;
}

// templates[i][j] is sample j of identity i; sample 0 enrolls, the rest
// probe. Genuine pairs: every probe against its own enrolment. Impostor
// pairs: every probe against every other identity's enrolment.
inline ScoreSet score_dataset(const std::vector<std::vector<Template>>& templates,
                              const MatchParams& p) {
  p.validate();
  if (templates.size() < 2) throw InsufficientData("score_dataset: need at least 2 identities");
  bool has_probe = false;
  for (const auto& samples : templates) {
    if (samples.empty()) throw InsufficientData("score_dataset: identity without samples");
    has_probe = has_probe || samples.size() >= 2;
  }
  if (!has_probe) throw InsufficientData("score_dataset: no identity has 2 samples");

  ScoreSet s;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    for (std::size_t j = 1; j < templates[i].size(); ++j) {
      const Template& probe = templates[i][j];
      s.genuine.push_back(pair_score(probe, templates[i][0], p));
      for (std::size_t k = 0; k < templates.size(); ++k) {
        if (k != i) s.impostor.push_back(pair_score(probe, templates[k][0], p));
      }
    }
  }
  return s;
}

struct EvalRow {
  int threshold = 0;
  double far = 0.0;
  double frr = 0.0;
  double gar = 0.0;
  double accuracy = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;  // ascending threshold
  int best_threshold = 0;
  double best_accuracy = 0.0;

  const EvalRow& best_row() const {
    for (const auto& r : rows) {
      if (r.threshold == best_threshold) return r;
    }
    throw InsufficientData("EvalReport: empty report");
  }
};

inline std::vector<int> default_threshold_grid() {
  std::vector<int> grid;
  for (int t = 0; t <= 100; ++t) grid.push_back(t);
  return grid;
}

// FAR = % impostor scores > T, FRR = % genuine scores <= T, matching the
// accept-iff-V>T rule; accuracy = 100 - (FAR + FRR) / 2. The best row is
// the most accurate, ties going to the lowest T.
inline EvalReport sweep(const ScoreSet& scores, std::vector<int> grid = default_threshold_grid()) {
  if (scores.genuine.empty() || scores.impostor.empty()) {
    throw InsufficientData("sweep: need genuine and impostor scores");
  }
  if (grid.empty()) throw InsufficientData("sweep: empty threshold grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  EvalReport report;
  bool first = true;
  for (int t : grid) {
    std::size_t false_accepts = 0;
    for (double v : scores.impostor) false_accepts += v > t ? 1 : 0;
    std::size_t false_rejects = 0;
    for (double v : scores.genuine) false_rejects += v <= t ? 1 : 0;
    EvalRow row;
    row.threshold = t;
    row.far = 100.0 * static_cast<double>(false_accepts) / static_cast<double>(scores.impostor.size());
    row.frr = 100.0 * static_cast<double>(false_rejects) / static_cast<double>(scores.genuine.size());
    row.gar = 100.0 - row.frr;
    row.accuracy = 100.0 - 0.5 * (row.far + row.frr);
    if (first || row.accuracy > report.best_accuracy) {
      report.best_accuracy = row.accuracy;
      report.best_threshold = t;
      first = false;
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace detail {

inline std::string format_row(const char* fmt, const EvalRow& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, r.threshold, r.far, r.frr, r.gar, r.accuracy);
  return buf;
}

}  // namespace detail

inline std::string format_csv(const EvalReport& report) {
  std::string out = "threshold,far,frr,gar,accuracy\n";
  for (const auto& r : report.rows) out += detail::format_row("%d,%.4f,%.4f,%.4f,%.4f\n", r);
  return out;
}

inline std::string format_summary(const EvalReport& report) {
  const auto& r = report.best_row();
  char buf[160];
  std::snprintf(buf, sizeof buf, "best_T=%d accuracy=%.4f far=%.4f frr=%.4f", r.threshold,
                r.accuracy, r.far, r.frr);
  return buf;
}

}  // namespace veinid
