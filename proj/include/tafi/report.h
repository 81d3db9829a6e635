#ifndef TAFI_REPORT_H_
#define TAFI_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tafi/bench.h"

namespace tafi {

// "28.51(+0.31)" with `decimals` digits on both parts.
std::string FormatCell(double value, double delta, int decimals = 2);

// "p=0.00" style, two decimals.
std::string FormatP(double p);

struct Summary {
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;
};

// Five-number summary; quartiles by linear interpolation between order
// statistics. Throws kInsufficientSamples on empty input.
Summary Summarize(std::vector<double> values);

// One row per (version, clip, frame):
//   version,clip_id,truth,predicted,profile,frame_index,psnr,ssim,capped
std::string ScoresCsv(const BenchReport& report);

// Per-class and overall mean PSNR/SSIM per version with deltas against the
// baseline; the best value of each column is wrapped in ** **.
std::string ComparisonTable(const BenchReport& report);

// ANOVA and pairwise Welch results per version and metric.
std::string StatsText(std::span<const VersionStats> stats, double alpha);

// version,class,metric,n,min,q1,median,q3,max over per-clip means.
std::string DistributionsCsv(const BenchReport& report);

// Everything above in one JSON document, including the config echo and the
// classification table.
std::string ReportJson(const BenchReport& report);

// Writes scores.csv, comparison.md, stats.txt, distributions.csv and
// report.json into `dir` (created if missing). Throws kWriteFailed.
void EmitReport(const BenchReport& report, const std::filesystem::path& dir);

// Rebuilds per-version clip scores from a ScoresCsv table; clip means are
// recomputed from the frame rows.
std::vector<VersionScores> ParseScoresCsv(std::string_view text);

}  // namespace tafi

#endif  // TAFI_REPORT_H_
