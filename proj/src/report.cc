#include "tafi/report.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"
#include "tafi/error.h"

namespace tafi {

using nlohmann::ordered_json;

namespace {

constexpr std::string_view kScoresHeader =
    "version,clip_id,truth,predicted,profile,frame_index,psnr,ssim,capped";

std::string OptClass(const std::optional<TextureClass>& c) {
  return c ? std::string(ClassName(*c)) : std::string();
}

double MetricOf(const Aggregate& a, std::string_view metric) {
  return metric == "psnr" ? a.mean_psnr : a.mean_ssim;
}

std::vector<std::string> Groups() {
  std::vector<std::string> g;
  for (TextureClass c : kAllClasses) g.emplace_back(ClassName(c));
  g.emplace_back(kOverallGroup);
  return g;
}

std::vector<double> ClipMeans(const VersionScores& vs,
                              std::optional<TextureClass> cls,
                              std::string_view metric) {
  std::vector<double> out;
  for (const auto& s : vs.clips) {
    if (cls && s.group() != cls) continue;
    out.push_back(metric == "psnr" ? s.mean_psnr : s.mean_ssim);
  }
  return out;
}

double ParseDouble(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParseError,
                "scores table: bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string FormatCell(double value, double delta, int decimals) {
  return fmt::format("{:.{}f}({:+.{}f})", value, decimals, delta, decimals);
}

std::string FormatP(double p) { return fmt::format("p={:.2f}", p); }

Summary Summarize(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInsufficientSamples, "summary of empty sample");
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75),
          values.back()};
}

std::string ScoresCsv(const BenchReport& report) {
  std::string out(kScoresHeader);
  out += '\n';
  for (const auto& vs : report.versions) {
    for (const auto& s : vs.clips) {
      for (const auto& r : s.records) {
        out += fmt::format("{},{},{},{},{},{},{:.10f},{:.10f},{}\n",
                           vs.version, s.clip_id, OptClass(s.truth),
                           OptClass(s.predicted), s.profile_key,
                           r.frame_index, r.psnr, r.ssim, r.capped ? 1 : 0);
      }
    }
  }
  return out;
}

std::string ComparisonTable(const BenchReport& report) {
  const auto groups = Groups();
  struct Column {
    std::string group;
    std::string metric;
    int decimals;
  };
  std::vector<Column> cols;
  for (const auto& g : groups) {
    cols.push_back({g, "psnr", 2});
    cols.push_back({g, "ssim", 4});
  }
  bool any_vmaf = false;
  for (const auto& a : report.aggregates) any_vmaf |= a.mean_vmaf.has_value();

  std::map<std::size_t, double> best;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const auto& vs : report.versions) {
      const Aggregate* a = report.FindAggregate(vs.version, cols[c].group);
      if (!a || a->n_clips == 0) continue;
      const double v = MetricOf(*a, cols[c].metric);
      if (!best.count(c) || v > best[c]) best[c] = v;
    }
  }

  std::ostringstream os;
  os << "| version |";
  for (const auto& c : cols) os << ' ' << c.group << ' ' << c.metric << " |";
  if (any_vmaf) os << " overall vmaf |";
  os << "\n|---|";
  for (std::size_t c = 0; c < cols.size(); ++c) os << "---|";
  if (any_vmaf) os << "---|";
  os << '\n';
  for (const auto& vs : report.versions) {
    os << "| " << vs.version << " |";
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Aggregate* a = report.FindAggregate(vs.version, cols[c].group);
      if (!a || a->n_clips == 0) {
        os << " - |";
        continue;
      }
      const double v = MetricOf(*a, cols[c].metric);
      const double d = cols[c].metric == "psnr" ? a->delta_psnr : a->delta_ssim;
      std::string cell = FormatCell(v, d, cols[c].decimals);
      if (v == best[c]) cell = "**" + cell + "**";
      os << ' ' << cell << " |";
    }
    if (any_vmaf) {
      const Aggregate* a = report.FindAggregate(vs.version, kOverallGroup);
      if (a && a->mean_vmaf) {
        os << ' ' << fmt::format("{:.2f}", *a->mean_vmaf) << " |";
      } else {
        os << " - |";
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string StatsText(std::span<const VersionStats> stats, double alpha) {
  std::ostringstream os;
  os << fmt::format("alpha = {:.2f}\n", alpha);
  for (const auto& st : stats) {
    os << '\n' << st.version << ' ' << st.metric << '\n';
    if (st.anova) {
      const auto& a = *st.anova;
      os << fmt::format("  anova   F({},{}) = {:.2f}, {}{}\n", a.df_between,
                        a.df_within, a.f_stat, FormatP(a.p_value),
                        a.p_value < alpha ? " *" : "");
    } else {
      os << "  anova   n/a\n";
    }
    for (const auto& p : st.pairs) {
      os << fmt::format("  {} vs {}  t({:.2f}) = {:.2f}, {}{}\n",
                        ClassName(p.a), ClassName(p.b), p.result.df,
                        p.result.t_stat, FormatP(p.result.p_value),
                        p.result.p_value < alpha ? " *" : "");
    }
  }
  return os.str();
}

std::string DistributionsCsv(const BenchReport& report) {
  std::string out = "version,class,metric,n,min,q1,median,q3,max\n";
  for (const auto& vs : report.versions) {
    for (TextureClass c : kAllClasses) {
      for (const std::string_view metric : {"psnr", "ssim"}) {
        const auto v = ClipMeans(vs, c, metric);
        if (v.empty()) continue;
        const Summary s = Summarize(v);
        out += fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                           vs.version, ClassName(c), metric, v.size(), s.min,
                           s.q1, s.median, s.q3, s.max);
      }
    }
  }
  return out;
}

std::string ReportJson(const BenchReport& report) {
  ordered_json doc;
  doc["format"] = "tafi-report-1";
  doc["alpha"] = report.alpha;
  doc["vmaf_version"] = report.vmaf_version;
  doc["config"] = ordered_json::parse(report.config_echo.empty()
                                          ? std::string("{}")
                                          : report.config_echo);
  ordered_json versions = ordered_json::array();
  for (const auto& vs : report.versions) {
    ordered_json clips = ordered_json::array();
    for (const auto& s : vs.clips) {
      ordered_json c = {{"clip_id", s.clip_id},
                        {"truth", OptClass(s.truth)},
                        {"predicted", OptClass(s.predicted)},
                        {"profile", s.profile_key},
                        {"frames_evaluated", s.frames_evaluated},
                        {"mean_psnr", s.mean_psnr},
                        {"mean_ssim", s.mean_ssim}};
      if (s.vmaf) c["vmaf"] = *s.vmaf;
      clips.push_back(std::move(c));
    }
    versions.push_back({{"version", vs.version}, {"clips", std::move(clips)}});
  }
  doc["versions"] = std::move(versions);
  ordered_json aggs = ordered_json::array();
  for (const auto& a : report.aggregates) {
    ordered_json j = {{"version", a.version},     {"group", a.group},
                      {"n_clips", a.n_clips},     {"mean_psnr", a.mean_psnr},
                      {"mean_ssim", a.mean_ssim}, {"delta_psnr", a.delta_psnr},
                      {"delta_ssim", a.delta_ssim}};
    if (a.mean_vmaf) j["mean_vmaf"] = *a.mean_vmaf;
    aggs.push_back(std::move(j));
  }
  doc["aggregates"] = std::move(aggs);
  ordered_json stats = ordered_json::array();
  for (const auto& st : report.stats) {
    ordered_json j = {{"version", st.version}, {"metric", st.metric}};
    if (st.anova) {
      j["anova"] = {{"f", st.anova->f_stat},
                    {"df_between", st.anova->df_between},
                    {"df_within", st.anova->df_within},
                    {"p", st.anova->p_value}};
    }
    ordered_json pairs = ordered_json::array();
    for (const auto& p : st.pairs) {
      pairs.push_back({{"a", ClassName(p.a)},
                       {"b", ClassName(p.b)},
                       {"t", p.result.t_stat},
                       {"df", p.result.df},
                       {"p", p.result.p_value}});
    }
    j["welch"] = std::move(pairs);
    stats.push_back(std::move(j));
  }
  doc["stats"] = std::move(stats);
  ordered_json cls = ordered_json::array();
  for (const auto& c : report.classification) {
    cls.push_back({{"clip_id", c.clip_id},
                   {"truth", OptClass(c.truth)},
                   {"predicted", ClassName(c.predicted)},
                   {"gmc_residual", c.features.gmc_residual},
                   {"flow_incoherence", c.features.flow_incoherence},
                   {"mean_motion", c.features.mean_motion},
                   {"spatial_detail", c.features.spatial_detail}});
  }
  doc["classification"] = std::move(cls);
  return doc.dump(2) + "\n";
}

void EmitReport(const BenchReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kWriteFailed,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  WriteTextFile(dir / "scores.csv", ScoresCsv(report));
  WriteTextFile(dir / "comparison.md", ComparisonTable(report));
  WriteTextFile(dir / "stats.txt", StatsText(report.stats, report.alpha));
  WriteTextFile(dir / "distributions.csv", DistributionsCsv(report));
  WriteTextFile(dir / "report.json", ReportJson(report));
}

std::vector<VersionScores> ParseScoresCsv(std::string_view text) {
  std::vector<VersionScores> out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kScoresHeader) {
        throw Error(ErrorCode::kParseError, "scores table: unexpected header");
      }
      header = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 9) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("scores table line {}: expected 9 fields",
                              line_no));
    }
    auto vit = std::find_if(out.begin(), out.end(), [&](const auto& v) {
      return v.version == f[0];
    });
    if (vit == out.end()) {
      out.push_back({std::string(f[0]), {}});
      vit = std::prev(out.end());
    }
    auto& clips = vit->clips;
    auto cit = std::find_if(clips.begin(), clips.end(), [&](const auto& c) {
      return c.clip_id == f[1];
    });
    if (cit == clips.end()) {
      SequenceScore s;
      s.clip_id = std::string(f[1]);
      if (!f[2].empty()) s.truth = ParseClass(f[2]);
      if (!f[3].empty()) s.predicted = ParseClass(f[3]);
      s.profile_key = std::string(f[4]);
      clips.push_back(std::move(s));
      cit = std::prev(clips.end());
    }
    MetricRecord r;
    r.clip_id = cit->clip_id;
    r.frame_index = static_cast<int>(ParseDouble(f[5]));
    r.psnr = ParseDouble(f[6]);
    r.ssim = ParseDouble(f[7]);
    r.capped = f[8] == "1";
    cit->records.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorCode::kParseError, "scores table is empty");
  for (auto& vs : out) {
    for (auto& s : vs.clips) {
      double p = 0, q = 0;
      for (const auto& r : s.records) {
        p += r.psnr;
        q += r.ssim;
      }
      s.frames_evaluated = static_cast<int>(s.records.size());
      s.mean_psnr = p / s.frames_evaluated;
      s.mean_ssim = q / s.frames_evaluated;
    }
  }
  return out;
}

}  // namespace tafi
