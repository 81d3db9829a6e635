#ifndef TAFI_METRICS_H_
#define TAFI_METRICS_H_

#include <filesystem>
#include <optional>
#include <string>

#include "tafi/media.h"

namespace tafi {

// Value reported for zero-MSE pairs so aggregates stay finite.
inline constexpr double kPsnrCap = 100.0;

struct PsnrValue {
  double db = 0;
  bool capped = false;
};

// Luma PSNR with peak 255.
PsnrValue Psnr(const Frame& ref, const Frame& test);

// Mean SSIM over luma: 11x11 Gaussian window (sigma 1.5), stride 1, valid
// window positions only, C1 = (0.01 * 255)^2, C2 = (0.03 * 255)^2.
double Ssim(const Frame& ref, const Frame& test);

struct MetricRecord {
  std::string clip_id;
  int frame_index = 0;
  double psnr = 0;
  double ssim = 0;
  bool capped = false;
};

MetricRecord ScoreFrame(const Frame& ref, const Frame& test,
                        std::string clip_id, int frame_index);

// External VMAF tool adapter. `command` is a shell template with {ref},
// {dist} and {out} placeholders; the tool must write a JSON document to
// {out}. Keys are JSON pointers into that document.
struct VmafToolConfig {
  std::string command;
  std::string score_key = "/pooled_metrics/vmaf/mean";
  std::string version_key = "/version";
  std::filesystem::path work_dir;  // empty: system temp directory
};

struct VmafScore {
  double score = 0;
  std::string tool_version;
};

// Returns nullopt when no command is configured. Throws kToolFailed on
// nonzero exit or unparseable output, with the tool's stderr attached.
std::optional<VmafScore> VmafExternal(const Clip& ref_clip,
                                      const Clip& test_clip,
                                      const VmafToolConfig& config);

}  // namespace tafi

#endif  // TAFI_METRICS_H_
