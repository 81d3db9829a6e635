#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "tafi/error.h"
#include "tafi/metrics.h"

namespace tafi {

namespace {

std::string ReplaceAll(std::string text, const std::string& key,
                       const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos;
       pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

std::string Quote(const std::filesystem::path& p) {
  return "'" + ReplaceAll(p.string(), "'", "'\\''") + "'";
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Removes the scratch directory on scope exit.
struct ScratchDir {
  std::filesystem::path path;
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace

std::optional<VmafScore> VmafExternal(const Clip& ref_clip,
                                      const Clip& test_clip,
                                      const VmafToolConfig& config) {
  if (config.command.empty()) return std::nullopt;

  static std::atomic<int> counter{0};
  const std::filesystem::path base = config.work_dir.empty()
                                         ? std::filesystem::temp_directory_path()
                                         : config.work_dir;
  ScratchDir scratch{base / ("tafi_vmaf_" + std::to_string(::getpid()) + "_" +
                             std::to_string(counter++))};
  std::filesystem::create_directories(scratch.path);
  const auto ref_path = scratch.path / "ref.y4m";
  const auto dist_path = scratch.path / "dist.y4m";
  const auto out_path = scratch.path / "out.json";
  const auto err_path = scratch.path / "stderr.txt";
  SaveY4mFile(ref_clip, ref_path);
  SaveY4mFile(test_clip, dist_path);

  std::string cmd = config.command;
  cmd = ReplaceAll(cmd, "{ref}", Quote(ref_path));
  cmd = ReplaceAll(cmd, "{dist}", Quote(dist_path));
  cmd = ReplaceAll(cmd, "{out}", Quote(out_path));
  cmd = "(" + cmd + ") >/dev/null 2>" + Quote(err_path);

  const int status = std::system(cmd.c_str());
  if (status != 0) {
    throw Error(ErrorCode::kToolFailed,
                "VMAF tool exited with status " + std::to_string(status) +
                    ": " + Slurp(err_path));
  }
  try {
    const auto doc = nlohmann::json::parse(Slurp(out_path));
    VmafScore result;
    result.score = doc.at(nlohmann::json::json_pointer(config.score_key))
                       .get<double>();
    const nlohmann::json::json_pointer version(config.version_key);
    if (!config.version_key.empty() && doc.contains(version)) {
      const auto& v = doc.at(version);
      result.tool_version = v.is_string() ? v.get<std::string>() : v.dump();
    }
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kToolFailed,
                std::string("unparseable VMAF output: ") + e.what());
  }
}

}  // namespace tafi
