#include "tafi/manifest.h"

#include <charconv>
#include <set>
#include <sstream>

#include "tafi/error.h"
#include "tafi/parallel.h"

namespace tafi {

namespace {

constexpr std::string_view kHeader = "clip_id,path,container,label,width,height,fps";

std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    out.emplace_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

int ParseNumber(const std::string& s, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParseError, "manifest line " +
                                            std::to_string(line) +
                                            ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void Manifest::Validate() const {
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyManifest, "manifest has no entries");
  }
  std::set<std::string> ids;
  for (const auto& e : entries) {
    if (e.clip_id.empty()) {
      throw Error(ErrorCode::kInvalidSpec, "manifest entry without clip_id");
    }
    if (!ids.insert(e.clip_id).second) {
      throw Error(ErrorCode::kInvalidSpec, "duplicate clip_id " + e.clip_id);
    }
    if (e.container == Container::kRaw &&
        (e.width <= 0 || e.height <= 0 || e.fps.num == 0 || e.fps.den == 0)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "raw entry " + e.clip_id + " lacks width/height/fps");
    }
  }
}

Manifest ParseManifest(std::string_view text,
                       const std::filesystem::path& base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) {
        throw Error(ErrorCode::kParseError,
                    "manifest header must be '" + std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = SplitCsv(line);
    if (f.size() != 7) {
      throw Error(ErrorCode::kParseError,
                  "manifest line " + std::to_string(line_no) +
                      " needs 7 fields");
    }
    ManifestEntry e;
    e.clip_id = f[0];
    e.path = f[1];
    if (f[2] == "y4m") {
      e.container = Container::kY4m;
    } else if (f[2] == "raw") {
      e.container = Container::kRaw;
    } else {
      throw Error(ErrorCode::kParseError, "unknown container '" + f[2] + "'");
    }
    if (!f[3].empty()) {
      e.label = ParseClass(f[3]);
      if (!e.label) {
        throw Error(ErrorCode::kParseError, "unknown label '" + f[3] + "'");
      }
    }
    if (!f[4].empty()) e.width = ParseNumber(f[4], line_no);
    if (!f[5].empty()) e.height = ParseNumber(f[5], line_no);
    if (!f[6].empty()) {
      const auto colon = f[6].find(':');
      if (colon == std::string::npos) {
        throw Error(ErrorCode::kParseError, "fps must be num:den");
      }
      e.fps.num = ParseNumber(f[6].substr(0, colon), line_no);
      e.fps.den = ParseNumber(f[6].substr(colon + 1), line_no);
    }
    m.entries.push_back(std::move(e));
  }
  m.Validate();
  return m;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return ParseManifest(
      std::string_view(reinterpret_cast<const char*>(bytes.data()),
                       bytes.size()),
      path.parent_path());
}

std::string SerializeManifest(const Manifest& manifest) {
  std::ostringstream os;
  os << kHeader << '\n';
  for (const auto& e : manifest.entries) {
    os << e.clip_id << ',' << e.path.generic_string() << ','
       << (e.container == Container::kY4m ? "y4m" : "raw") << ','
       << (e.label ? ClassName(*e.label) : "") << ',';
    if (e.container == Container::kRaw) {
      os << e.width << ',' << e.height << ',' << e.fps.num << ':' << e.fps.den;
    } else {
      os << ",,";
    }
    os << '\n';
  }
  return os.str();
}

void SaveManifest(const Manifest& manifest, const std::filesystem::path& path) {
  WriteTextFile(path, SerializeManifest(manifest));
}

Clip LoadClip(const Manifest& manifest, const ManifestEntry& entry) {
  const std::filesystem::path path =
      entry.path.is_absolute() ? entry.path : manifest.base_dir / entry.path;
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingFile, path.string());
  }
  Clip clip = entry.container == Container::kY4m
                  ? LoadY4mFile(path, entry.clip_id)
                  : LoadRawFile(path, entry.width, entry.height, entry.fps,
                                entry.clip_id);
  if (entry.label) clip.label = entry.label;
  clip.Validate();
  return clip;
}

std::vector<Clip> LoadClips(const Manifest& manifest, int workers) {
  manifest.Validate();
  std::vector<Clip> clips(manifest.entries.size());
  ParallelFor(clips.size(), workers, [&](std::size_t i) {
    clips[i] = LoadClip(manifest, manifest.entries[i]);
  });
  return clips;
}

}  // namespace tafi
