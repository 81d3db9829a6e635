#ifndef TAFI_MANIFEST_H_
#define TAFI_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tafi/media.h"
#include "tafi/texture_class.h"

namespace tafi {

enum class Container { kY4m, kRaw };

struct ManifestEntry {
  std::string clip_id;
  std::filesystem::path path;  // absolute, or relative to the manifest
  Container container = Container::kY4m;
  std::optional<TextureClass> label;
  int width = 0;  // raw only
  int height = 0;
  Rational fps;
};

// Comma-separated text with header
//   clip_id,path,container,label,width,height,fps
// label may be empty; width/height/fps are required for raw entries only and
// fps is written "num:den".
struct Manifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  // Throws kEmptyManifest / kInvalidSpec (duplicate ids, raw without
  // geometry).
  void Validate() const;
};

Manifest ParseManifest(std::string_view text,
                       const std::filesystem::path& base_dir);
Manifest LoadManifest(const std::filesystem::path& path);
std::string SerializeManifest(const Manifest& manifest);
void SaveManifest(const Manifest& manifest, const std::filesystem::path& path);

// Loads the clip; the manifest label overrides any label in the file.
Clip LoadClip(const Manifest& manifest, const ManifestEntry& entry);
std::vector<Clip> LoadClips(const Manifest& manifest, int workers = 0);

}  // namespace tafi

#endif  // TAFI_MANIFEST_H_
