#ifndef TAFI_PROFILES_H_
#define TAFI_PROFILES_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tafi/interp.h"
#include "tafi/texture_class.h"

namespace tafi {

// Profile keys: the three class names plus "mixed" and "baseline".
inline constexpr std::string_view kMixedKey = "mixed";
inline constexpr std::string_view kBaselineKey = "baseline";

struct ProfileMeta {
  double final_loss = 0;  // mean absolute luma error on the last batch
  std::uint64_t seed = 0;
  int triplet_count = 0;
};

struct Profile {
  InterpParams params;
  ProfileMeta meta;
};

// Per-class tuned configurations; together the three class entries form the
// texture-aware interpolator. The baseline entry is always present.
class TunedProfileSet {
 public:
  TunedProfileSet();

  void Set(std::string_view key, Profile profile);
  const Profile* Find(std::string_view key) const;
  bool Has(std::string_view key) const { return Find(key) != nullptr; }
  const std::map<std::string, Profile, std::less<>>& entries() const {
    return entries_;
  }

  // Clip ids the profiles were tuned on, for held-out checks.
  std::vector<std::string> training_clips;

 private:
  std::map<std::string, Profile, std::less<>> entries_;
};

struct RouteResult {
  InterpParams params;
  std::string key;        // entry actually used
  bool fallback = false;  // true when the class entry was missing
};

// Class entry, else mixed, else baseline.
RouteResult Route(const TunedProfileSet& profiles, TextureClass cls);

std::string SerializeProfiles(const TunedProfileSet& profiles);
TunedProfileSet ParseProfiles(std::string_view text);
void SaveProfiles(const TunedProfileSet& profiles,
                  const std::filesystem::path& path);
TunedProfileSet LoadProfiles(const std::filesystem::path& path);

}  // namespace tafi

#endif  // TAFI_PROFILES_H_
