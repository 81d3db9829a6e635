#ifndef TAFI_TEXTURE_CLASS_H_
#define TAFI_TEXTURE_CLASS_H_

#include <array>
#include <optional>
#include <string_view>

namespace tafi {

// Homogeneous video texture taxonomy.
//   kStatic: rigid texture under one global (camera) motion.
//   kDynDis: discernible parts moving independently.
//   kDynCon: spatially irregular content moving as a continuum.
enum class TextureClass { kStatic = 0, kDynDis = 1, kDynCon = 2 };

inline constexpr std::array<TextureClass, 3> kAllClasses = {
    TextureClass::kStatic, TextureClass::kDynDis, TextureClass::kDynCon};

std::string_view ClassName(TextureClass cls);

// Accepts "static", "dyndis", "dyncon".
std::optional<TextureClass> ParseClass(std::string_view name);

}  // namespace tafi

#endif  // TAFI_TEXTURE_CLASS_H_
