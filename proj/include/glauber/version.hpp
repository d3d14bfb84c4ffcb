#pragma once

namespace glauber {

inline constexpr const char* kArtifactName = "glaubersim";
inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace glauber
