#pragma once

namespace dirlat {

inline constexpr const char* kCheckpointMagic = "DIRLAT-CKPT-v1";
inline constexpr int kArtifactSchemaVersion = 1;

}  // namespace dirlat
