#pragma once

namespace afc {

inline constexpr const char* kVersion = "0.1.0";

// Version for all JSON documents emitted by the library and CLI.
inline constexpr int kSchemaVersion = 1;

// Identifier of the RNG pipeline, recorded in sample metadata so that a
// stream can be reproduced bit-for-bit by a matching build.
inline constexpr const char* kRngAlgorithm = "mt19937_64/afc-dist-v1";

}  // namespace afc
