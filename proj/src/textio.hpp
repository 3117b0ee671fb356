// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "errors.hpp"

namespace nearfocus {

// Shortest round-trippable decimal form; CSV and JSON values all go through
// here so emitted files are bit-stable across platforms with IEEE doubles.
inline std::string format_g17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline std::ofstream open_output_file(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open output file: " + path);
  }
  return out;
}

}  // namespace nearfocus
