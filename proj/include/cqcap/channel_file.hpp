#pragma once

#include <string>

#include "cqcap/channel.hpp"

namespace cqcap {

// Channel spec files are JSON:
//
//   {
//     "dim": 2,
//     "letters": [
//       {"label": "0", "matrix": [[[1.0, 0.0], [0.0, 0.0]],
//                                 [[0.0, 0.0], [0.0, 0.0]]]}
//     ]
//   }
//
// Matrices are row-major with explicit [re, im] entries, so files are
// diff-friendly and language-neutral.

// Parses and validates; error messages carry the path and the offending
// letter or field.
ChannelPtr parse_channel_file(const std::string& path);

// Same grammar from an in-memory string; `origin` names the source in
// error messages.
ChannelPtr parse_channel_text(const std::string& text, const std::string& origin);

std::string emit_channel_text(const CQChannel& channel);

void write_channel_file(const CQChannel& channel, const std::string& path);

} // namespace cqcap
