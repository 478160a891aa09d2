#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adforge/types.hpp"

namespace adforge {

// Embedding file formats:
//   binary: 16-byte header (magic "ADFE", u32 version=1, u32 dim, u32 count,
//           all little-endian) followed by count*dim packed little-endian
//           float32 rows; segment_id is the row index.
//   CSV:    header line "segment_id,v0,...,v{D-1}", one row per embedding.
// The loader detects the format by the magic bytes. Every vector is checked
// finite and nonzero; violations name the offending row.
std::vector<SpeakerEmbedding> load_embeddings(std::string_view bytes);

// Binary writer for the format above. Vectors must share one dimension.
std::string serialize_embeddings(const std::vector<SpeakerEmbedding>& embeddings);

}  // namespace adforge
