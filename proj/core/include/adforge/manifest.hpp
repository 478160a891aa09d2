#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adforge/types.hpp"

namespace adforge {

// Parse a manifest: a JSON array of objects with fields
//   movie_id (required), transcript (required), embeddings (required),
//   transcript_format, mixed_audio, reference_audio, subtitles, names.
// movie_id must be unique within the manifest.
std::vector<MovieManifest> parse_manifest(std::string_view bytes);

// parse_manifest on a file, with relative paths resolved against the
// manifest's directory.
std::vector<MovieManifest> load_manifest_file(const std::string& path);

}  // namespace adforge
