#include "adforge/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace adforge {

namespace {

using nlohmann::json;

std::string opt_string(const json& obj, const char* key) {
    if (!obj.contains(key) || obj[key].is_null()) return {};
    if (!obj[key].is_string())
        throw parse_error(std::string("manifest: field '") + key + "' must be a string");
    return obj[key].get<std::string>();
}

}  // namespace

std::vector<MovieManifest> parse_manifest(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw parse_error("manifest: " + std::string(e.what()));
    }
    if (!doc.is_array()) throw parse_error("manifest: expected a top-level array");

    std::vector<MovieManifest> entries;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& item = doc[i];
        const std::string where = "manifest entry " + std::to_string(i);
        if (!item.is_object()) throw parse_error(where + ": expected an object");

        MovieManifest m;
        m.movie_id = opt_string(item, "movie_id");
        m.transcript_path = opt_string(item, "transcript");
        m.transcript_format = opt_string(item, "transcript_format");
        m.embeddings_path = opt_string(item, "embeddings");
        m.mixed_audio_path = opt_string(item, "mixed_audio");
        m.reference_audio_path = opt_string(item, "reference_audio");
        m.subtitles_path = opt_string(item, "subtitles");
        m.names_path = opt_string(item, "names");

        if (m.movie_id.empty()) throw parse_error(where + ": missing movie_id");
        if (m.transcript_path.empty())
            throw parse_error(where + " (" + m.movie_id + "): missing transcript");
        if (m.embeddings_path.empty())
            throw parse_error(where + " (" + m.movie_id + "): missing embeddings");
        if (!seen.insert(m.movie_id).second)
            throw parse_error(where + ": duplicate movie_id '" + m.movie_id + "'");

        entries.push_back(std::move(m));
    }
    return entries;
}

std::vector<MovieManifest> load_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("manifest: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();

    std::vector<MovieManifest> entries = parse_manifest(ss.str());

    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (p.empty()) return;
        std::filesystem::path fp(p);
        if (fp.is_relative()) p = (base / fp).string();
    };
    for (MovieManifest& m : entries) {
        resolve(m.transcript_path);
        resolve(m.embeddings_path);
        resolve(m.mixed_audio_path);
        resolve(m.reference_audio_path);
        resolve(m.subtitles_path);
        resolve(m.names_path);
    }
    return entries;
}

}  // namespace adforge
