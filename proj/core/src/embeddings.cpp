#include "adforge/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace adforge {

namespace {

constexpr char kMagic[4] = {'A', 'D', 'F', 'E'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t read_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u32le(std::string& out, std::uint32_t v) {
    out += static_cast<char>(v & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
    out += static_cast<char>((v >> 16) & 0xff);
    out += static_cast<char>((v >> 24) & 0xff);
}

float read_f32le(const unsigned char* p) {
    std::uint32_t bits = read_u32le(p);
    float f;
    static_assert(sizeof(f) == 4);
    std::memcpy(&f, &bits, 4);
    return f;
}

void validate_vector(const std::vector<float>& v, std::size_t row) {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]))
            throw parse_error("embedding row " + std::to_string(row) +
                              ": non-finite component " + std::to_string(i));
        norm_sq += static_cast<double>(v[i]) * v[i];
    }
    if (norm_sq <= 0.0)
        throw parse_error("embedding row " + std::to_string(row) + ": zero vector");
}

std::vector<SpeakerEmbedding> load_binary(std::string_view bytes) {
    if (bytes.size() < 16) throw parse_error("embedding file: truncated header");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t version = read_u32le(p + 4);
    const std::uint32_t dim = read_u32le(p + 8);
    const std::uint32_t count = read_u32le(p + 12);

    if (version != kVersion)
        throw parse_error("embedding file: unsupported version " + std::to_string(version));
    if (count > 0 && dim == 0)
        throw parse_error("embedding file: zero dimension");

    const std::size_t expected = 16 + static_cast<std::size_t>(count) * dim * 4;
    if (bytes.size() != expected)
        throw parse_error("embedding file: body is " + std::to_string(bytes.size() - 16) +
                          " bytes, expected " + std::to_string(expected - 16) + " (" +
                          std::to_string(count) + " rows x dim " + std::to_string(dim) + ")");

    std::vector<SpeakerEmbedding> out;
    out.reserve(count);
    const unsigned char* body = p + 16;
    for (std::uint32_t row = 0; row < count; ++row) {
        SpeakerEmbedding e;
        e.segment_id = row;
        e.vector.resize(dim);
        for (std::uint32_t j = 0; j < dim; ++j)
            e.vector[j] = read_f32le(body + (static_cast<std::size_t>(row) * dim + j) * 4);
        validate_vector(e.vector, row);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<SpeakerEmbedding> load_csv(std::string_view bytes) {
    std::vector<SpeakerEmbedding> out;
    std::size_t pos = 0;
    long line_no = 0;
    std::size_t dim = 0;
    bool saw_header = false;

    while (pos <= bytes.size()) {
        std::size_t nl = bytes.find('\n', pos);
        std::string_view line = bytes.substr(
            pos, nl == std::string_view::npos ? bytes.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? bytes.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        if (!saw_header) {
            if (line.rfind("segment_id", 0) != 0)
                throw parse_error("embedding CSV: expected 'segment_id,v0,...' header",
                                  line_no);
            dim = std::count(line.begin(), line.end(), ',');
            if (dim == 0) throw parse_error("embedding CSV: header has no columns", line_no);
            saw_header = true;
            continue;
        }

        SpeakerEmbedding e;
        std::size_t field = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            std::string_view cell = line.substr(
                start, comma == std::string_view::npos ? line.size() - start : comma - start);
            if (field == 0) {
                std::size_t id = 0;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), id);
                if (ec != std::errc() || ptr != cell.data() + cell.size())
                    throw parse_error("embedding CSV: bad segment_id", line_no);
                e.segment_id = id;
            } else {
                float v = 0.0f;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc() || ptr != cell.data() + cell.size())
                    throw parse_error("embedding CSV: bad float in column " +
                                          std::to_string(field),
                                      line_no);
                e.vector.push_back(v);
            }
            ++field;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (e.vector.size() != dim)
            throw parse_error("embedding CSV: row has " + std::to_string(e.vector.size()) +
                                  " components, header declares " + std::to_string(dim),
                              line_no);
        validate_vector(e.vector, out.size());
        out.push_back(std::move(e));
    }
    if (!saw_header && !out.empty())
        throw parse_error("embedding CSV: missing header");
    return out;
}

}  // namespace

std::vector<SpeakerEmbedding> load_embeddings(std::string_view bytes) {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0)
        return load_binary(bytes);
    if (bytes.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
    return load_csv(bytes);
}

std::string serialize_embeddings(const std::vector<SpeakerEmbedding>& embeddings) {
    const std::size_t dim = embeddings.empty() ? 0 : embeddings.front().vector.size();
    for (const auto& e : embeddings)
        if (e.vector.size() != dim)
            throw std::invalid_argument("serialize_embeddings: mixed dimensions");

    std::string out;
    out.reserve(16 + embeddings.size() * dim * 4);
    out.append(kMagic, 4);
    append_u32le(out, kVersion);
    append_u32le(out, static_cast<std::uint32_t>(dim));
    append_u32le(out, static_cast<std::uint32_t>(embeddings.size()));
    for (const auto& e : embeddings) {
        for (float v : e.vector) {
            std::uint32_t bits;
            std::memcpy(&bits, &v, 4);
            append_u32le(out, bits);
        }
    }
    return out;
}

}  // namespace adforge
