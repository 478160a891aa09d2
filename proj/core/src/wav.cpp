#include "adforge/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

namespace adforge {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct Reader {
    const unsigned char* p;
    std::size_t size;
    std::size_t pos = 0;

    bool can(std::size_t n) const { return pos + n <= size; }
    std::uint32_t u32() {
        std::uint32_t v = static_cast<std::uint32_t>(p[pos]) |
                          (static_cast<std::uint32_t>(p[pos + 1]) << 8) |
                          (static_cast<std::uint32_t>(p[pos + 2]) << 16) |
                          (static_cast<std::uint32_t>(p[pos + 3]) << 24);
        pos += 4;
        return v;
    }
    std::uint16_t u16() {
        std::uint16_t v = static_cast<std::uint16_t>(
            p[pos] | (static_cast<std::uint16_t>(p[pos + 1]) << 8));
        pos += 2;
        return v;
    }
    bool tag(const char* t) {
        bool ok = can(4) && std::memcmp(p + pos, t, 4) == 0;
        if (ok) pos += 4;
        return ok;
    }
};

void append_u32le(std::string& out, std::uint32_t v) {
    out += static_cast<char>(v & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
    out += static_cast<char>((v >> 16) & 0xff);
    out += static_cast<char>((v >> 24) & 0xff);
}

void append_u16le(std::string& out, std::uint16_t v) {
    out += static_cast<char>(v & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
}

}  // namespace

AudioTrack load_audio(std::string_view bytes) {
    Reader r{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()};

    if (!r.tag("RIFF")) throw parse_error("WAV: missing RIFF header");
    if (!r.can(4)) throw parse_error("WAV: truncated header");
    r.u32();  // declared file size, unreliable in practice
    if (!r.tag("WAVE")) throw parse_error("WAV: missing WAVE tag");

    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
    bool have_fmt = false;

    const unsigned char* data = nullptr;
    std::uint32_t data_size = 0;

    while (r.can(8)) {
        char id[4];
        std::memcpy(id, r.p + r.pos, 4);
        r.pos += 4;
        std::uint32_t chunk_size = r.u32();

        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (chunk_size < 16 || !r.can(chunk_size))
                throw parse_error("WAV: truncated fmt chunk");
            std::size_t fmt_start = r.pos;
            format = r.u16();
            channels = r.u16();
            sample_rate = r.u32();
            r.u32();  // byte rate
            r.u16();  // block align
            bits = r.u16();
            if (format == kFormatExtensible && chunk_size >= 40) {
                // wValidBitsPerSample(2) + dwChannelMask(4), then the sub-format GUID
                format = static_cast<std::uint16_t>(r.p[fmt_start + 24] |
                                                    (r.p[fmt_start + 25] << 8));
            }
            r.pos = fmt_start + chunk_size;
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            if (!r.can(chunk_size)) throw parse_error("WAV: truncated data chunk");
            data = r.p + r.pos;
            data_size = chunk_size;
            r.pos += chunk_size;
        } else {
            if (!r.can(chunk_size)) throw parse_error("WAV: truncated chunk");
            r.pos += chunk_size;
        }
        if (chunk_size % 2 == 1 && r.can(1)) ++r.pos;  // chunks are word-aligned
    }

    if (!have_fmt) throw parse_error("WAV: missing fmt chunk");
    if (data == nullptr) throw parse_error("WAV: missing data chunk");
    if (channels == 0) throw parse_error("WAV: zero channels");
    if (sample_rate == 0) throw parse_error("WAV: zero sample rate");

    if (format != kFormatPcm && format != kFormatFloat)
        throw parse_error("WAV: unsupported compression format " + std::to_string(format) +
                          " (PCM 16-bit or float32 only)");
    if (format == kFormatPcm && bits != 16)
        throw parse_error("WAV: unsupported PCM bit depth " + std::to_string(bits));
    if (format == kFormatFloat && bits != 32)
        throw parse_error("WAV: unsupported float bit depth " + std::to_string(bits));

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    if (data_size % frame_bytes != 0)
        throw parse_error("WAV: data chunk is not a whole number of frames");
    const std::size_t frames = data_size / frame_bytes;
    if (frames == 0) throw parse_error("WAV: empty data chunk");

    AudioTrack track;
    track.sample_rate_hz = static_cast<int>(sample_rate);
    track.samples.resize(frames);

    for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        const unsigned char* frame = data + f * frame_bytes;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const unsigned char* s = frame + c * bytes_per_sample;
            if (format == kFormatPcm) {
                std::int16_t v = static_cast<std::int16_t>(s[0] | (s[1] << 8));
                acc += static_cast<double>(v) / 32768.0;
            } else {
                std::uint32_t bits32 = static_cast<std::uint32_t>(s[0]) |
                                       (static_cast<std::uint32_t>(s[1]) << 8) |
                                       (static_cast<std::uint32_t>(s[2]) << 16) |
                                       (static_cast<std::uint32_t>(s[3]) << 24);
                float v;
                std::memcpy(&v, &bits32, 4);
                if (!std::isfinite(v)) throw parse_error("WAV: non-finite float sample");
                acc += static_cast<double>(v);
            }
        }
        track.samples[f] =
            static_cast<float>(std::clamp(acc / channels, -1.0, 1.0));
    }
    return track;
}

std::string serialize_wav_pcm16(const AudioTrack& track) {
    const std::uint32_t n = static_cast<std::uint32_t>(track.samples.size());
    const std::uint32_t data_size = n * 2;

    std::string out;
    out.reserve(44 + data_size);
    out += "RIFF";
    append_u32le(out, 36 + data_size);
    out += "WAVE";
    out += "fmt ";
    append_u32le(out, 16);
    append_u16le(out, kFormatPcm);
    append_u16le(out, 1);  // mono
    append_u32le(out, static_cast<std::uint32_t>(track.sample_rate_hz));
    append_u32le(out, static_cast<std::uint32_t>(track.sample_rate_hz) * 2);
    append_u16le(out, 2);
    append_u16le(out, 16);
    out += "data";
    append_u32le(out, data_size);
    for (float v : track.samples) {
        double clamped = std::clamp(static_cast<double>(v), -1.0, 1.0);
        auto q = static_cast<std::int16_t>(std::lrint(clamped * 32767.0));
        append_u16le(out, static_cast<std::uint16_t>(q));
    }
    return out;
}

}  // namespace adforge
