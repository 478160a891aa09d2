#pragma once

#include <string>
#include <string_view>

#include "adforge/types.hpp"

namespace adforge {

// Read a RIFF/WAV file (PCM 16-bit or IEEE float32, any channel count).
// Channels are downmixed to mono by arithmetic mean; 16-bit samples are
// scaled to [-1, 1] by 1/32768. Throws parse_error on non-PCM compression
// or a truncated data chunk.
AudioTrack load_audio(std::string_view bytes);

// Write a mono PCM 16-bit WAV (samples clamped to [-1, 1]).
std::string serialize_wav_pcm16(const AudioTrack& track);

}  // namespace adforge
