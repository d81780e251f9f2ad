// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <string>

#include "naec/types.hpp"

// Seeded synthetic test signals standing in for recorded speech and music.
namespace naec::signals {

enum class Voice { kMale, kFemale };

// Source-filter speech: glottal harmonic series through slowly moving formant
// resonators, fricative noise bursts and short pauses. Peak 0.5.
AudioSignal speech(double seconds, Voice voice, std::uint64_t seed);

// Polyphonic harmonic tones on a pentatonic scale with decaying envelopes.
// Peak 0.5.
AudioSignal music(double seconds, std::uint64_t seed);

// Unit-variance white Gaussian noise scaled to peak 0.5.
AudioSignal white_noise(double seconds, std::uint64_t seed);

// "speech_male", "speech_female", "music", "noise".
AudioSignal by_name(const std::string& name, double seconds,
                    std::uint64_t seed);

}  // namespace naec::signals
