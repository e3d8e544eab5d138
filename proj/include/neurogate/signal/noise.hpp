#pragma once

#include "neurogate/signal/types.hpp"

namespace neurogate::signal {

// Additive contamination at a target SNR.
//
// One white Gaussian draw n is scaled so that its power alone sits at
// target_snr_db below the clean signal power. A 1/f-shaped copy (DC bin
// zeroed) and a muscle-band filtered copy are derived from the same draw,
// and the three are mixed into the clean signal with the spec weights.
// Only the white component is SNR-scaled; the shaped copies ride on it.
// Deterministic for a fixed NoiseSpec::seed.
RawEeg inject_noise(const RawEeg& clean, const NoiseSpec& spec);

// 1/f spectral shaping of one channel, in place. Frequencies in Hz; the DC
// bin is zeroed.
void pink_shape(std::span<double> x, double sample_rate_hz);

}  // namespace neurogate::signal
