#pragma once

#include <cstdint>
#include <vector>

#include "ntnlab/iq_buffer.hpp"

namespace ntnlab::wave {

// One narrowband uplink user: a disjoint set of tone indices (0-based bins
// of the shared transform), a constant carrier offset (local oscillator
// plus any common part, normalized to the subcarrier spacing), and an
// optional per-sample Doppler trajectory in the same units.
struct UplinkUe {
    std::vector<int> tones;
    double offset_scs = 0.0;               // frequency offset / subcarrier spacing
    std::vector<double> doppler_scs;       // optional, one value per sample
};

struct UplinkConfig {
    std::size_t fft_size = 64;   // power of two, > max tone index
    std::size_t cp_length = 16;
    std::size_t n_symbols = 14;
    std::uint64_t seed = 0;
};

struct UplinkComposite {
    IqBuffer composite;
    // leakage_db[i][j]: power of UE i landing in UE j's tones after the
    // receive transform, in dB relative to UE i's power in its own tones.
    std::vector<std::vector<double>> leakage_db;
    std::vector<IqBuffer> per_ue;  // individually offset signals (sum = composite)
};

// Superposition of per-UE signals, each modulated by its own frequency
// offset and Doppler trajectory, plus the resulting inter-user leakage
// matrix. Throws std::invalid_argument for overlapping tone assignments.
UplinkComposite compose_uplink(const UplinkConfig& config,
                               const std::vector<UplinkUe>& ues);

// Removes a common frequency offset (receiver-side correction).
IqBuffer apply_common_correction(const IqBuffer& buffer, double offset_scs,
                                 const UplinkConfig& config);

}  // namespace ntnlab::wave
