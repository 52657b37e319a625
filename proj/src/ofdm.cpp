#include "ntnlab/ofdm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ntnlab/channel.hpp"

namespace ntnlab::wave {

void OfdmConfig::validate() const {
    if (!is_power_of_two(fft_size)) {
        throw std::invalid_argument("ofdm.fft_size must be a power of two");
    }
    if (used_subcarriers == 0 || used_subcarriers >= fft_size) {
        throw std::invalid_argument("ofdm.used_subcarriers must be in 1..fft_size-1");
    }
    if (used_subcarriers % 2 != 0) {
        throw std::invalid_argument("ofdm.used_subcarriers must be even");
    }
    if (n_symbols == 0) {
        throw std::invalid_argument("ofdm.n_symbols must be >= 1");
    }
    if (oversample < 1 || !is_power_of_two(static_cast<std::size_t>(oversample))) {
        throw std::invalid_argument("ofdm.oversample must be a power of two >= 1");
    }
}

std::vector<cplx> random_qam64(std::size_t count, std::uint64_t seed) {
    // Per-axis Gray code over 8 levels, normalized to unit average power.
    static constexpr int kGrayLevel[8] = {0, 1, 3, 2, 6, 7, 5, 4};
    const double scale = 1.0 / std::sqrt(42.0);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> bits(0, 63);
    std::vector<cplx> out(count);
    for (auto& s : out) {
        const int b = bits(rng);
        const int li = kGrayLevel[b & 7];
        const int lq = kGrayLevel[(b >> 3) & 7];
        s = cplx((2 * li - 7) * scale, (2 * lq - 7) * scale);
    }
    return out;
}

namespace {

// Used tones follow the LTE downlink convention: +-1..+-used/2, DC unused.
void map_symbol(const OfdmConfig& cfg, const std::vector<cplx>& data,
                std::span<cplx> freq) {
    const std::size_t n = cfg.ifft_size();
    const std::size_t half = cfg.used_subcarriers / 2;
    for (auto& v : freq) v = cplx(0.0, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        freq[i + 1] = data[i];                 // +1 .. +half
        freq[n - 1 - i] = data[half + i];      // -1 .. -half
    }
}

void synthesize_symbol(const OfdmConfig& cfg, const Fft& fft,
                       std::uint64_t seed, std::size_t symbol_index,
                       std::span<cplx> out) {
    const std::size_t n = cfg.ifft_size();
    const std::size_t cp = cfg.cp_length * static_cast<std::size_t>(cfg.oversample);
    std::vector<cplx> freq(n);
    const auto data = random_qam64(
        cfg.used_subcarriers, sim::derive_seed(seed, symbol_index));
    map_symbol(cfg, data, freq);
    fft.inverse(freq);
    // Unitary scaling: inverse() divides by n, so sqrt(n) makes the symbol's
    // time-domain energy equal the subcarrier energy at oversample 1; the
    // extra sqrt(oversample) keeps the average sample power independent of
    // the evaluation grid.
    const double scale = std::sqrt(static_cast<double>(n)) *
                         std::sqrt(static_cast<double>(cfg.oversample));
    for (auto& v : freq) v *= scale;
    for (std::size_t i = 0; i < cp; ++i) {
        out[i] = freq[n - cp + i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[cp + i] = freq[i];
    }
}

IqBuffer generate_impl(const OfdmConfig& cfg, std::uint64_t seed, bool parallel) {
    cfg.validate();
    const std::size_t sym_len = cfg.symbol_length();
    IqBuffer buf;
    buf.samples.resize(sym_len * cfg.n_symbols);
    buf.sample_rate = static_cast<double>(cfg.oversample);
    buf.occupied_half_bw = cfg.occupied_half_bw();
    buf.symbol_length = sym_len;
    buf.stages = {"ofdm"};

    const Fft fft(cfg.ifft_size());
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long s = 0; s < static_cast<long long>(cfg.n_symbols); ++s) {
            synthesize_symbol(cfg, fft, seed, static_cast<std::size_t>(s),
                              std::span<cplx>(buf.samples)
                                  .subspan(static_cast<std::size_t>(s) * sym_len,
                                           sym_len));
        }
    } else {
        for (std::size_t s = 0; s < cfg.n_symbols; ++s) {
            synthesize_symbol(cfg, fft, seed, s,
                              std::span<cplx>(buf.samples)
                                  .subspan(s * sym_len, sym_len));
        }
    }
    return buf;
}

}  // namespace

IqBuffer generate_ofdm(const OfdmConfig& cfg, std::uint64_t seed) {
    return generate_impl(cfg, seed, true);
}

IqBuffer generate_ofdm_serial(const OfdmConfig& cfg, std::uint64_t seed) {
    return generate_impl(cfg, seed, false);
}

}  // namespace ntnlab::wave
