#include "ntnlab/uplink_compose.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "ntnlab/channel.hpp"
#include "ntnlab/fft.hpp"
#include "ntnlab/ofdm.hpp"

namespace ntnlab::wave {

namespace {

void validate(const UplinkConfig& cfg, const std::vector<UplinkUe>& ues) {
    if (!is_power_of_two(cfg.fft_size)) {
        throw std::invalid_argument("uplink fft_size must be a power of two");
    }
    if (cfg.n_symbols == 0) {
        throw std::invalid_argument("uplink n_symbols must be >= 1");
    }
    if (ues.empty()) {
        throw std::invalid_argument("uplink needs at least one UE");
    }
    std::set<int> seen;
    const std::size_t total =
        cfg.n_symbols * (cfg.fft_size + cfg.cp_length);
    for (const auto& ue : ues) {
        if (ue.tones.empty()) {
            throw std::invalid_argument("every UE needs at least one tone");
        }
        for (int t : ue.tones) {
            if (t < 0 || static_cast<std::size_t>(t) >= cfg.fft_size) {
                throw std::invalid_argument("tone index out of range");
            }
            if (!seen.insert(t).second) {
                throw std::invalid_argument("overlapping tone assignments");
            }
        }
        if (!ue.doppler_scs.empty() && ue.doppler_scs.size() != total) {
            throw std::invalid_argument(
                "doppler trajectory must cover every sample");
        }
    }
}

// Per-UE baseband: unit-power QAM on its tones, one draw per symbol.
IqBuffer make_ue_signal(const UplinkConfig& cfg, const UplinkUe& ue,
                        std::uint64_t seed) {
    const std::size_t sym_len = cfg.fft_size + cfg.cp_length;
    IqBuffer buf;
    buf.samples.resize(cfg.n_symbols * sym_len);
    buf.sample_rate = 1.0;
    buf.symbol_length = sym_len;
    buf.stages = {"uplink_ue"};

    const Fft fft(cfg.fft_size);
    std::vector<cplx> freq(cfg.fft_size);
    const double scale = std::sqrt(static_cast<double>(cfg.fft_size));
    for (std::size_t s = 0; s < cfg.n_symbols; ++s) {
        const auto data =
            random_qam64(ue.tones.size(), sim::derive_seed(seed, s));
        for (auto& v : freq) v = cplx(0.0, 0.0);
        for (std::size_t i = 0; i < ue.tones.size(); ++i) {
            freq[static_cast<std::size_t>(ue.tones[i])] = data[i];
        }
        fft.inverse(freq);
        for (auto& v : freq) v *= scale;
        auto* dst = &buf.samples[s * sym_len];
        for (std::size_t i = 0; i < cfg.cp_length; ++i) {
            dst[i] = freq[cfg.fft_size - cfg.cp_length + i];
        }
        for (std::size_t i = 0; i < cfg.fft_size; ++i) {
            dst[cfg.cp_length + i] = freq[i];
        }
    }
    return buf;
}

// y(t) = x(t) * exp(-j 2 pi integral of f), with f given in subcarrier
// spacings (one subcarrier spacing = 1/fft_size cycles per sample).
void modulate(IqBuffer& buf, const UplinkConfig& cfg, double offset_scs,
              const std::vector<double>& doppler_scs) {
    const double base = offset_scs / static_cast<double>(cfg.fft_size);
    double phase = 0.0;
    for (std::size_t n = 0; n < buf.samples.size(); ++n) {
        double f = base;
        if (!doppler_scs.empty()) {
            f += doppler_scs[n] / static_cast<double>(cfg.fft_size);
        }
        buf.samples[n] *= std::polar(1.0, -2.0 * M_PI * phase);
        phase += f;
    }
}

// Receive transform: CP removal and per-symbol FFT; returns per-tone power
// accumulated over symbols.
std::vector<double> tone_powers(const IqBuffer& buf, const UplinkConfig& cfg) {
    const Fft fft(cfg.fft_size);
    const std::size_t sym_len = cfg.fft_size + cfg.cp_length;
    std::vector<double> acc(cfg.fft_size, 0.0);
    std::vector<cplx> work(cfg.fft_size);
    for (std::size_t s = 0; s < cfg.n_symbols; ++s) {
        const auto* src = &buf.samples[s * sym_len + cfg.cp_length];
        for (std::size_t i = 0; i < cfg.fft_size; ++i) work[i] = src[i];
        fft.forward(work);
        for (std::size_t i = 0; i < cfg.fft_size; ++i) {
            acc[i] += std::norm(work[i]);
        }
    }
    return acc;
}

}  // namespace

UplinkComposite compose_uplink(const UplinkConfig& cfg,
                               const std::vector<UplinkUe>& ues) {
    validate(cfg, ues);
    const std::size_t sym_len = cfg.fft_size + cfg.cp_length;
    UplinkComposite out;
    out.composite.samples.assign(cfg.n_symbols * sym_len, cplx(0.0, 0.0));
    out.composite.sample_rate = 1.0;
    out.composite.symbol_length = sym_len;
    out.composite.stages = {"uplink_composite"};
    out.per_ue.reserve(ues.size());

    for (std::size_t k = 0; k < ues.size(); ++k) {
        IqBuffer ue_sig = make_ue_signal(cfg, ues[k], sim::derive_seed(cfg.seed, k));
        modulate(ue_sig, cfg, ues[k].offset_scs, ues[k].doppler_scs);
        for (std::size_t n = 0; n < ue_sig.samples.size(); ++n) {
            out.composite.samples[n] += ue_sig.samples[n];
        }
        out.per_ue.push_back(std::move(ue_sig));
    }

    out.leakage_db.assign(ues.size(), std::vector<double>(ues.size(), 0.0));
    for (std::size_t i = 0; i < ues.size(); ++i) {
        const auto powers = tone_powers(out.per_ue[i], cfg);
        for (std::size_t j = 0; j < ues.size(); ++j) {
            double p = 0.0;
            for (int t : ues[j].tones) {
                p += powers[static_cast<std::size_t>(t)];
            }
            out.leakage_db[i][j] = p;
        }
        const double own = std::max(out.leakage_db[i][i], 1e-300);
        for (std::size_t j = 0; j < ues.size(); ++j) {
            out.leakage_db[i][j] =
                10.0 * std::log10(std::max(out.leakage_db[i][j], 1e-300) / own);
        }
    }
    return out;
}

IqBuffer apply_common_correction(const IqBuffer& buffer, double offset_scs,
                                 const UplinkConfig& cfg) {
    IqBuffer out = buffer;
    const double f = offset_scs / static_cast<double>(cfg.fft_size);
    double phase = 0.0;
    for (auto& v : out.samples) {
        v *= std::polar(1.0, 2.0 * M_PI * phase);
        phase += f;
    }
    out.stages.push_back("common_correction");
    return out;
}

}  // namespace ntnlab::wave
