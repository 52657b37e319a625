#include "ntnlab/waveform_study.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ntnlab/channel.hpp"
#include "ntnlab/papr.hpp"

namespace ntnlab::wave {

void WelchAccumulator::add(std::span<const cplx> samples) {
    if (samples.size() < cfg_.segment) {
        return;  // too short to contribute a full segment
    }
    const std::vector<double> psd = welch_psd(samples, cfg_);
    // Same step rounding as welch_psd, so the segment count used for the
    // weighting matches the one actually averaged.
    const std::size_t step = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               (1.0 - cfg_.overlap) * static_cast<double>(cfg_.segment))));
    const std::size_t n_segs = (samples.size() - cfg_.segment) / step + 1;
    if (acc_.empty()) {
        acc_.assign(psd.size(), 0.0);
    }
    for (std::size_t i = 0; i < psd.size(); ++i) {
        acc_[i] += psd[i] * static_cast<double>(n_segs);
    }
    count_ += n_segs;
}

std::vector<double> WelchAccumulator::psd() const {
    if (count_ == 0) {
        throw std::logic_error("WelchAccumulator: no segments accumulated");
    }
    std::vector<double> out = acc_;
    const double inv = 1.0 / static_cast<double>(count_);
    for (double& v : out) v *= inv;
    return out;
}

namespace {

// Per-symbol PAPR of isolated bursts: each symbol is generated and, for
// f-OFDM, filtered on its own, so the filter's edge transients count.
void papr_populations(const StudyConfig& cfg, std::vector<double>& ofdm_out,
                      std::vector<double>& fofdm_out) {
    OfdmConfig sym_cfg = cfg.ofdm;
    sym_cfg.n_symbols = 1;
    sym_cfg.oversample = 1;
    const auto taps = cfg.filter.taps(1);

    ofdm_out.resize(cfg.papr_symbols);
    fofdm_out.resize(cfg.papr_symbols);

#pragma omp parallel for schedule(static)
    for (long long s = 0; s < static_cast<long long>(cfg.papr_symbols); ++s) {
        const auto idx = static_cast<std::size_t>(s);
        IqBuffer sym = generate_ofdm_serial(sym_cfg, sim::derive_seed(cfg.seed, idx));
        {
            double peak = 0.0, acc = 0.0;
            for (const auto& v : sym.samples) {
                const double p = std::norm(v);
                peak = std::max(peak, p);
                acc += p;
            }
            ofdm_out[idx] = 10.0 * std::log10(
                                peak * static_cast<double>(sym.samples.size()) / acc);
        }
        const auto filtered = fir_filter(sym.samples, taps);
        {
            double peak = 0.0, acc = 0.0;
            for (const auto& v : filtered) {
                const double p = std::norm(v);
                peak = std::max(peak, p);
                acc += p;
            }
            fofdm_out[idx] = 10.0 * std::log10(
                                 peak * static_cast<double>(filtered.size()) / acc);
        }
    }
}

}  // namespace

StudyResult run_waveform_study(const StudyConfig& cfg) {
    if (cfg.psd_symbols == 0 || cfg.papr_symbols == 0 || cfg.batch_symbols == 0) {
        throw std::invalid_argument("study symbol counts must be >= 1");
    }
    StudyResult result;

    // Linear chain at the critically sampled rate, nonlinear chain
    // oversampled; the same per-symbol payload streams feed both.
    OfdmConfig base = cfg.ofdm;
    base.oversample = 1;
    OfdmConfig over = cfg.ofdm;
    over.oversample = cfg.twta_oversample;

    WelchAccumulator acc_ofdm(cfg.welch);
    WelchAccumulator acc_fofdm(cfg.welch);
    WelchAccumulator acc_ofdm_twta(cfg.welch);
    WelchAccumulator acc_fofdm_twta(cfg.welch);

    const auto taps1 = cfg.filter.taps(1);
    const auto taps_over = cfg.filter.taps(cfg.twta_oversample);

    for (std::size_t done = 0, batch = 0; done < cfg.psd_symbols; ++batch) {
        const std::size_t n = std::min(cfg.batch_symbols, cfg.psd_symbols - done);
        done += n;
        const std::uint64_t batch_seed = sim::derive_seed(cfg.seed, 0x5000 + batch);

        OfdmConfig b1 = base;
        b1.n_symbols = n;
        IqBuffer ofdm1 = generate_ofdm(b1, batch_seed);
        acc_ofdm.add(ofdm1.samples);
        acc_fofdm.add(fir_filter(ofdm1.samples, taps1));

        OfdmConfig b4 = over;
        b4.n_symbols = n;
        IqBuffer ofdm4 = generate_ofdm(b4, batch_seed);
        IqBuffer ofdm4_twta = apply_twta(ofdm4, cfg.twta);
        acc_ofdm_twta.add(ofdm4_twta.samples);

        IqBuffer fofdm4 = ofdm4;
        fofdm4.samples = fir_filter(ofdm4.samples, taps_over);
        fofdm4.stages.push_back("fofdm");
        IqBuffer fofdm4_twta = apply_twta(fofdm4, cfg.twta);
        acc_fofdm_twta.add(fofdm4_twta.samples);
    }

    const double half_bw_1 = base.occupied_half_bw();
    const double half_bw_over = over.occupied_half_bw();
    result.ofdm_linear = summarize_psd(acc_ofdm.psd(), half_bw_1);
    result.fofdm_linear = summarize_psd(acc_fofdm.psd(), half_bw_1);
    result.ofdm_twta = summarize_psd(acc_ofdm_twta.psd(), half_bw_over);
    result.fofdm_twta = summarize_psd(acc_fofdm_twta.psd(), half_bw_over);

    papr_populations(cfg, result.papr_ofdm_db, result.papr_fofdm_db);
    result.papr_ofdm_1e3_db = ccdf_value_db(result.papr_ofdm_db, 1e-3);
    result.papr_fofdm_1e3_db = ccdf_value_db(result.papr_fofdm_db, 1e-3);
    return result;
}

}  // namespace ntnlab::wave
