#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "ntnlab/channel.hpp"
#include "ntnlab/fofdm.hpp"
#include "ntnlab/ofdm.hpp"
#include "ntnlab/papr.hpp"
#include "ntnlab/spectrum.hpp"
#include "ntnlab/twta.hpp"
#include "ntnlab/uplink_compose.hpp"

using namespace ntnlab::wave;

TEST_CASE("OFDM symbol length and determinism") {
    OfdmConfig cfg;
    cfg.n_symbols = 1;
    const auto one = generate_ofdm(cfg, 7);
    CHECK(one.size() == 1096);  // 1024 + 72
    CHECK(one.symbol_length == 1096);
    CHECK(one.sample_rate == doctest::Approx(1.0));

    cfg.n_symbols = 3;
    const auto a = generate_ofdm(cfg, 99);
    const auto b = generate_ofdm(cfg, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.samples[i] == b.samples[i]);
    }
    const auto c = generate_ofdm(cfg, 100);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        differs |= a.samples[i] != c.samples[i];
    }
    CHECK(differs);
}

TEST_CASE("Parseval: time-domain symbol energy equals subcarrier energy") {
    OfdmConfig cfg;
    cfg.n_symbols = 4;
    const std::uint64_t seed = 5;
    const auto buf = generate_ofdm(cfg, seed);
    for (std::size_t s = 0; s < cfg.n_symbols; ++s) {
        // Skip the CP: the useful part carries exactly the tone energy of
        // this symbol's payload.
        double energy = 0.0;
        for (std::size_t i = cfg.cp_length; i < 1096; ++i) {
            energy += std::norm(buf.samples[s * 1096 + i]);
        }
        double payload = 0.0;
        for (const auto& a :
             random_qam64(cfg.used_subcarriers, ntnlab::sim::derive_seed(seed, s))) {
            payload += std::norm(a);
        }
        CHECK(energy == doctest::Approx(payload).epsilon(1e-12));
        CHECK(payload == doctest::Approx(600.0).epsilon(0.1));  // unit average
    }
}

TEST_CASE("oversampled generation keeps payload and average power") {
    OfdmConfig base;
    base.n_symbols = 2;
    OfdmConfig over = base;
    over.oversample = 4;
    const auto b1 = generate_ofdm(base, 17);
    const auto b4 = generate_ofdm(over, 17);
    CHECK(b4.size() == 4 * b1.size());
    CHECK(b4.sample_rate == doctest::Approx(4.0));
    // Same continuous waveform: every 4th sample of the useful part
    // matches the critically sampled one.
    const std::size_t cp1 = base.cp_length;
    const std::size_t cp4 = base.cp_length * 4;
    for (std::size_t i = 0; i < 1024; i += 97) {
        const auto x1 = b1.samples[cp1 + i];
        const auto x4 = b4.samples[cp4 + 4 * i];
        CHECK(x4.real() == doctest::Approx(x1.real()).epsilon(1e-9));
        CHECK(x4.imag() == doctest::Approx(x1.imag()).epsilon(1e-9));
    }
    CHECK(b4.power() == doctest::Approx(b1.power()).epsilon(1e-3));
}

TEST_CASE("64QAM constellation has unit average power and 64 points") {
    const auto syms = random_qam64(200000, 3);
    double p = 0.0;
    for (const auto& s : syms) p += std::norm(s);
    p /= static_cast<double>(syms.size());
    CHECK(p == doctest::Approx(1.0).epsilon(0.01));
    std::set<std::pair<double, double>> points;
    for (const auto& s : syms) points.insert({s.real(), s.imag()});
    CHECK(points.size() == 64);
}

TEST_CASE("filter taps: symmetric, unit DC gain, ripple within 0.5 dB") {
    FilterSpec spec;
    const auto taps = spec.taps(1);
    REQUIRE(taps.size() == 513);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        CHECK(taps[i] == taps[taps.size() - 1 - i]);
    }
    const double dc = std::accumulate(taps.begin(), taps.end(), 0.0);
    CHECK(dc == doctest::Approx(1.0).epsilon(1e-12));

    // In-band ripple over the used tones.
    for (int k = 1; k <= 300; k += 3) {
        const double mag = std::abs(tap_response(taps, k / 1024.0));
        CHECK(std::abs(20.0 * std::log10(mag)) <= 0.5);
    }
}

TEST_CASE("filter response: in-band tone passes, far tone heavily attenuated") {
    FilterSpec spec;
    const auto taps = spec.taps(1);
    const double inband = std::abs(tap_response(taps, 100.0 / 1024.0));
    CHECK(std::abs(20.0 * std::log10(inband)) <= 0.5);
    // 1.5x the band edge.
    const double stop = std::abs(tap_response(taps, 1.5 * 300.0 / 1024.0));
    CHECK(20.0 * std::log10(stop) <= -60.0);
}

TEST_CASE("fofdm convolution identities and band checking") {
    FilterSpec spec;
    OfdmConfig cfg;

    // Impulse in -> taps out.
    IqBuffer impulse;
    impulse.samples.assign(1, cplx(1.0, 0.0));
    impulse.sample_rate = 1.0;
    impulse.occupied_half_bw = cfg.occupied_half_bw();
    const auto resp = apply_fofdm(impulse, spec);
    const auto taps = spec.taps(1);
    REQUIRE(resp.size() == taps.size());  // 1 + L - 1
    for (std::size_t i = 0; i < taps.size(); ++i) {
        CHECK(resp.samples[i].real() == doctest::Approx(taps[i]).epsilon(1e-12));
    }

    // Output length is input + L - 1.
    cfg.n_symbols = 2;
    const auto buf = generate_ofdm(cfg, 3);
    const auto filtered = apply_fofdm(buf, spec);
    CHECK(filtered.size() == buf.size() + taps.size() - 1);

    // Mismatched band is rejected.
    IqBuffer wrong = buf;
    wrong.occupied_half_bw *= 2.0;
    CHECK_THROWS_AS(apply_fofdm(wrong, spec), std::invalid_argument);
}

TEST_CASE("TWTA: small-signal linearity, saturation peak, memorylessness") {
    TwtaModel model;
    // Saleh curve: unique maximum at r = 1/sqrt(beta_a).
    const double rsat = model.input_saturation();
    CHECK(rsat == doctest::Approx(1.0 / std::sqrt(1.1517)));
    CHECK(model.am_am(rsat) >= model.am_am(rsat * 0.99));
    CHECK(model.am_am(rsat) >= model.am_am(rsat * 1.01));
    CHECK(model.output_saturation() ==
          doctest::Approx(2.1587 / (2.0 * std::sqrt(1.1517))).epsilon(1e-12));

    // -30 dB below saturation: linear within 0.1%.
    const double r = rsat * std::pow(10.0, -30.0 / 20.0);
    const double gain0 = model.alpha_a;
    CHECK(model.am_am(r) / (gain0 * r) == doctest::Approx(1.0).epsilon(1.1e-3));

    // IBO = 60 dB: whole buffer in the linear region.
    OfdmConfig cfg;
    cfg.n_symbols = 2;
    const auto buf = generate_ofdm(cfg, 11);
    TwtaModel gentle;
    gentle.ibo_db = 60.0;
    const auto out = apply_twta(buf, gentle);
    const double in_power = buf.power();
    const double expected_scale =
        std::sqrt(gentle.input_saturation() * gentle.input_saturation() /
                  std::pow(10.0, 6.0) / in_power) * gentle.alpha_a;
    for (std::size_t i = 0; i < buf.size(); i += 131) {
        const auto expect = buf.samples[i] * expected_scale;
        CHECK(std::abs(out.samples[i] - expect) <=
              1e-3 * std::abs(expect) + 1e-15);
    }

    // Constant envelope driven exactly at saturation.
    IqBuffer cw;
    cw.samples.assign(4096, cplx(1.0, 0.0));
    cw.sample_rate = 1.0;
    TwtaModel at_sat;
    at_sat.ibo_db = 0.0;
    const auto sat_out = apply_twta(cw, at_sat);
    for (std::size_t i = 0; i < sat_out.size(); i += 511) {
        CHECK(std::abs(sat_out.samples[i]) ==
              doctest::Approx(at_sat.output_saturation()).epsilon(1e-12));
    }

    // Memoryless: permuting input permutes output identically (up to the
    // power normalization, whose summation order changes with the permutation).
    IqBuffer perm = buf;
    std::reverse(perm.samples.begin(), perm.samples.end());
    const auto out_perm = apply_twta(perm, gentle);
    for (std::size_t i = 0; i < buf.size(); i += 257) {
        const auto want = out.samples[buf.size() - 1 - i];
        CHECK(std::abs(out_perm.samples[i] - want) <=
              1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("TWTA table override follows the measured curve") {
    TwtaModel model;
    model.table = std::vector<TwtaModel::TablePoint>{
        {0.0, 0.0, 0.0}, {0.5, 0.6, 0.1}, {1.0, 1.0, 0.3}, {2.0, 0.9, 0.5}};
    model.validate();
    CHECK(model.input_saturation() == doctest::Approx(1.0));
    CHECK(model.am_am(0.75) == doctest::Approx(0.8));   // midpoint
    CHECK(model.am_pm_rad(0.75) == doctest::Approx(0.2));
    CHECK(model.am_am(3.0) == doctest::Approx(0.9));    // clamped

    TwtaModel bad;
    bad.table = std::vector<TwtaModel::TablePoint>{{0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("PSD estimator: white noise is flat, short buffers are rejected") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    IqBuffer noise;
    noise.samples.resize(1 << 16);
    for (auto& s : noise.samples) s = cplx(g(rng), g(rng));
    noise.sample_rate = 1.0;
    noise.occupied_half_bw = 0.125;  // declare a band: regions are flat noise
    const auto est = estimate_psd(noise);
    CHECK(std::abs(est.oobe_suppression_db) <= 1.0);

    IqBuffer tiny;
    tiny.samples.resize(100);
    tiny.occupied_half_bw = 0.125;
    CHECK_THROWS_AS(estimate_psd(tiny), std::invalid_argument);
}

TEST_CASE("PAPR: constant envelope gives 0 dB, CCDF tail is monotone") {
    IqBuffer cw;
    cw.samples.assign(200000, std::polar(0.7, 0.3));
    CHECK(papr_ccdf(cw, 1e-2) == doctest::Approx(0.0));
    CHECK(papr_ccdf(cw, 1e-3) == doctest::Approx(0.0));
    cw.symbol_length = 1000;  // per-symbol route agrees
    CHECK(papr_ccdf(cw, 1e-2) == doctest::Approx(0.0));

    OfdmConfig cfg;
    cfg.n_symbols = 128;  // 128 * 1096 samples covers the 1e-3 precondition
    const auto buf = generate_ofdm(cfg, 21);
    const double loose = papr_ccdf(buf, 1e-1);
    const double tight = papr_ccdf(buf, 1e-3);
    CHECK(tight >= loose);

    CHECK_THROWS_AS(papr_ccdf(cw, 1e-9), std::invalid_argument);  // too few samples
    CHECK_THROWS_AS(papr_ccdf(cw, 0.0), std::invalid_argument);
}

TEST_CASE("uplink composition: orthogonal when clean, Dirichlet when offset") {
    UplinkConfig cfg;
    cfg.fft_size = 64;
    cfg.cp_length = 16;
    cfg.n_symbols = 12;
    cfg.seed = 9;
    std::vector<UplinkUe> ues(2);
    ues[0].tones = {8, 9, 10, 11};
    ues[1].tones = {12, 13, 14, 15};

    // Integer-bin assignments are exactly orthogonal.
    const auto clean = compose_uplink(cfg, ues);
    CHECK(clean.leakage_db[0][1] <= -150.0);
    CHECK(clean.leakage_db[1][0] <= -150.0);
    CHECK(clean.leakage_db[0][0] == doctest::Approx(0.0));

    // Composite equals the sum of the individually modulated signals.
    for (std::size_t i = 0; i < clean.composite.size(); i += 53) {
        const auto sum = clean.per_ue[0].samples[i] + clean.per_ue[1].samples[i];
        CHECK(std::abs(clean.composite.samples[i] - sum) <= 1e-12);
    }

    // Half-subcarrier offset: leakage rises far above the clean case.
    auto offset_ues = ues;
    offset_ues[0].offset_scs = 0.5;
    const auto shifted = compose_uplink(cfg, offset_ues);
    CHECK(shifted.leakage_db[0][1] > clean.leakage_db[0][1] + 30.0);

    // Overlapping assignments are rejected.
    auto overlap = ues;
    overlap[1].tones = {11, 12};
    CHECK_THROWS_AS(compose_uplink(cfg, overlap), std::invalid_argument);
}

TEST_CASE("half-bin leakage matches the closed-form Dirichlet kernel") {
    UplinkConfig cfg;
    cfg.fft_size = 64;
    cfg.cp_length = 0;
    cfg.n_symbols = 1;
    cfg.seed = 2;
    std::vector<UplinkUe> ues(2);
    ues[0].tones = {20};
    ues[1].tones = {23};
    const double eps = 0.5;
    ues[0].offset_scs = eps;
    const auto out = compose_uplink(cfg, ues);

    // Tone m shifted by -eps: power observed at bin b follows
    // |sin(pi x) / (N sin(pi x / N))|^2 with x = m - eps - b.
    auto dirichlet_power = [&](double x) {
        if (std::abs(std::remainder(x, cfg.fft_size)) < 1e-12) return 1.0;
        const double num = std::sin(M_PI * x);
        const double den = static_cast<double>(cfg.fft_size) *
                           std::sin(M_PI * x / static_cast<double>(cfg.fft_size));
        return (num / den) * (num / den);
    };
    const double own = dirichlet_power(-eps);  // bin 20: x = 20 - eps - 20
    const double neighbor = dirichlet_power(20.0 - eps - 23.0);  // bin 23
    const double expected_db = 10.0 * std::log10(neighbor / own);
    CHECK(out.leakage_db[0][1] == doctest::Approx(expected_db).epsilon(1e-6));
}

TEST_CASE("constant doppler trajectory equals the same constant offset") {
    UplinkConfig cfg;
    cfg.fft_size = 64;
    cfg.cp_length = 16;
    cfg.n_symbols = 6;
    cfg.seed = 13;
    const std::size_t total = cfg.n_symbols * (cfg.fft_size + cfg.cp_length);

    std::vector<UplinkUe> by_offset(2);
    by_offset[0].tones = {5, 6};
    by_offset[1].tones = {20, 21};
    by_offset[1].offset_scs = 0.31;

    auto by_doppler = by_offset;
    by_doppler[1].offset_scs = 0.0;
    by_doppler[1].doppler_scs.assign(total, 0.31);

    const auto a = compose_uplink(cfg, by_offset);
    const auto b = compose_uplink(cfg, by_doppler);
    for (std::size_t i = 0; i < a.composite.size(); i += 31) {
        CHECK(std::abs(a.composite.samples[i] - b.composite.samples[i]) <= 1e-9);
    }
    CHECK(a.leakage_db[1][0] == doctest::Approx(b.leakage_db[1][0]).epsilon(1e-6));

    // A trajectory that does not cover every sample is rejected.
    auto bad = by_doppler;
    bad[1].doppler_scs.resize(10);
    CHECK_THROWS_AS(compose_uplink(cfg, bad), std::invalid_argument);
}

TEST_CASE("common uplink offset is removable at the receiver") {
    UplinkConfig cfg;
    cfg.fft_size = 64;
    cfg.cp_length = 16;
    cfg.n_symbols = 8;
    cfg.seed = 31;
    std::vector<UplinkUe> ues(2);
    ues[0].tones = {4, 5, 6};
    ues[1].tones = {9, 10, 11};

    const auto clean = compose_uplink(cfg, ues);

    auto shifted_ues = ues;
    const double common = 0.37;
    for (auto& u : shifted_ues) u.offset_scs += common;
    const auto shifted = compose_uplink(cfg, shifted_ues);
    const auto corrected =
        apply_common_correction(shifted.composite, common, cfg);

    double worst = 0.0;
    for (std::size_t i = 0; i < clean.composite.size(); ++i) {
        worst = std::max(worst, std::abs(corrected.samples[i] -
                                         clean.composite.samples[i]));
    }
    CHECK(worst <= 1e-9);
}
