#include <doctest.h>

#include <cmath>
#include <random>

#include "ntnlab/fft.hpp"
#include "ntnlab/fofdm.hpp"
#include "ntnlab/ofdm.hpp"
#include "ntnlab/spectrum.hpp"
#include "ntnlab/twta.hpp"

using namespace ntnlab::wave;

namespace {

std::vector<cplx> random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> out(n);
    for (auto& v : out) v = cplx(g(rng), g(rng));
    return out;
}

}  // namespace

TEST_CASE("FFT: impulse, single tone, round trip, Parseval") {
    const Fft fft(64);
    std::vector<cplx> x(64, cplx(0.0, 0.0));
    x[0] = cplx(1.0, 0.0);
    fft.forward(x);
    for (const auto& v : x) {
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(v.imag() == doctest::Approx(0.0));
    }

    // Single tone lands in its own bin.
    std::vector<cplx> tone(64);
    for (std::size_t n = 0; n < 64; ++n) {
        tone[n] = std::polar(1.0, 2.0 * M_PI * 5.0 * static_cast<double>(n) / 64.0);
    }
    fft.forward(tone);
    CHECK(std::abs(tone[5]) == doctest::Approx(64.0).epsilon(1e-12));
    for (std::size_t k = 0; k < 64; ++k) {
        if (k != 5) CHECK(std::abs(tone[k]) <= 1e-9);
    }

    // Round trip and Parseval on random data.
    auto orig = random_signal(1024, 8);
    auto work = orig;
    const Fft big(1024);
    big.forward(work);
    double freq_energy = 0.0;
    for (const auto& v : work) freq_energy += std::norm(v);
    double time_energy = 0.0;
    for (const auto& v : orig) time_energy += std::norm(v);
    CHECK(freq_energy / 1024.0 == doctest::Approx(time_energy).epsilon(1e-12));
    big.inverse(work);
    for (std::size_t i = 0; i < orig.size(); ++i) {
        CHECK(std::abs(work[i] - orig[i]) <= 1e-12);
    }

    CHECK_THROWS_AS(Fft(1000), std::invalid_argument);
}

TEST_CASE("overlap-save FIR equals the direct-form reference") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> len(1, 4000);
    std::uniform_int_distribution<std::size_t> tap_count(1, 40);
    for (int trial = 0; trial < 12; ++trial) {
        const auto x = random_signal(len(rng), 100 + trial);
        std::vector<double> taps(2 * tap_count(rng) + 1);
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto& t : taps) t = g(rng);

        const auto direct = fir_filter_direct(x, taps);
        const auto fast = fir_filter(x, taps);
        REQUIRE(direct.size() == fast.size());
        double scale = 0.0;
        for (const auto& v : direct) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < direct.size(); ++i) {
            CHECK(std::abs(direct[i] - fast[i]) <= 1e-9 * std::max(scale, 1.0));
        }
    }

    // Big enough to take the FFT path with several blocks.
    const auto x = random_signal(100000, 77);
    FilterSpec spec;
    const auto taps = spec.taps(1);
    const auto direct = fir_filter_direct(x, taps);
    const auto fast = fir_filter(x, taps);
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) {
        worst = std::max(worst, std::abs(direct[i] - fast[i]));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("parallel OFDM generation equals the serial reference bit for bit") {
    OfdmConfig cfg;
    cfg.n_symbols = 37;
    const auto par = generate_ofdm(cfg, 123);
    const auto ser = generate_ofdm_serial(cfg, 123);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par.samples[i] == ser.samples[i]);
    }
}

TEST_CASE("parallel TWTA map equals the serial reference bit for bit") {
    OfdmConfig cfg;
    cfg.n_symbols = 8;
    const auto buf = generate_ofdm(cfg, 9);
    TwtaModel model;
    model.ibo_db = 10.0;
    const auto par = apply_twta(buf, model);
    const auto ser = apply_twta_serial(buf, model);
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par.samples[i] == ser.samples[i]);
    }
}

TEST_CASE("chunked Welch equals the serial reference bit for bit") {
    const auto x = random_signal(300000, 31);
    WelchConfig cfg;
    const auto par = welch_psd(x, cfg);
    const auto ser = welch_psd_serial(x, cfg);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i] == ser[i]);
    }

    // Welch of unit-variance complex noise integrates to ~2 over the band.
    double total = 0.0;
    for (double v : ser) total += v;
    total /= static_cast<double>(ser.size());
    CHECK(total == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("welch rejects impossible configurations") {
    const auto x = random_signal(1000, 1);
    WelchConfig cfg;
    cfg.segment = 4096;
    CHECK_THROWS_AS(welch_psd(x, cfg), std::invalid_argument);
    cfg.segment = 1000;  // not a power of two
    CHECK_THROWS_AS(welch_psd(x, cfg), std::invalid_argument);
}
