// Compares the OpenMP kernels against their serial references: wall time,
// speedup, and the largest output difference (zero for the bit-exact pairs).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ntnlab/fofdm.hpp"
#include "ntnlab/ofdm.hpp"
#include "ntnlab/spectrum.hpp"
#include "ntnlab/twta.hpp"

using namespace ntnlab::wave;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0)
        .count();
}

template <typename F>
double time_ms(F&& fn) {
    const auto t0 = clock_type::now();
    fn();
    return ms_since(t0);
}

void report(const char* name, double serial_ms, double parallel_ms,
            double max_diff) {
    std::printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   max|diff| %.3g\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run serially\n\n");
#endif

    // OFDM synthesis.
    {
        OfdmConfig cfg;
        cfg.n_symbols = 2048;
        IqBuffer a, b;
        const double ts = time_ms([&] { a = generate_ofdm_serial(cfg, 1); });
        const double tp = time_ms([&] { b = generate_ofdm(cfg, 1); });
        double diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff = std::max(diff, std::abs(a.samples[i] - b.samples[i]));
        }
        report("ofdm synthesis", ts, tp, diff);
    }

    // FIR filtering: direct form vs overlap-save.
    {
        OfdmConfig cfg;
        cfg.n_symbols = 96;
        const auto buf = generate_ofdm(cfg, 2);
        FilterSpec spec;
        const auto taps = spec.taps(1);
        std::vector<cplx> a, b;
        const double ts = time_ms([&] { a = fir_filter_direct(buf.samples, taps); });
        const double tp = time_ms([&] { b = fir_filter(buf.samples, taps); });
        double diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff = std::max(diff, std::abs(a[i] - b[i]));
        }
        report("fir (513 taps)", ts, tp, diff);
    }

    // TWTA mapping.
    {
        OfdmConfig cfg;
        cfg.n_symbols = 1024;
        cfg.oversample = 4;
        const auto buf = generate_ofdm(cfg, 3);
        TwtaModel model;
        IqBuffer a, b;
        const double ts = time_ms([&] { a = apply_twta_serial(buf, model); });
        const double tp = time_ms([&] { b = apply_twta(buf, model); });
        double diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff = std::max(diff, std::abs(a.samples[i] - b.samples[i]));
        }
        report("twta map", ts, tp, diff);
    }

    // Welch PSD.
    {
        OfdmConfig cfg;
        cfg.n_symbols = 1024;
        const auto buf = generate_ofdm(cfg, 4);
        std::vector<double> a, b;
        const double ts = time_ms([&] { a = welch_psd_serial(buf.samples); });
        const double tp = time_ms([&] { b = welch_psd(buf.samples); });
        double diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff = std::max(diff, std::abs(a[i] - b[i]));
        }
        report("welch psd", ts, tp, diff);
    }
    return 0;
}
