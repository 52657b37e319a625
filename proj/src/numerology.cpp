#include "ntnlab/numerology.hpp"

#include <cmath>
#include <stdexcept>

namespace ntnlab {

namespace {

void check_mu(int mu) {
    if (mu < 0 || mu > 5) {
        throw std::out_of_range("mu must be in 0..5");
    }
}

}  // namespace

double TaCommand::time_s(int mu) const {
    return nbiot ? nbiot_ta_time_s(value) : ta_time_s(value, mu);
}

double ta_time_s(int ta_command, int mu) {
    check_mu(mu);
    if (ta_command < 0 || ta_command > kMaxTaCommand) {
        throw std::out_of_range("T_A must be in 0..1282");
    }
    const double n_ta =
        static_cast<double>(ta_command) * 16.0 * 64.0 / static_cast<double>(1 << mu);
    return Numerology::t_c_s * n_ta;  // N_TA_offset = 0 for FDD
}

double ta_distance_step_m(int mu, const PhysicalConstants& pc) {
    return pc.c_mps * ta_time_s(1, mu) / 2.0;
}

double max_compensable_distance_km(int mu, const PhysicalConstants& pc) {
    return pc.c_mps * ta_time_s(kMaxTaCommand, mu) / 2.0 / 1000.0;
}

double nbiot_ta_time_s(int ta_command) {
    if (ta_command < 0) {
        throw std::out_of_range("NB-IoT T_A must be >= 0");
    }
    const double t = static_cast<double>(ta_command) * 16.0 * Numerology::t_s_lte_s;
    if (t > kNbiotTaBudgetS) {
        throw std::out_of_range("NB-IoT T_A exceeds the 0.67 ms budget");
    }
    return t;
}

int nbiot_max_ta_command() {
    return static_cast<int>(
        std::floor(kNbiotTaBudgetS / (16.0 * Numerology::t_s_lte_s)));
}

double differential_delay_limit_km(double max_ta_s, const PhysicalConstants& pc) {
    if (max_ta_s < 0.0) {
        throw std::out_of_range("max_ta_s must be >= 0");
    }
    return pc.c_km_per_s() * max_ta_s / 2.0;
}

HarqDimensioning harq_dimension(double t_owp_ms, double t_proc_ms,
                                double tti_ms) {
    if (!(t_owp_ms > 0.0) || !(t_proc_ms > 0.0) || !(tti_ms > 0.0)) {
        throw std::invalid_argument("harq_dimension arguments must be > 0");
    }
    HarqDimensioning d;
    d.t_owp_ms = t_owp_ms;
    d.t_proc_ms = t_proc_ms;
    d.tti_ms = tti_ms;
    d.t_harq_ms = 2.0 * (t_owp_ms + t_proc_ms);
    d.n_min = static_cast<int>(std::ceil(d.t_harq_ms / tti_ms - 1e-12));
    d.n_min = std::max(d.n_min, 1);
    d.dci_bits = 0;
    while ((1 << d.dci_bits) < d.n_min) {
        ++d.dci_bits;
    }
    d.buffer_units = static_cast<double>(d.n_min) * tti_ms;
    return d;
}

double uplink_timing_residual_s(double true_rtt_ms, const TaCommand& cmd,
                                int mu) {
    return std::abs(true_rtt_ms * 1e-3 - cmd.time_s(mu));
}

BestTaCommand best_ta_command(double true_rtt_ms, int mu) {
    check_mu(mu);
    if (true_rtt_ms < 0.0) {
        throw std::out_of_range("true_rtt_ms must be >= 0");
    }
    const double step = ta_time_s(1, mu);
    BestTaCommand best;
    const double ideal = true_rtt_ms * 1e-3 / step;
    long rounded = std::lround(ideal);
    if (rounded > kMaxTaCommand) {
        rounded = kMaxTaCommand;
        best.reachable = false;
    }
    best.command = TaCommand{static_cast<int>(rounded), false};
    best.residual_s = uplink_timing_residual_s(true_rtt_ms, best.command, mu);
    return best;
}

}  // namespace ntnlab
