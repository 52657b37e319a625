#include "ntnlab/twta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntnlab::wave {

void TwtaModel::validate() const {
    if (ibo_db < 0.0) {
        throw std::invalid_argument("twta.ibo_db must be >= 0");
    }
    if (table) {
        if (table->size() < 2) {
            throw std::invalid_argument("twta table needs at least 2 points");
        }
        for (std::size_t i = 1; i < table->size(); ++i) {
            if ((*table)[i].input_amplitude <= (*table)[i - 1].input_amplitude) {
                throw std::invalid_argument("twta table must be sorted by input");
            }
        }
    } else if (!(alpha_a > 0.0) || !(beta_a > 0.0)) {
        throw std::invalid_argument("twta Saleh coefficients must be > 0");
    }
}

double TwtaModel::input_saturation() const {
    if (table) {
        double best_r = table->front().input_amplitude;
        double best_a = table->front().output_amplitude;
        for (const auto& p : *table) {
            if (p.output_amplitude > best_a) {
                best_a = p.output_amplitude;
                best_r = p.input_amplitude;
            }
        }
        return best_r;
    }
    return 1.0 / std::sqrt(beta_a);
}

double TwtaModel::output_saturation() const { return am_am(input_saturation()); }

namespace {

double interp(const std::vector<TwtaModel::TablePoint>& t, double r,
              bool phase) {
    if (r <= t.front().input_amplitude) {
        const auto& p = t.front();
        if (phase) return p.phase_shift_rad;
        // Linear through the origin below the first point.
        return p.input_amplitude > 0.0
                   ? p.output_amplitude * r / p.input_amplitude
                   : p.output_amplitude;
    }
    if (r >= t.back().input_amplitude) {
        return phase ? t.back().phase_shift_rad : t.back().output_amplitude;
    }
    auto hi = std::upper_bound(
        t.begin(), t.end(), r, [](double v, const TwtaModel::TablePoint& p) {
            return v < p.input_amplitude;
        });
    const auto& b = *hi;
    const auto& a = *(hi - 1);
    const double f = (r - a.input_amplitude) / (b.input_amplitude - a.input_amplitude);
    return phase ? a.phase_shift_rad + f * (b.phase_shift_rad - a.phase_shift_rad)
                 : a.output_amplitude + f * (b.output_amplitude - a.output_amplitude);
}

}  // namespace

double TwtaModel::am_am(double r) const {
    if (table) return interp(*table, r, false);
    return alpha_a * r / (1.0 + beta_a * r * r);
}

double TwtaModel::am_pm_rad(double r) const {
    if (table) return interp(*table, r, true);
    return alpha_phi * r * r / (1.0 + beta_phi * r * r);
}

std::complex<double> TwtaModel::distort(std::complex<double> x) const {
    const double r = std::abs(x);
    if (r == 0.0) return x;
    const double gain = am_am(r) / r;
    const double phi = am_pm_rad(r);
    return x * std::polar(gain, phi);
}

namespace {

IqBuffer apply_impl(const IqBuffer& buffer, const TwtaModel& model,
                    bool parallel) {
    model.validate();
    const double sat_power = model.input_saturation() * model.input_saturation();
    const double target_power = sat_power / std::pow(10.0, model.ibo_db / 10.0);
    const double in_power = buffer.power();
    if (!(in_power > 0.0)) {
        throw std::invalid_argument("apply_twta: buffer has no power");
    }
    const double scale = std::sqrt(target_power / in_power);

    IqBuffer out;
    out.samples.resize(buffer.samples.size());
    out.sample_rate = buffer.sample_rate;
    out.occupied_half_bw = buffer.occupied_half_bw;
    out.symbol_length = buffer.symbol_length;
    out.stages = buffer.stages;
    {
        char tag[48];
        std::snprintf(tag, sizeof(tag), "twta(ibo=%gdB)", model.ibo_db);
        out.stages.push_back(tag);
    }

    const auto& in = buffer.samples;
    auto& dst = out.samples;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(in.size()); ++i) {
            dst[static_cast<std::size_t>(i)] =
                model.distort(in[static_cast<std::size_t>(i)] * scale);
        }
    } else {
        for (std::size_t i = 0; i < in.size(); ++i) {
            dst[i] = model.distort(in[i] * scale);
        }
    }
    return out;
}

}  // namespace

IqBuffer apply_twta(const IqBuffer& buffer, const TwtaModel& model) {
    return apply_impl(buffer, model, true);
}

IqBuffer apply_twta_serial(const IqBuffer& buffer, const TwtaModel& model) {
    return apply_impl(buffer, model, false);
}

}  // namespace ntnlab::wave
