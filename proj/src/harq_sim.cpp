#include "ntnlab/harq_sim.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <random>
#include <stdexcept>
#include <vector>

#include "ntnlab/event_queue.hpp"

namespace ntnlab::sim {

void HarqConfig::validate() const {
    if (n_processes < 1) {
        throw std::invalid_argument("harq.n_processes must be >= 1");
    }
    if (mode == HarqMode::NbIotBundled && n_processes > 2) {
        throw std::invalid_argument("NB-IoT allows 1 or 2 HARQ processes");
    }
    if (!(tti_ms > 0.0) || !(duration_s > 0.0)) {
        throw std::invalid_argument("harq.tti_ms and duration_s must be > 0");
    }
    if (t_proc_ms < 0.0 || nbiot_ack_offset_ms < 0.0 || nbiot_retx_offset_ms < 0.0) {
        throw std::invalid_argument("harq turnaround delays must be >= 0");
    }
    if (max_retransmissions < 0) {
        throw std::invalid_argument("harq.max_retransmissions must be >= 0");
    }
    if (bundle_repetitions < 1) {
        throw std::invalid_argument("harq.bundle_repetitions must be >= 1");
    }
}

namespace {

enum class ProcState { Free, InFlight, WaitRetx };

struct Process {
    ProcState state = ProcState::Free;
    std::uint64_t tb = 0;
    int transmissions = 0;
};

struct HarqContext {
    const HarqConfig& cfg;
    const DelayChannel& channel;
    EventQueue queue;
    EventLog log;
    std::mt19937_64 rng;
    std::vector<Process> procs;
    std::deque<int> retx_queue;   // processes waiting to retransmit
    double link_free_at = 0.0;
    bool tx_scheduled = false;
    std::uint64_t next_tb = 0;
    HarqStats stats;

    explicit HarqContext(const HarqConfig& c, const DelayChannel& ch)
        : cfg(c), channel(ch), rng(derive_seed(c.seed, 0xA77)) {}

    double airtime_s() const {
        const double reps =
            cfg.mode == HarqMode::NbIotBundled ? cfg.bundle_repetitions : 1;
        return cfg.tti_ms * 1e-3 * reps;
    }

    std::uint64_t in_flight() const {
        std::uint64_t n = 0;
        for (const auto& p : procs) {
            n += p.state != ProcState::Free ? 1 : 0;
        }
        return n;
    }

    bool tb_lost() {
        if (channel.loss_probability <= 0.0) return false;
        if (channel.loss_probability >= 1.0) return true;
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(rng) < channel.loss_probability;
    }

    int pick_free_process() const {
        for (int i = 0; i < cfg.n_processes; ++i) {
            if (procs[static_cast<std::size_t>(i)].state == ProcState::Free) {
                return i;
            }
        }
        return -1;
    }

    void maybe_schedule_tx();
    void transmit(int proc_id, double t_start);
    void on_ack(int proc_id, bool ok, std::uint64_t tb);
};

void HarqContext::maybe_schedule_tx() {
    if (tx_scheduled) return;
    int proc_id = -1;
    bool is_retx = false;
    if (!retx_queue.empty()) {
        proc_id = retx_queue.front();
        is_retx = true;
    } else {
        proc_id = pick_free_process();
    }
    if (proc_id < 0) return;

    const double t_start = std::max(queue.now(), link_free_at);
    if (t_start >= cfg.duration_s) return;  // run window over, stop loading
    tx_scheduled = true;
    if (is_retx) retx_queue.pop_front();
    queue.schedule(t_start, [this, proc_id] {
        tx_scheduled = false;
        transmit(proc_id, queue.now());
        maybe_schedule_tx();
    });
}

void HarqContext::transmit(int proc_id, double t_start) {
    Process& p = procs[static_cast<std::size_t>(proc_id)];
    if (p.state == ProcState::Free) {
        p.state = ProcState::InFlight;
        p.tb = next_tb++;
        p.transmissions = 0;
        stats.tb_sent++;
    } else {
        assert(p.state == ProcState::WaitRetx);
        p.state = ProcState::InFlight;
        stats.retransmissions++;
    }
    p.transmissions++;
    stats.transmissions++;
    const std::uint64_t flying = in_flight();
    stats.max_in_flight = std::max(stats.max_in_flight, flying);
    if (flying > static_cast<std::uint64_t>(cfg.n_processes)) {
        throw std::logic_error("HARQ in-flight bound violated");
    }

    const double air = airtime_s();
    link_free_at = t_start + air;
    stats.busy_time_s += air;
    log.record(t_start, "tx", "tb_tx",
               {{"proc", fmt_int(proc_id)},
                {"tb", fmt_int(static_cast<long long>(p.tb))},
                {"try", fmt_int(p.transmissions)}});

    const bool ok = !tb_lost();
    const std::uint64_t tb = p.tb;

    // Receiver turnaround is counted from the start of the received block
    // (subframe-indexed ACK timing); the sender-side turnaround completes
    // the 2 * (t_owp + t_proc) cycle. NB-IoT instead waits for the end of
    // the bundle plus the relaxed decode offset.
    const double ul = channel.uplink_delay_ms * 1e-3;
    const double dl = channel.downlink_delay_ms * 1e-3;
    double ack_tx;
    double free_delay;  // after ACK arrival at the sender
    if (cfg.mode == HarqMode::NbIotBundled) {
        ack_tx = t_start + air + ul + cfg.nbiot_ack_offset_ms * 1e-3;
        free_delay = cfg.nbiot_retx_offset_ms * 1e-3;
    } else {
        ack_tx = t_start + ul + cfg.t_proc_ms * 1e-3;
        free_delay = cfg.t_proc_ms * 1e-3;
    }
    const double ack_arrival = ack_tx + dl;
    queue.schedule(ack_tx, [this, proc_id, ok] {
        log.record(queue.now(), "rx", ok ? "ack_tx" : "nack_tx",
                   {{"proc", fmt_int(proc_id)}});
    });
    queue.schedule(ack_arrival + free_delay, [this, proc_id, ok, tb] {
        on_ack(proc_id, ok, tb);
    });
}

void HarqContext::on_ack(int proc_id, bool ok, std::uint64_t tb) {
    Process& p = procs[static_cast<std::size_t>(proc_id)];
    assert(p.state == ProcState::InFlight && p.tb == tb);
    (void)tb;
    if (ok) {
        stats.tb_acked++;
        p.state = ProcState::Free;
        log.record(queue.now(), "tx", "tb_acked", {{"proc", fmt_int(proc_id)}});
    } else if (p.transmissions > cfg.max_retransmissions) {
        stats.tb_dropped++;
        p.state = ProcState::Free;
        log.record(queue.now(), "tx", "tb_dropped",
                   {{"proc", fmt_int(proc_id)},
                    {"tries", fmt_int(p.transmissions)}});
    } else {
        p.state = ProcState::WaitRetx;
        retx_queue.push_back(proc_id);
    }
    maybe_schedule_tx();
}

}  // namespace

HarqStats simulate_harq(const ScenarioConfig& scenario,
                        const DelayChannel& channel, const HarqConfig& config) {
    scenario.validate();
    channel.validate();
    config.validate();
    if (scenario.service == Service::NbIot &&
        config.mode == HarqMode::NbIotBundled && config.n_processes > 2) {
        throw std::invalid_argument("NB-IoT allows at most 2 HARQ processes");
    }

    HarqContext ctx(config, channel);
    ctx.procs.resize(static_cast<std::size_t>(config.n_processes));
    ctx.maybe_schedule_tx();
    // Let in-flight acknowledgements drain so conservation can be checked,
    // but stop loading new blocks past the duration (see maybe_schedule_tx).
    ctx.queue.run_until_empty();

    HarqStats stats = ctx.stats;
    stats.tb_in_flight_end = ctx.in_flight();
    stats.utilization = stats.busy_time_s / config.duration_s;
    stats.throughput_tb_s =
        static_cast<double>(stats.tb_acked) / config.duration_s;
    stats.event_log = ctx.log.str();
    return stats;
}

}  // namespace ntnlab::sim
