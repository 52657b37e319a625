#include "ntnlab/ra_sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <random>

#include "ntnlab/event_queue.hpp"

namespace ntnlab::sim {

void RaConfig::validate() const {
    if (n_ues < 1) {
        throw std::invalid_argument("ra.n_ues must be >= 1");
    }
    if (!(occasion_period_ms > 0.0)) {
        throw std::invalid_argument("ra.occasion_period_ms must be > 0");
    }
    if (gnb_processing_ms < 0.0 || ue_processing_ms < 0.0 || core_delay_ms < 0.0) {
        throw std::invalid_argument("ra processing delays must be >= 0");
    }
    if (preamble_pool < 1 || preamble_pool > 64) {
        throw std::invalid_argument("ra.preamble_pool must be in 1..64");
    }
}

int nbiot_repetitions_for_level(int level, const TimerSet& timers) {
    const int shift = 2 * (timers.nbiot_coverage_levels - 1 - level);
    return std::max(1, timers.nbiot_max_repetitions >> shift);
}

namespace {

enum class UeState { Idle, WaitRar, WaitContentionResolution, Connected, Failed };

struct UeSession {
    UeState state = UeState::Idle;
    int attempts = 0;             // msg1 transmissions, total
    int attempts_this_level = 0;  // NB-IoT
    int coverage_level = 0;
    int contention_failures = 0;
    int preamble_id = -1;
    std::uint64_t occasion_id = 0;
    int generation = 0;  // invalidates stale timeout events
    double start_time_s = -1.0;
    RaUeOutcome outcome;
    std::mt19937_64 rng;
};

struct RaKey {
    std::uint64_t occasion;
    int level;
    int preamble;
    bool operator<(const RaKey& o) const {
        return std::tie(occasion, level, preamble) <
               std::tie(o.occasion, o.level, o.preamble);
    }
};

struct RaContext {
    const ScenarioConfig& scenario;
    const DelayChannel& channel;
    const RaConfig& cfg;
    EventQueue queue;
    EventLog log;
    std::vector<UeSession> ues;
    std::mt19937_64 channel_rng;
    // Collision bookkeeping at the gNB.
    std::map<RaKey, bool> rar_scheduled;
    std::map<RaKey, std::vector<int>> msg3_rx;
    std::map<RaKey, bool> msg4_sent;

    struct Contender {
        int ue_id;
        int generation;  // the attempt that elicited this exchange
    };
    std::map<RaKey, std::vector<Contender>> contenders;

    RaContext(const ScenarioConfig& s, const DelayChannel& ch, const RaConfig& c)
        : scenario(s), channel(ch), cfg(c),
          channel_rng(derive_seed(c.seed, 0x10000u + c.n_ues)) {}

    bool nbiot() const { return scenario.service == Service::NbIot; }

    double ul_ms() const { return channel.uplink_delay_ms; }
    double dl_ms() const { return channel.downlink_delay_ms; }

    double jitter_ms() {
        if (channel.jitter_ms <= 0.0) return 0.0;
        std::uniform_real_distribution<double> d(0.0, channel.jitter_ms);
        return d(channel_rng);
    }
    bool lost() {
        if (channel.loss_probability <= 0.0) return false;
        if (channel.loss_probability >= 1.0) return true;
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(channel_rng) < channel.loss_probability;
    }

    double preamble_duration_s(const UeSession& ue) const {
        if (!nbiot()) return 0.0;  // NR preamble airtime is delay-dominated
        NprachPreamble p;
        p.format = cfg.nprach_format;
        p.repetitions =
            nbiot_repetitions_for_level(ue.coverage_level, scenario.timers);
        return p.total_duration_s();
    }

    double rar_window_offset_s(const UeSession& ue) const {
        if (!nbiot()) return 0.0;
        const int reps =
            nbiot_repetitions_for_level(ue.coverage_level, scenario.timers);
        return (reps >= 64 ? 64.0 : 4.0) * 1e-3;  // subframes after last rep
    }

    std::string ue_name(int id) const { return "ue" + std::to_string(id); }

    void start_attempt(int ue_id);
    void on_preamble_rx(RaKey key, int ue_id, int generation,
                        double preamble_end_s);
    void on_rar_rx(int ue_id, RaKey key, int generation);
    void on_rar_timeout(int ue_id, int generation);
    void on_msg3_rx(RaKey key, int ue_id);
    void resolve_contention(RaKey key);
    void on_msg4_rx(int ue_id, int generation);
    void on_cr_timeout(int ue_id, int generation);
    void retry_or_fail(int ue_id, RaFailureCause cause);
    void fail(int ue_id, RaFailureCause cause);
};

double next_occasion(const RaContext& ctx, double after_s) {
    const double period = ctx.cfg.occasion_period_ms * 1e-3;
    const double k = std::ceil(after_s / period - 1e-12);
    return std::max(0.0, k) * period;
}

void RaContext::start_attempt(int ue_id) {
    UeSession& ue = ues[static_cast<std::size_t>(ue_id)];
    const double t_occ = next_occasion(*this, queue.now());
    ue.generation++;
    const int gen = ue.generation;

    queue.schedule(t_occ, [this, ue_id, gen] {
        UeSession& u = ues[static_cast<std::size_t>(ue_id)];
        if (u.generation != gen || u.state == UeState::Connected ||
            u.state == UeState::Failed) {
            return;
        }
        if (u.start_time_s < 0.0) u.start_time_s = queue.now();
        u.attempts++;
        u.attempts_this_level++;
        assert(nbiot() ? u.attempts_this_level <=
                             scenario.timers.nbiot_attempts_per_level
                       : u.attempts <= scenario.timers.preamble_max_attempts);
        u.state = UeState::WaitRar;
        if (cfg.mode == RaMode::ContentionFree) {
            u.preamble_id = ue_id % cfg.preamble_pool;  // dedicated assignment
        } else {
            std::uniform_int_distribution<int> d(0, cfg.preamble_pool - 1);
            u.preamble_id = d(u.rng);
        }
        const double t = queue.now();
        u.occasion_id = static_cast<std::uint64_t>(
            std::llround(t / (cfg.occasion_period_ms * 1e-3)));
        const double preamble_end = t + preamble_duration_s(u);
        log.record(t, ue_name(ue_id), "msg1_tx",
                   {{"preamble", fmt_int(u.preamble_id)},
                    {"attempt", fmt_int(u.attempts)},
                    {"level", fmt_int(u.coverage_level)}});

        RaKey key{u.occasion_id, u.coverage_level, u.preamble_id};
        // Window for the RAR, at the UE.
        const double window_open = preamble_end + rar_window_offset_s(u);
        const double window_close =
            window_open + scenario.timers.rar_window_ms * 1e-3;
        queue.schedule(window_close, [this, ue_id, gen] { on_rar_timeout(ue_id, gen); });

        if (!lost()) {
            const double rx = preamble_end + (ul_ms() + jitter_ms()) * 1e-3;
            queue.schedule(rx, [this, key, ue_id, gen, preamble_end] {
                on_preamble_rx(key, ue_id, gen, preamble_end);
            });
        }
    });
}

void RaContext::on_preamble_rx(RaKey key, int ue_id, int generation,
                               double preamble_end_s) {
    auto& group = contenders[key];
    group.push_back(Contender{ue_id, generation});
    log.record(queue.now(), "gnb", "msg1_rx",
               {{"preamble", fmt_int(key.preamble)},
                {"ue", fmt_int(ue_id)},
                {"collided", fmt_int(static_cast<int>(group.size()) - 1)}});
    if (rar_scheduled[key]) return;
    rar_scheduled[key] = true;

    const UeSession& ue = ues[static_cast<std::size_t>(ue_id)];
    const double window_open = preamble_end_s + rar_window_offset_s(ue);
    const double tx = queue.now() + cfg.gnb_processing_ms * 1e-3;
    queue.schedule(tx, [this, key, window_open] {
        log.record(queue.now(), "gnb", "rar_tx",
                   {{"preamble", fmt_int(key.preamble)}});
        for (const Contender& target : contenders[key]) {
            if (lost()) continue;
            const double arrival = std::max(
                queue.now() + (dl_ms() + jitter_ms()) * 1e-3, window_open);
            queue.schedule(arrival, [this, target, key] {
                on_rar_rx(target.ue_id, key, target.generation);
            });
        }
    });
}

void RaContext::on_rar_rx(int ue_id, RaKey key, int generation) {
    UeSession& ue = ues[static_cast<std::size_t>(ue_id)];
    if (ue.generation != generation || ue.state != UeState::WaitRar) return;
    log.record(queue.now(), ue_name(ue_id), "rar_rx",
               {{"preamble", fmt_int(key.preamble)}});

    if (cfg.mode == RaMode::ContentionFree) {
        // Two-message procedure: connected on RAR reception.
        ue.state = UeState::Connected;
        ue.outcome.success = true;
        ue.outcome.access_delay_s = queue.now() - ue.start_time_s;
        log.record(queue.now(), ue_name(ue_id), "connected",
                   {{"attempts", fmt_int(ue.attempts)}});
        return;
    }

    ue.state = UeState::WaitContentionResolution;
    const int gen = ue.generation;
    const double msg3_tx = queue.now() + cfg.ue_processing_ms * 1e-3;
    queue.schedule(msg3_tx, [this, ue_id, key, gen] {
        UeSession& u = ues[static_cast<std::size_t>(ue_id)];
        if (u.generation != gen || u.state != UeState::WaitContentionResolution) return;
        log.record(queue.now(), ue_name(ue_id), "msg3_tx", {});
        const double expiry =
            queue.now() + scenario.timers.contention_resolution_ms * 1e-3;
        queue.schedule(expiry, [this, ue_id, gen] { on_cr_timeout(ue_id, gen); });
        if (!lost()) {
            const double rx = queue.now() + (ul_ms() + jitter_ms()) * 1e-3;
            queue.schedule(rx, [this, key, ue_id] { on_msg3_rx(key, ue_id); });
        }
    });
}

void RaContext::on_msg3_rx(RaKey key, int ue_id) {
    log.record(queue.now(), "gnb", "msg3_rx", {{"ue", fmt_int(ue_id)}});
    auto& contenders = msg3_rx[key];
    const bool first = contenders.empty();
    contenders.push_back(ue_id);
    if (first && !msg4_sent[key]) {
        // Resolve after every same-instant msg3 has been collected: an event
        // scheduled now runs after all already-queued events at this time.
        queue.schedule(queue.now(), [this, key] { resolve_contention(key); });
    }
}

void RaContext::resolve_contention(RaKey key) {
    if (msg4_sent[key]) return;
    msg4_sent[key] = true;
    auto& contenders = msg3_rx[key];
    const int winner = *std::min_element(contenders.begin(), contenders.end());
    const double tx =
        queue.now() + (cfg.gnb_processing_ms + cfg.core_delay_ms) * 1e-3;
    queue.schedule(tx, [this, winner, key] {
        log.record(queue.now(), "gnb", "msg4_tx", {{"ue", fmt_int(winner)}});
        if (lost()) return;
        const double arrival = queue.now() + (dl_ms() + jitter_ms()) * 1e-3;
        const int gen = ues[static_cast<std::size_t>(winner)].generation;
        queue.schedule(arrival, [this, winner, gen] { on_msg4_rx(winner, gen); });
        (void)key;
    });
}

void RaContext::on_msg4_rx(int ue_id, int generation) {
    UeSession& ue = ues[static_cast<std::size_t>(ue_id)];
    if (ue.generation != generation ||
        ue.state != UeState::WaitContentionResolution) {
        return;
    }
    ue.state = UeState::Connected;
    ue.outcome.success = true;
    ue.outcome.access_delay_s = queue.now() - ue.start_time_s;
    log.record(queue.now(), ue_name(ue_id), "connected",
               {{"attempts", fmt_int(ue.attempts)}});
}

void RaContext::on_rar_timeout(int ue_id, int generation) {
    UeSession& ue = ues[static_cast<std::size_t>(ue_id)];
    if (ue.generation != generation || ue.state != UeState::WaitRar) return;
    log.record(queue.now(), ue_name(ue_id), "rar_timeout",
               {{"attempt", fmt_int(ue.attempts)}});
    retry_or_fail(ue_id, RaFailureCause::RarWindowExpired);
}

void RaContext::on_cr_timeout(int ue_id, int generation) {
    UeSession& ue = ues[static_cast<std::size_t>(ue_id)];
    if (ue.generation != generation ||
        ue.state != UeState::WaitContentionResolution) {
        return;
    }
    log.record(queue.now(), ue_name(ue_id), "cr_timeout", {});
    ue.contention_failures++;
    if (!nbiot() &&
        ue.contention_failures >= scenario.timers.contention_max_attempts) {
        fail(ue_id, RaFailureCause::ContentionUnresolved);
        return;
    }
    retry_or_fail(ue_id, RaFailureCause::ContentionUnresolved);
}

void RaContext::retry_or_fail(int ue_id, RaFailureCause cause) {
    UeSession& ue = ues[static_cast<std::size_t>(ue_id)];
    if (nbiot()) {
        if (ue.attempts_this_level >= scenario.timers.nbiot_attempts_per_level) {
            if (ue.coverage_level + 1 < scenario.timers.nbiot_coverage_levels) {
                ue.coverage_level++;
                ue.attempts_this_level = 0;
                log.record(queue.now(), ue_name(ue_id), "coverage_escalation",
                           {{"level", fmt_int(ue.coverage_level)}});
            } else {
                fail(ue_id, cause);
                return;
            }
        }
    } else if (ue.attempts >= scenario.timers.preamble_max_attempts) {
        fail(ue_id, cause);
        return;
    }
    ue.state = UeState::Idle;
    start_attempt(ue_id);
}

void RaContext::fail(int ue_id, RaFailureCause cause) {
    UeSession& ue = ues[static_cast<std::size_t>(ue_id)];
    ue.state = UeState::Failed;
    ue.outcome.success = false;
    ue.outcome.cause = cause;
    log.record(queue.now(), ue_name(ue_id), "failed",
               {{"attempts", fmt_int(ue.attempts)},
                {"cause", cause == RaFailureCause::RarWindowExpired
                              ? "rar_window_expired"
                              : "contention_unresolved"}});
}

}  // namespace

RaResult simulate_ra(const ScenarioConfig& scenario, const DelayChannel& channel,
                     const RaConfig& config) {
    scenario.validate();
    channel.validate();
    config.validate();
    if (scenario.service == Service::NbIot &&
        config.mode == RaMode::ContentionFree) {
        throw std::invalid_argument(
            "NB-IoT supports contention-based random access only");
    }

    RaContext ctx(scenario, channel, config);
    ctx.ues.resize(static_cast<std::size_t>(config.n_ues));
    for (int i = 0; i < config.n_ues; ++i) {
        ctx.ues[static_cast<std::size_t>(i)].rng.seed(
            derive_seed(config.seed, static_cast<std::uint64_t>(i)));
        ctx.start_attempt(i);
    }
    ctx.queue.run_until_empty();

    RaResult result;
    result.outcomes.reserve(ctx.ues.size());
    for (auto& ue : ctx.ues) {
        ue.outcome.attempts = ue.attempts;
        ue.outcome.coverage_level = ue.coverage_level;
        result.outcomes.push_back(ue.outcome);
    }
    result.event_log = ctx.log.str();
    return result;
}

}  // namespace ntnlab::sim
