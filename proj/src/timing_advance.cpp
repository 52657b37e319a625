#include "ntnlab/timing_advance.hpp"

#include <stdexcept>

namespace ntnlab::sim {

TaApplication apply_timing_advance(TaSession& session, const TaCommand& command,
                                   int current_subframe,
                                   const TimerSet& timers) {
    if (command.nbiot != session.nbiot) {
        throw std::invalid_argument("TA command type does not match the session");
    }
    const double advance = command.time_s(session.mu);  // validates the range

    TaApplication app;
    app.effective_subframe = command.applied_at_subframe(current_subframe);
    app.uplink_advance_s = advance;
    app.timer_expires_s = static_cast<double>(current_subframe) * 1e-3 +
                          timers.time_alignment_timer_s;

    session.uplink_advance_s = advance;
    session.effective_from_subframe = app.effective_subframe;
    session.timer_expires_s = app.timer_expires_s;
    session.aligned = true;
    return app;
}

bool is_aligned(const TaSession& session, double t_s) {
    return session.aligned && t_s <= session.timer_expires_s;
}

}  // namespace ntnlab::sim
