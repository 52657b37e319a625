#pragma once

#include "ntnlab/numerology.hpp"
#include "ntnlab/scenario.hpp"

namespace ntnlab::sim {

// Uplink timing state of one connected session. Subframes are 1 ms.
struct TaSession {
    bool nbiot = false;
    int mu = 0;
    double uplink_advance_s = 0.0;
    int effective_from_subframe = 0;  // pending command takes effect here
    double timer_expires_s = 0.0;     // timeAlignmentTimer deadline
    bool aligned = false;             // false until the first command lands
};

struct TaApplication {
    int effective_subframe = 0;
    double uplink_advance_s = 0.0;
    double timer_expires_s = 0.0;
};

// Applies a timing advance command received in `current_subframe`. NR
// commands take effect at subframe n+6; NB-IoT commands at the first
// uplink slot after the end of subframe n+12. The timeAlignmentTimer is
// restarted from the command time.
TaApplication apply_timing_advance(TaSession& session, const TaCommand& command,
                                   int current_subframe,
                                   const TimerSet& timers);

// True while the session's timeAlignmentTimer has not expired. An expired
// session must re-run random access before transmitting uplink.
bool is_aligned(const TaSession& session, double t_s);

}  // namespace ntnlab::sim
