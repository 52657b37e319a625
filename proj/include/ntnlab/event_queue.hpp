#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ntnlab::sim {

// Deterministic discrete-event queue. Events pop in (time, insertion
// sequence) order, so identical inputs replay identically and equal-time
// events keep their scheduling order.
class EventQueue {
public:
    void schedule(double t_s, std::function<void()> fn) {
        if (t_s < now_) {
            t_s = now_;  // clamp; causality is asserted by tests on the log
        }
        heap_.push(Entry{t_s, next_seq_++, std::move(fn)});
    }

    bool empty() const { return heap_.empty(); }
    double now() const { return now_; }

    // Runs the earliest event. Returns false when the queue is empty.
    bool run_next() {
        if (heap_.empty()) return false;
        Entry e = heap_.top();
        heap_.pop();
        now_ = e.t;
        e.fn();
        return true;
    }

    void run_until_empty() {
        while (run_next()) {
        }
    }

private:
    struct Entry {
        double t;
        std::uint64_t seq;
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.t != b.t) return a.t > b.t;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    double now_ = 0.0;
};

// Line-oriented event log: `t=<s> node=<name> ev=<kind> detail=<k:v,...>`
// with fixed formatting and stable field order, so equal-seed runs are
// byte-identical and golden traces stay valid.
class EventLog {
public:
    using Detail = std::vector<std::pair<std::string, std::string>>;

    void record(double t_s, const std::string& node, const std::string& kind,
                const Detail& detail = {}) {
        char head[64];
        std::snprintf(head, sizeof(head), "t=%.9f", t_s);
        out_ << head << " node=" << node << " ev=" << kind << " detail=";
        for (std::size_t i = 0; i < detail.size(); ++i) {
            if (i) out_ << ',';
            out_ << detail[i].first << ':' << detail[i].second;
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

inline std::string fmt_int(long long v) { return std::to_string(v); }

}  // namespace ntnlab::sim
