#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellgrid::sim {

using Time = std::uint64_t;  // simulated microseconds

enum class EventKind { MessageDelivery, TeidBirth, QueryInjection, TopologyChange };

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Discrete-event loop: earliest time first, insertion order among equal times.
class EventQueue {
public:
    explicit EventQueue(std::size_t budget = 1'000'000) : budget_(budget) {}

    void schedule(Time at, EventKind kind, std::function<void()> action) {
        if (at < now_) throw std::logic_error("event scheduled in the past");
        heap_.push(Entry{at, seq_++, kind, std::move(action)});
    }
    void after(Time delay, EventKind kind, std::function<void()> action) {
        schedule(now_ + delay, kind, std::move(action));
    }

    // Runs until empty; throws NonConvergence when the budget runs out first.
    void run() {
        while (!heap_.empty()) {
            if (processed_ >= budget_) {
                throw NonConvergence("event budget of " + std::to_string(budget_) + " exhausted");
            }
            Entry e = heap_.top();
            heap_.pop();
            now_ = e.time;
            ++processed_;
            ++by_kind_[static_cast<std::size_t>(e.kind)];
            e.action();
        }
    }

    Time now() const { return now_; }
    std::size_t processed() const { return processed_; }
    std::size_t processed(EventKind k) const { return by_kind_[static_cast<std::size_t>(k)]; }
    bool empty() const { return heap_.empty(); }

private:
    struct Entry {
        Time time;
        std::uint64_t seq;
        EventKind kind;
        std::function<void()> action;
        bool operator>(const Entry& o) const { return time != o.time ? time > o.time : seq > o.seq; }
    };

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    Time now_ = 0;
    std::uint64_t seq_ = 0;
    std::size_t processed_ = 0;
    std::size_t budget_;
    std::size_t by_kind_[4] = {0, 0, 0, 0};
};

}  // namespace cellgrid::sim
