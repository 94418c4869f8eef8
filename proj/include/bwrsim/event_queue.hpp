#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "bwrsim/sim_time.hpp"

namespace bwrsim {

// Deterministic discrete-event clock. Events execute in (time, seq)
// order; seq is assigned at scheduling time, so ties at equal time run
// in insertion order. Scheduling in the past is a fatal model error.
class EventQueue {
 public:
  using Action = std::function<void()>;

  std::uint64_t schedule(SimTime time, std::string target, std::string label,
                         Action action) {
    if (time < now_) {
      throw ModelError("schedule: time " + std::to_string(time.us()) +
                       " is in the past (now=" + std::to_string(now_.us()) + ")");
    }
    std::uint64_t id = next_seq_++;
    heap_.push(Entry{time, id, std::move(target), std::move(label),
                     std::move(action)});
    return id;
  }

  // Executes every event with time <= end, then advances the clock to
  // end. Returns the number of events executed.
  std::uint64_t run_until(SimTime end) {
    std::uint64_t executed = 0;
    while (!heap_.empty() && heap_.top().time <= end) {
      Entry e = heap_.top();
      heap_.pop();
      now_ = e.time;
      if (trace_) {
        (*trace_) << e.time.us() << '\t' << e.target << '\t' << e.label << '\n';
      }
      e.action();
      ++executed;
    }
    now_ = end;
    return executed;
  }

  SimTime now() const { return now_; }
  bool empty() const { return heap_.empty(); }

  // Optional event-trace sink: one line per executed event,
  // time_us<TAB>target<TAB>payload.
  void set_trace(std::ostream* os) { trace_ = os; }

 private:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    std::string target;
    std::string label;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return b.time < a.time;
      return b.seq < a.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  SimTime now_{0};
  std::uint64_t next_seq_ = 0;
  std::ostream* trace_ = nullptr;
};

}  // namespace bwrsim
