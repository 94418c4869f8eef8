#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "bwrsim/packet.hpp"
#include "bwrsim/sim_time.hpp"

namespace bwrsim {

enum class TrafficKind { kCbr, kOnOff };

// Where generated packets enter the system. kCm drives the DOCSIS
// substack directly (no LTE segment), used for isolated upstream
// latency experiments.
enum class InjectPoint { kUe, kCm };

struct TrafficSpec {
  TrafficKind kind = TrafficKind::kCbr;
  std::int64_t packet_size = 200;           // bytes
  SimTime inter_arrival = SimTime::from_ms(1);
  SimTime phase{0};                         // first arrival offset
  // on-off only:
  SimTime on_duration{0};
  SimTime off_duration{0};
  double rate_in_on = 1.0;                  // packets per subframe
  int lcg = 1;
  InjectPoint inject = InjectPoint::kUe;

  void validate() const {
    if (packet_size <= 0) throw ConfigError("traffic.packet_size must be > 0");
    if (lcg < 0 || lcg >= kNumLcg) throw ConfigError("traffic.lcg must be 0..3");
    if (phase.us() < 0) throw ConfigError("traffic.phase must be >= 0");
    if (kind == TrafficKind::kCbr) {
      if (inter_arrival.us() <= 0) {
        throw ConfigError("traffic.inter_arrival_ms must be > 0 for cbr");
      }
    } else {
      if (on_duration.us() <= 0 || off_duration.us() <= 0) {
        throw ConfigError("traffic.on/off durations must be > 0 for onoff");
      }
      if (rate_in_on <= 0.0) throw ConfigError("traffic.rate_in_on must be > 0");
    }
  }
};

// Pure arrival process. next() returns the next arrival at or after
// the internal cursor; callers drive it either directly (tests) or via
// the event loop wrapper in Simulation. Arrival times per flow are
// strictly increasing. The on-off cycle is off-first: silences of
// off_duration alternate with on-windows of on_duration carrying
// periodic arrivals at rate_in_on packets per subframe.
class TrafficGenerator {
 public:
  explicit TrafficGenerator(TrafficSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    cursor_ = spec_.phase;
    if (spec_.kind == TrafficKind::kOnOff) {
      on_inter_ = SimTime(static_cast<std::int64_t>(
          static_cast<double>(kSubframeUs) / spec_.rate_in_on));
      if (on_inter_.us() <= 0) on_inter_ = SimTime(1);
    }
  }

  // Next arrival strictly before `horizon`, or nullopt.
  std::optional<std::pair<SimTime, Packet>> next(SimTime horizon) {
    SimTime t = cursor_;
    if (spec_.kind == TrafficKind::kOnOff) {
      t = align_to_on(t);
    }
    if (t >= horizon) return std::nullopt;
    Packet p;
    p.id = next_id_++;
    p.size_bytes = spec_.packet_size;
    p.lcg = spec_.lcg;
    p.t_arrival_ue = t;
    cursor_ = t + (spec_.kind == TrafficKind::kCbr ? spec_.inter_arrival
                                                   : on_inter_);
    return std::make_pair(t, p);
  }

  const TrafficSpec& spec() const { return spec_; }
  std::uint64_t generated() const { return next_id_; }

 private:
  // Shift t forward into the nearest on-window (cycle = off then on).
  SimTime align_to_on(SimTime t) const {
    std::int64_t cycle = spec_.on_duration.us() + spec_.off_duration.us();
    std::int64_t rel = t.us() - spec_.phase.us();
    std::int64_t in_cycle = rel % cycle;
    if (in_cycle >= spec_.off_duration.us()) return t;
    return SimTime(t.us() + (spec_.off_duration.us() - in_cycle));
  }

  TrafficSpec spec_;
  SimTime cursor_{0};
  SimTime on_inter_{0};
  std::uint64_t next_id_ = 0;
};

}  // namespace bwrsim
