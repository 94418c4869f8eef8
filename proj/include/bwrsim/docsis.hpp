#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bwrsim/bwr.hpp"
#include "bwrsim/packet.hpp"
#include "bwrsim/sim_time.hpp"

namespace bwrsim {

// Service-flow identifiers shared by CM and CMTS.
constexpr int kBeDataFlow = 0;
constexpr int kUgsBwrFlow = 1;

enum class AllocKind { kContention, kUgs, kUnicast };

struct MapAllocation {
  int flow = -1;            // -1 for the contention region
  SimTime start{0};
  std::int64_t bytes = 0;   // contention region carries none
  AllocKind kind = AllocKind::kUnicast;
};

// Downstream allocation descriptor: emitted one full interval before
// its coverage window starts, lists the window's grants plus one
// contention region at the window start.
struct MapMessage {
  std::int64_t index = 0;
  SimTime emitted_at{0};
  SimTime cover_start{0};
  SimTime cover_end{0};
  std::vector<MapAllocation> allocations;
};

// One unit inside an upstream burst, with the instant its last byte
// finishes serializing.
struct BurstItem {
  std::variant<Packet, BwrWire> payload;
  SimTime completed_at{0};
};

struct DocsisConfig {
  SimTime map_interval = SimTime::from_ms(2);
  SimTime cm_proc = SimTime::from_us(500);      // request-side lead time
  SimTime cmts_proc = SimTime::from_us(500);
  SimTime cm_overhead = SimTime::from_us(850);  // data framing/FEC residual
  std::int64_t upstream_mbps = 100;
  bool bwr_over_rtps = false;                   // default transport is UGS
  SimTime ugs_period = SimTime::from_ms(2);
  SimTime ugs_offset = SimTime::from_ms(1);     // into each coverage window
  std::int64_t ugs_grant_bytes = 160;           // two reports per grant
  SimTime bwr_lead = SimTime::from_ms(4);
  double p_collide = 0.0;                       // contention off by default
  int backoff_cap_exp = 10;

  // Serialization time at the upstream rate, rounded up to a full us.
  SimTime serialize(std::int64_t bytes) const {
    return SimTime((bytes * 8 + upstream_mbps - 1) / upstream_mbps);
  }
};

}  // namespace bwrsim
