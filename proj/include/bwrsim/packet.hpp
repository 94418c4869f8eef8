#pragma once

#include <cstdint>

#include "bwrsim/sim_time.hpp"

namespace bwrsim {

constexpr int kNumLcg = 4;

// One upstream traffic unit. Lifecycle timestamps are stamped at the
// measurement points as the packet moves through the pipeline; a value
// of -1 us means "not reached yet". Timestamps, once set, are
// non-decreasing in pipeline order.
struct Packet {
  std::uint64_t id = 0;
  std::int64_t size_bytes = 0;
  int lcg = 0;

  SimTime t_arrival_ue{-1};
  SimTime t_egress_enb{-1};
  SimTime t_arrival_cm{-1};
  SimTime t_egress_cmts{-1};

  bool harq_affected = false;
};

}  // namespace bwrsim
