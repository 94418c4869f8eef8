#pragma once

#include <array>
#include <cstdint>

#include "bwrsim/packet.hpp"
#include "bwrsim/sim_time.hpp"

namespace bwrsim {

// Report from the eNB scheduler to the CMTS: how many bytes were
// granted for a subframe and when they are expected to reach the CM,
// so the CMTS can schedule an upstream grant just in time.
struct BwrMessage {
  std::uint8_t version = 1;
  std::uint32_t enb_id = 0;
  std::int32_t grant_subframe = 0;
  SimTime expected_arrival{0};           // at the CM
  std::int64_t total_bytes = 0;
  std::array<std::int64_t, kNumLcg> per_lcg_bytes{};
  bool flush_included = false;

  std::int64_t lcg_sum() const {
    std::int64_t s = 0;
    for (auto b : per_lcg_bytes) s += b;
    return s;
  }
};

constexpr std::size_t kBwrWireBytes = 80;
using BwrWire = std::array<std::uint8_t, kBwrWireBytes>;

// Fixed-layout big-endian encoding, zero-padded to exactly 80 bytes:
//   version(1) flags(1) enb_id(4) grant_subframe(4)
//   expected_arrival_us(8) total_bytes(4) per_lcg_bytes(4x4) reserved(42)
// flags bit0 = flush_included.
BwrWire bwr_encode(const BwrMessage& msg);
BwrMessage bwr_decode(const std::uint8_t* data, std::size_t len);

inline BwrMessage bwr_decode(const BwrWire& w) {
  return bwr_decode(w.data(), w.size());
}

// Upstream rate consumed by sending msg_bytes every period, in kbps.
double bwr_overhead_kbps(std::int64_t msg_bytes, SimTime period);

}  // namespace bwrsim
