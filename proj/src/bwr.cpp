#include "bwrsim/bwr.hpp"

#include <cstring>
#include <limits>
#include <string>

namespace bwrsim {
namespace {

void put_u32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 24);
  p[1] = static_cast<std::uint8_t>(v >> 16);
  p[2] = static_cast<std::uint8_t>(v >> 8);
  p[3] = static_cast<std::uint8_t>(v);
}

void put_u64(std::uint8_t* p, std::uint64_t v) {
  put_u32(p, static_cast<std::uint32_t>(v >> 32));
  put_u32(p + 4, static_cast<std::uint32_t>(v));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

std::uint64_t get_u64(const std::uint8_t* p) {
  return (std::uint64_t{get_u32(p)} << 32) | get_u32(p + 4);
}

std::uint32_t checked_u32(std::int64_t v, const char* field) {
  if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) {
    throw ModelError(std::string("bwr_encode: field overflow: ") + field);
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

BwrWire bwr_encode(const BwrMessage& msg) {
  if (msg.total_bytes != msg.lcg_sum()) {
    throw ModelError("bwr_encode: total_bytes != sum of per_lcg_bytes");
  }
  if (msg.expected_arrival.us() < 0) {
    throw ModelError("bwr_encode: negative expected_arrival");
  }
  BwrWire w{};
  w[0] = msg.version;
  w[1] = msg.flush_included ? 0x01 : 0x00;
  put_u32(&w[2], msg.enb_id);
  put_u32(&w[6], static_cast<std::uint32_t>(msg.grant_subframe));
  put_u64(&w[10], static_cast<std::uint64_t>(msg.expected_arrival.us()));
  put_u32(&w[18], checked_u32(msg.total_bytes, "total_bytes"));
  for (int i = 0; i < kNumLcg; ++i) {
    put_u32(&w[22 + 4 * i], checked_u32(msg.per_lcg_bytes[i], "per_lcg_bytes"));
  }
  return w;
}

BwrMessage bwr_decode(const std::uint8_t* data, std::size_t len) {
  if (len != kBwrWireBytes) {
    throw ModelError("bwr_decode: wrong length " + std::to_string(len));
  }
  BwrMessage m;
  m.version = data[0];
  m.flush_included = (data[1] & 0x01) != 0;
  m.enb_id = get_u32(&data[2]);
  m.grant_subframe = static_cast<std::int32_t>(get_u32(&data[6]));
  m.expected_arrival = SimTime(static_cast<std::int64_t>(get_u64(&data[10])));
  m.total_bytes = get_u32(&data[18]);
  for (int i = 0; i < kNumLcg; ++i) {
    m.per_lcg_bytes[i] = get_u32(&data[22 + 4 * i]);
  }
  if (m.total_bytes != m.lcg_sum()) {
    throw ModelError("bwr_decode: total_bytes != sum of per_lcg_bytes");
  }
  return m;
}

double bwr_overhead_kbps(std::int64_t msg_bytes, SimTime period) {
  if (period.us() <= 0) throw ModelError("bwr_overhead_kbps: period must be > 0");
  return static_cast<double>(msg_bytes) * 8000.0 /
         static_cast<double>(period.us());
}

}  // namespace bwrsim
