#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "bwrsim/packet.hpp"
#include "bwrsim/sim_time.hpp"

namespace bwrsim {

// Buffer status report: buffered bytes per logical channel group at
// build time. Rides in every uplink transport block (and in the
// dedicated block granted after a scheduling request).
struct Bsr {
  std::array<std::int64_t, kNumLcg> bytes{};
  SimTime built_at{-1};
  std::int64_t built_at_subframe = -1;  // tx subframe carrying the report

  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto b : bytes) s += b;
    return s;
  }
};

// One uplink transmission. Control blocks carry only the BSR (the
// grant issued in response to an SR is too small for a data packet);
// data blocks carry whole packets filled LCG-priority-first.
struct UlTransportBlock {
  int enb_id = 0;
  int ue_id = 0;
  std::int64_t grant_subframe = -1;
  std::int64_t first_tx_subframe = -1;
  std::int64_t granted_bytes = 0;
  bool is_control = false;
  bool is_retx = false;
  std::vector<Packet> packets;
  Bsr bsr;

  std::int64_t payload_bytes() const {
    std::int64_t s = 0;
    for (const auto& p : packets) s += p.size_bytes;
    return s;
  }
};

struct UeGrant {
  std::int64_t grant_subframe = -1;
  std::int64_t tx_subframe = -1;
  std::int64_t bytes = 0;
  bool is_control = false;
};

struct UeConfig {
  std::int64_t sr_period_sf = 5;
  std::int64_t bsr_period_sf = 10;   // periodic BSR timer
};

// UE side of the uplink ladder: buffers arrivals, raises a scheduling
// request on a buffer empty->non-empty transition when no grant is
// pending, and transmits whole packets on received grants.
class LteUe {
 public:
  LteUe(int ue_id, UeConfig cfg) : ue_id_(ue_id), cfg_(cfg) {}

  int id() const { return ue_id_; }

  // New packet from the traffic source.
  void handle_arrival(Packet p) {
    bool was_empty = buffered_bytes_ == 0;
    buffered_bytes_ += p.size_bytes;
    lcg_bytes_[p.lcg] += p.size_bytes;
    queues_[p.lcg].push_back(std::move(p));
    total_arrived_bytes_ += queues_[p.lcg].back().size_bytes;
    if (was_empty && !sr_pending_ && !has_pending_grant()) {
      sr_pending_ = true;
    }
  }

  // Periodic SR opportunity. Returns true if an SR goes out now; the
  // request stays pending until a grant arrives.
  bool handle_sr_opportunity() { return sr_pending_; }

  // Grant announced by the eNB scheduler; the transmission itself
  // happens at tx_subframe.
  void handle_grant(const UeGrant& g) {
    sr_pending_ = false;
    pending_grants_.push_back(g);
  }

  Bsr build_bsr(SimTime now, std::int64_t tx_subframe) const {
    Bsr b;
    b.bytes = lcg_bytes_;
    b.built_at = now;
    b.built_at_subframe = tx_subframe;
    return b;
  }

  // Build the transport block for a grant due at subframe `t`.
  // Dequeues whole packets, LCG 0 first then FIFO within each LCG, up
  // to the granted bytes; the remainder stays buffered. Every block
  // carries a BSR reflecting the buffer after dequeue.
  std::optional<UlTransportBlock> transmit_due(std::int64_t t, SimTime now,
                                               int enb_id) {
    std::optional<UeGrant> grant;
    for (auto it = pending_grants_.begin(); it != pending_grants_.end(); ++it) {
      if (it->tx_subframe == t) {
        grant = *it;
        pending_grants_.erase(it);
        break;
      }
    }
    if (!grant) return std::nullopt;

    UlTransportBlock tb;
    tb.enb_id = enb_id;
    tb.ue_id = ue_id_;
    tb.grant_subframe = grant->grant_subframe;
    tb.first_tx_subframe = t;
    tb.granted_bytes = grant->bytes;
    tb.is_control = grant->is_control;
    if (!grant->is_control) {
      std::int64_t room = grant->bytes;
      for (int lcg = 0; lcg < kNumLcg; ++lcg) {
        auto& q = queues_[lcg];
        while (!q.empty() && q.front().size_bytes <= room) {
          room -= q.front().size_bytes;
          buffered_bytes_ -= q.front().size_bytes;
          lcg_bytes_[lcg] -= q.front().size_bytes;
          total_sent_bytes_ += q.front().size_bytes;
          tb.packets.push_back(std::move(q.front()));
          q.pop_front();
        }
      }
    }
    tb.bsr = build_bsr(now, t);
    return tb;
  }

  std::int64_t buffered_bytes() const { return buffered_bytes_; }
  std::int64_t buffered_bytes(int lcg) const { return lcg_bytes_[lcg]; }
  bool sr_pending() const { return sr_pending_; }
  bool has_pending_grant() const { return !pending_grants_.empty(); }
  bool has_pending_control_grant() const {
    for (const auto& g : pending_grants_) {
      if (g.is_control) return true;
    }
    return false;
  }
  std::int64_t arrived_bytes() const { return total_arrived_bytes_; }
  std::int64_t sent_bytes() const { return total_sent_bytes_; }
  const UeConfig& config() const { return cfg_; }

 private:
  int ue_id_;
  UeConfig cfg_;
  std::array<std::deque<Packet>, kNumLcg> queues_;
  std::array<std::int64_t, kNumLcg> lcg_bytes_{};
  std::int64_t buffered_bytes_ = 0;
  std::int64_t total_arrived_bytes_ = 0;
  std::int64_t total_sent_bytes_ = 0;
  bool sr_pending_ = false;
  std::vector<UeGrant> pending_grants_;
};

}  // namespace bwrsim
