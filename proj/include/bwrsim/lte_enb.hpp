#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bwrsim/bwr.hpp"
#include "bwrsim/lte_channel.hpp"
#include "bwrsim/lte_ue.hpp"
#include "bwrsim/packet.hpp"
#include "bwrsim/sim_time.hpp"

namespace bwrsim {

enum class BwrMode { kBaseline, kNoFlush, kFlush };

struct GrantRecord {
  std::int64_t bytes = 0;
  std::array<std::int64_t, kNumLcg> per_lcg{};
};

// Sliding per-UE record of scheduler grants keyed by grant subframe.
// lookup() of a subframe with no grant reads as zero bytes. Keeps
// comfortably more than the 9 subframes the flush computation needs.
class GrantHistory {
 public:
  void put(std::int64_t sf, GrantRecord rec) {
    grants_[sf] = rec;
    while (!grants_.empty() && grants_.begin()->first < sf - kKeep) {
      grants_.erase(grants_.begin());
    }
  }

  GrantRecord lookup(std::int64_t sf) const {
    auto it = grants_.find(sf);
    return it == grants_.end() ? GrantRecord{} : it->second;
  }

  // Sum of grant bytes over subframes [first, last].
  std::int64_t sum_bytes(std::int64_t first, std::int64_t last) const {
    std::int64_t s = 0;
    for (std::int64_t sf = first; sf <= last; ++sf) s += lookup(sf).bytes;
    return s;
  }

 private:
  static constexpr std::int64_t kKeep = 32;
  std::map<std::int64_t, GrantRecord> grants_;
};

// Synchronous uplink HARQ bookkeeping: 8 processes per UE, process id
// = first transmission subframe mod 8, retransmission exactly 8
// subframes after the first transmission.
class HarqProcessTable {
 public:
  enum class State { kIdle, kAwaitingDecode, kAwaitingRetx };

  void on_tx(std::int64_t first_tx_sf, bool is_retx) {
    State& st = procs_[first_tx_sf % 8];
    if (is_retx) {
      if (st != State::kAwaitingRetx) {
        throw ModelError("harq: retransmission on a process not awaiting it");
      }
    }
    st = State::kAwaitingDecode;
  }

  void on_decode(std::int64_t first_tx_sf, bool pass) {
    State& st = procs_[first_tx_sf % 8];
    if (st != State::kAwaitingDecode) {
      throw ModelError("harq: decode outcome for an idle process");
    }
    st = pass ? State::kIdle : State::kAwaitingRetx;
  }

  State state(int proc) const { return procs_[proc % 8]; }

 private:
  std::array<State, 8> procs_{};
};

struct EnbConfig {
  int enb_id = 0;
  std::int64_t turnaround_sf = 4;     // SR/BSR reception -> grant
  std::int64_t grant_to_tx_sf = 4;    // grant -> UE transmission
  std::int64_t decode_sf = 2;         // transmission -> decode complete
  std::int64_t retx_spacing_sf = 8;   // first tx -> retransmission
  int n_prb = 50;
  std::int64_t bsr_grant_bytes = 8;   // SR response, carries the BSR only
  std::int64_t sr_period_sf = 5;
  std::int64_t channel_update_sf = 10;
  std::int64_t grid_offset_us = 500;  // sub-subframe offset of the LTE grid
  BwrMode mode = BwrMode::kBaseline;
  std::int64_t bwr_period_sf = 2;
};

// Pure flush-report arithmetic: grants in the [detection-8, detection]
// window plus any older grants whose blocks are still held (relevant
// only when failures chain inside a hold window).
GrantRecord flush_report(const GrantHistory& hist, std::int64_t detection_sf,
                         std::int64_t window_sf,
                         const std::vector<std::pair<std::int64_t, GrantRecord>>&
                             held_older);

// eNB MAC/RLC: per-subframe round-robin scheduler, grant pipeline
// (grant at t, air at t+4, decode at t+6), HARQ retransmission
// bookkeeping, in-order RLC delivery with head-of-line hold on CRC
// failure, and Bandwidth Report construction.
class LteEnb {
 public:
  using DataSink = std::function<void(std::vector<Packet>&&)>;
  using BwrSink = std::function<void(const BwrMessage&)>;

  LteEnb(EnbConfig cfg, LteChannel& channel, std::vector<LteUe*> ues,
         DataSink data_sink, BwrSink bwr_sink);

  // Master per-subframe tick; drives every internal phase in a fixed
  // deterministic order.
  void on_subframe(std::int64_t t);

  SimTime tick_time(std::int64_t sf) const {
    return subframe_tick(sf, cfg_.grid_offset_us);
  }

  // Report content for one grant subframe (one or two messages: the
  // flush report replaces the plain one for UEs that failed at sf).
  std::vector<BwrMessage> bwr_messages_for(std::int64_t sf) const;

  const GrantHistory& history(int ue_id) const { return per_ue_.at(ue_id).history; }
  const HarqProcessTable& harq_table(int ue_id) const {
    return per_ue_.at(ue_id).harq;
  }
  std::int64_t backlog_estimate(int ue_id) const;
  std::optional<std::int64_t> hold_until(int ue_id) const {
    return per_ue_.at(ue_id).hold_until;
  }

  // Test seams: inject scheduler state without running the pipeline.
  void test_put_grant(int ue_id, std::int64_t sf, GrantRecord rec) {
    per_ue_.at(ue_id).history.put(sf, rec);
  }
  void test_mark_failure(std::int64_t sf, int ue_id) {
    failures_[sf].insert(ue_id);
  }

  std::uint64_t bwr_messages_emitted() const { return bwr_emitted_; }

 private:
  struct InFlightTb {
    UlTransportBlock tb;
  };
  struct PerUe {
    LteUe* ue = nullptr;
    std::array<std::int64_t, kNumLcg> reported_remaining{};  // backlog estimate
    GrantHistory history;
    HarqProcessTable harq;
    // Decoded blocks awaiting in-order egress, sorted by grant subframe.
    std::vector<UlTransportBlock> rlc_queue;
    std::optional<std::int64_t> hold_until;
    // Failed blocks whose retransmission is pending: (grant_sf, record).
    std::vector<std::pair<std::int64_t, GrantRecord>> awaiting_retx;
    bool sr_in_pipeline = false;
  };
  struct ControlDue {
    enum class Kind { kSr, kBsr } kind;
    int ue_id;
    Bsr bsr;
  };

  void phase_channel(std::int64_t t);
  void phase_ue_tx(std::int64_t t);
  void phase_decode(std::int64_t t);
  void phase_egress(std::int64_t t);
  void phase_control(std::int64_t t);
  void phase_schedule(std::int64_t t);
  void phase_sr(std::int64_t t);
  void phase_bwr(std::int64_t t);

  bool control_grant_outstanding(const PerUe& u) const;
  std::int64_t per_prb_bytes(int mcs) const;

  EnbConfig cfg_;
  LteChannel& channel_;
  std::map<int, PerUe> per_ue_;
  DataSink data_sink_;
  BwrSink bwr_sink_;

  std::map<std::int64_t, std::vector<UlTransportBlock>> pending_decode_;
  std::map<std::int64_t, std::vector<ControlDue>> control_due_;
  // Bytes already committed to retransmissions per air subframe.
  std::map<std::int64_t, std::vector<std::pair<int, std::int64_t>>> retx_air_;
  std::map<std::int64_t, std::set<int>> failures_;  // detection sf -> UEs

  std::uint64_t bwr_emitted_ = 0;
};

}  // namespace bwrsim
