#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <ostream>
#include <set>
#include <vector>

#include "bwrsim/docsis.hpp"
#include "bwrsim/event_queue.hpp"

namespace bwrsim {

// Wanted upstream capacity, waiting to be written into a MAP.
struct GrantIntent {
  int flow = -1;
  std::int64_t bytes = 0;
  SimTime not_before{0};     // earliest useful grant start
  SimTime eligible_at{0};    // known to the scheduler (after processing)
  enum class Source { kReq, kBwr, kUgs } source = Source::kReq;
  std::uint64_t order = 0;   // intake sequence, for FIFO service
};

// CMTS scheduler: periodic MAP construction one interval in advance,
// request service, UGS provisioning, and conversion of Bandwidth
// Reports into just-in-time grants subject to the lead-time rule.
class DocsisCmts {
 public:
  using MapSink = std::function<void(const MapMessage&)>;
  using EgressSink = std::function<void(Packet&&)>;

  DocsisCmts(DocsisConfig cfg, EventQueue& q, MapSink map_sink,
             EgressSink egress_sink);

  // Provision the periodic unsolicited grant for the report flow.
  void enable_ugs(int flow) { ugs_flows_.insert(flow); }

  void on_req(int flow, std::int64_t bytes, SimTime now);

  // Decoded report. Admitted only if it arrived at least bwr_lead
  // ahead of the expected data arrival; late reports are dropped and
  // the data falls back to the request path.
  void on_bwr(const BwrMessage& msg, SimTime arrival);

  // Upstream burst after serialization; packets leave the system
  // cmts_proc later, report payloads are decoded and admitted.
  void on_burst(std::vector<BurstItem>&& items);

  // Build and emit the MAP indexed k (invoked at k * map_interval).
  MapMessage build_map(std::int64_t k);

  void set_map_trace(std::ostream* os) { map_trace_ = os; }

  std::uint64_t bwr_accepted() const { return bwr_accepted_; }
  std::uint64_t bwr_dropped_late() const { return bwr_dropped_late_; }
  std::int64_t bwr_granted_bytes() const { return bwr_granted_bytes_; }
  std::int64_t egressed_bytes() const { return egressed_bytes_; }

 private:
  void place_allocations(MapMessage& map);

  DocsisConfig cfg_;
  EventQueue& q_;
  MapSink map_sink_;
  EgressSink egress_sink_;
  std::ostream* map_trace_ = nullptr;

  std::set<int> ugs_flows_;
  std::deque<GrantIntent> bwr_intents_;
  std::deque<GrantIntent> req_intents_;
  std::uint64_t next_order_ = 0;

  std::uint64_t bwr_accepted_ = 0;
  std::uint64_t bwr_dropped_late_ = 0;
  std::int64_t bwr_granted_bytes_ = 0;
  std::int64_t egressed_bytes_ = 0;
};

}  // namespace bwrsim
