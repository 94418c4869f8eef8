#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <vector>

#include "bwrsim/docsis.hpp"
#include "bwrsim/event_queue.hpp"
#include "bwrsim/rng.hpp"

namespace bwrsim {

// Cable modem: service-flow queues, contention bandwidth requests with
// truncated binary exponential backoff, grant bookkeeping from MAPs,
// and upstream burst transmission. Transmissions happen only inside
// granted intervals (solicited-only upstream).
class DocsisCm {
 public:
  using ReqSink = std::function<void(int flow, std::int64_t bytes, SimTime now)>;
  using BurstSink = std::function<void(std::vector<BurstItem>&&)>;

  DocsisCm(DocsisConfig cfg, EventQueue& q, RngStream& contention_rng,
           ReqSink req_sink, BurstSink burst_sink);

  // Data packets from the eNB (or direct injection); stamps
  // t_arrival_cm and may arm a bandwidth request.
  void on_data_ingress(std::vector<Packet>&& pkts);

  // Encoded report from the eNB; queued on the report flow, which
  // never issues contention requests.
  void on_bwr_ingress(const BwrWire& wire);

  // Contention opportunity at a coverage-window start. Emits at most
  // one request for the backlog not yet covered by outstanding
  // requests or registered grants.
  void on_contention_opportunity(SimTime now);

  // Unicast polling opportunity for the report flow (RTPS transport).
  void on_bwr_poll(SimTime now);

  // Registers the MAP's grants and schedules the transmissions.
  void apply_map(const MapMessage& map);

  std::uint64_t data_reqs_emitted() const { return flow(kBeDataFlow).reqs_emitted; }
  std::uint64_t collisions() const { return flow(kBeDataFlow).collisions; }
  std::int64_t queued_bytes(int flow_id) const { return flow(flow_id).queued_bytes; }
  std::int64_t ingress_bytes() const { return ingress_bytes_; }
  std::int64_t transmitted_bytes() const { return transmitted_bytes_; }
  std::int64_t padding_bytes() const { return padding_bytes_; }

 private:
  struct Item {
    std::variant<Packet, BwrWire> payload;
    std::int64_t size = 0;
    SimTime usable_at{0};   // framed and transmittable
    SimTime req_ok_at{0};   // may be covered by a request
  };
  struct Flow {
    std::deque<Item> q;
    std::int64_t queued_bytes = 0;
    std::int64_t outstanding_req = 0;
    std::int64_t pending_grant = 0;  // registered, not yet transmitted
    int backoff_exp = 0;
    std::int64_t skip_opps = 0;
    std::uint64_t reqs_emitted = 0;
    std::uint64_t collisions = 0;
  };

  Flow& flow(int id) { return flows_.at(id); }
  const Flow& flow(int id) const { return flows_.at(id); }

  // Backlog beyond what requests and registered grants already cover,
  // counting only items old enough to be requested.
  std::int64_t uncovered_bytes(const Flow& f, SimTime now) const;

  void transmit(int flow_id, const MapAllocation& alloc);

  DocsisConfig cfg_;
  EventQueue& q_;
  RngStream& rng_;
  ReqSink req_sink_;
  BurstSink burst_sink_;
  std::map<int, Flow> flows_;

  std::int64_t ingress_bytes_ = 0;
  std::int64_t transmitted_bytes_ = 0;
  std::int64_t padding_bytes_ = 0;
};

}  // namespace bwrsim
