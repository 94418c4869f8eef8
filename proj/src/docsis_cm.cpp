#include "bwrsim/docsis_cm.hpp"

#include <algorithm>
#include <utility>

namespace bwrsim {

DocsisCm::DocsisCm(DocsisConfig cfg, EventQueue& q, RngStream& contention_rng,
                   ReqSink req_sink, BurstSink burst_sink)
    : cfg_(cfg),
      q_(q),
      rng_(contention_rng),
      req_sink_(std::move(req_sink)),
      burst_sink_(std::move(burst_sink)) {
  flows_[kBeDataFlow] = Flow{};
  flows_[kUgsBwrFlow] = Flow{};
}

void DocsisCm::on_data_ingress(std::vector<Packet>&& pkts) {
  Flow& f = flow(kBeDataFlow);
  SimTime now = q_.now();
  for (auto& p : pkts) {
    p.t_arrival_cm = now;
    Item item;
    item.size = p.size_bytes;
    item.usable_at = now + cfg_.cm_overhead;
    item.req_ok_at = now + cfg_.cm_proc;
    item.payload = std::move(p);
    f.queued_bytes += item.size;
    ingress_bytes_ += item.size;
    f.q.push_back(std::move(item));
  }
}

void DocsisCm::on_bwr_ingress(const BwrWire& wire) {
  Flow& f = flow(kUgsBwrFlow);
  Item item;
  item.size = static_cast<std::int64_t>(wire.size());
  item.usable_at = q_.now() + cfg_.cm_proc;
  item.req_ok_at = item.usable_at;
  item.payload = wire;
  f.queued_bytes += item.size;
  f.q.push_back(std::move(item));
}

std::int64_t DocsisCm::uncovered_bytes(const Flow& f, SimTime now) const {
  std::int64_t covered = f.outstanding_req + f.pending_grant;
  std::int64_t uncovered = 0;
  for (const auto& item : f.q) {
    if (covered >= item.size) {
      covered -= item.size;
      continue;
    }
    if (item.req_ok_at > now) break;  // FIFO: later items are younger
    uncovered += item.size - covered;
    covered = 0;
  }
  return uncovered;
}

void DocsisCm::on_contention_opportunity(SimTime now) {
  Flow& f = flow(kBeDataFlow);
  std::int64_t want = uncovered_bytes(f, now);
  if (want <= 0) return;
  if (f.skip_opps > 0) {
    --f.skip_opps;
    return;
  }
  if (cfg_.p_collide > 0.0 && rng_.bernoulli(cfg_.p_collide)) {
    // Collision: truncated binary exponential backoff over contention
    // opportunities.
    ++f.collisions;
    f.backoff_exp = std::min(f.backoff_exp + 1, cfg_.backoff_cap_exp);
    f.skip_opps = rng_.uniform_int(1, std::int64_t{1} << f.backoff_exp) - 1;
    return;
  }
  f.backoff_exp = 0;
  ++f.reqs_emitted;
  f.outstanding_req += want;
  req_sink_(kBeDataFlow, want, now);
}

void DocsisCm::on_bwr_poll(SimTime now) {
  if (!cfg_.bwr_over_rtps) return;
  Flow& f = flow(kUgsBwrFlow);
  std::int64_t want = uncovered_bytes(f, now);
  if (want <= 0) return;
  ++f.reqs_emitted;
  f.outstanding_req += want;
  req_sink_(kUgsBwrFlow, want, now);
}

void DocsisCm::apply_map(const MapMessage& map) {
  for (const auto& alloc : map.allocations) {
    if (alloc.kind == AllocKind::kContention) continue;
    auto it = flows_.find(alloc.flow);
    if (it == flows_.end()) {
      throw ModelError("apply_map: grant for unknown flow " +
                       std::to_string(alloc.flow));
    }
    Flow& f = it->second;
    f.pending_grant += alloc.bytes;
    if (alloc.kind == AllocKind::kUnicast) {
      f.outstanding_req -= std::min(f.outstanding_req, alloc.bytes);
    }
    int flow_id = alloc.flow;
    MapAllocation a = alloc;
    q_.schedule(alloc.start, "cm", "tx_grant", [this, flow_id, a] {
      transmit(flow_id, a);
    });
  }
}

void DocsisCm::transmit(int flow_id, const MapAllocation& alloc) {
  Flow& f = flow(flow_id);
  f.pending_grant -= std::min(f.pending_grant, alloc.bytes);

  std::vector<BurstItem> burst;
  std::int64_t used = 0;
  while (!f.q.empty()) {
    Item& head = f.q.front();
    if (head.usable_at > alloc.start) break;  // not framed yet
    if (used + head.size > alloc.bytes) break;
    used += head.size;
    BurstItem bi;
    bi.completed_at = alloc.start + cfg_.serialize(used);
    bi.payload = std::move(head.payload);
    burst.push_back(std::move(bi));
    f.queued_bytes -= head.size;
    transmitted_bytes_ += head.size;
    f.q.pop_front();
  }
  padding_bytes_ += alloc.bytes - used;  // unused capacity is wasted
  if (burst.empty()) return;

  SimTime deliver_at = burst.back().completed_at;
  auto items = std::make_shared<std::vector<BurstItem>>(std::move(burst));
  q_.schedule(deliver_at, "cm", "burst_done",
              [this, items] { burst_sink_(std::move(*items)); });
}

}  // namespace bwrsim
