#include "bwrsim/docsis_cmts.hpp"

#include <algorithm>
#include <utility>

namespace bwrsim {

DocsisCmts::DocsisCmts(DocsisConfig cfg, EventQueue& q, MapSink map_sink,
                       EgressSink egress_sink)
    : cfg_(cfg),
      q_(q),
      map_sink_(std::move(map_sink)),
      egress_sink_(std::move(egress_sink)) {}

void DocsisCmts::on_req(int flow, std::int64_t bytes, SimTime now) {
  SimTime eligible = now + cfg_.cmts_proc;
  // Same-flow requests not yet written into a MAP coalesce.
  for (auto& intent : req_intents_) {
    if (intent.flow == flow) {
      intent.bytes += bytes;
      if (intent.eligible_at < eligible) intent.eligible_at = eligible;
      return;
    }
  }
  GrantIntent gi;
  gi.flow = flow;
  gi.bytes = bytes;
  gi.not_before = SimTime(0);
  gi.eligible_at = eligible;
  gi.source = GrantIntent::Source::kReq;
  gi.order = next_order_++;
  req_intents_.push_back(gi);
}

void DocsisCmts::on_bwr(const BwrMessage& msg, SimTime arrival) {
  if (arrival + cfg_.bwr_lead > msg.expected_arrival) {
    ++bwr_dropped_late_;
    return;
  }
  if (msg.total_bytes <= 0) return;  // nothing scheduled this subframe
  ++bwr_accepted_;
  GrantIntent gi;
  gi.flow = kBeDataFlow;
  gi.bytes = msg.total_bytes;
  // The modem needs its framing time after the data lands; grant at
  // the instant the bytes become transmittable.
  gi.not_before = msg.expected_arrival + cfg_.cm_overhead;
  gi.eligible_at = arrival + cfg_.cmts_proc;
  gi.source = GrantIntent::Source::kBwr;
  gi.order = next_order_++;
  bwr_intents_.push_back(gi);
}

void DocsisCmts::on_burst(std::vector<BurstItem>&& items) {
  for (auto& item : items) {
    if (std::holds_alternative<Packet>(item.payload)) {
      Packet p = std::get<Packet>(std::move(item.payload));
      p.t_egress_cmts = item.completed_at + cfg_.cmts_proc;
      egressed_bytes_ += p.size_bytes;
      egress_sink_(std::move(p));
    } else {
      const BwrWire& wire = std::get<BwrWire>(item.payload);
      on_bwr(bwr_decode(wire), item.completed_at);
    }
  }
}

MapMessage DocsisCmts::build_map(std::int64_t k) {
  MapMessage map;
  map.index = k;
  map.emitted_at = SimTime(k * cfg_.map_interval.us());
  map.cover_start = map.emitted_at + cfg_.map_interval;
  map.cover_end = map.cover_start + cfg_.map_interval;

  MapAllocation contention;
  contention.flow = -1;
  contention.start = map.cover_start;
  contention.kind = AllocKind::kContention;
  map.allocations.push_back(contention);

  place_allocations(map);

  if (map_trace_) {
    (*map_trace_) << map.emitted_at.us() << ',' << map.cover_start.us()
                  << ",grants=[";
    bool first = true;
    for (const auto& a : map.allocations) {
      if (a.kind == AllocKind::kContention) continue;
      if (!first) (*map_trace_) << ' ';
      first = false;
      (*map_trace_) << '(' << a.flow << ',' << a.start.us() << ',' << a.bytes
                    << ',' << (a.kind == AllocKind::kUgs ? "ugs" : "unicast")
                    << ')';
    }
    (*map_trace_) << "]\n";
  }

  map_sink_(map);
  return map;
}

void DocsisCmts::place_allocations(MapMessage& map) {
  // Busy intervals inside the coverage window, kept sorted by start.
  std::vector<std::pair<SimTime, SimTime>> busy;
  auto insert_busy = [&](SimTime s, SimTime e) {
    auto pos = std::lower_bound(
        busy.begin(), busy.end(), s,
        [](const auto& iv, SimTime v) { return iv.first < v; });
    busy.insert(pos, {s, e});
  };
  // Earliest conflict-free start for a burst of `dur` at or after s.
  auto bump = [&](SimTime s, SimTime dur) {
    for (const auto& [bs, be] : busy) {
      if (bs < s + dur && s < be) s = be;
    }
    return s;
  };

  // Unsolicited grants are contractual bandwidth and go first.
  for (int flow : ugs_flows_) {
    MapAllocation a;
    a.flow = flow;
    a.kind = AllocKind::kUgs;
    a.bytes = cfg_.ugs_grant_bytes;
    a.start = map.cover_start + cfg_.ugs_offset;
    SimTime dur = cfg_.serialize(a.bytes);
    a.start = bump(a.start, dur);
    if (a.start + dur <= map.cover_end) {
      insert_busy(a.start, a.start + dur);
      map.allocations.push_back(a);
    }
  }

  // Just-in-time grants from admitted reports, earliest slot at or
  // after their not_before.
  for (auto it = bwr_intents_.begin(); it != bwr_intents_.end();) {
    if (it->eligible_at > map.emitted_at || it->not_before >= map.cover_end) {
      ++it;
      continue;
    }
    SimTime dur = cfg_.serialize(it->bytes);
    SimTime s = it->not_before;
    if (s < map.cover_start) s = map.cover_start;
    s = bump(s, dur);
    if (s + dur > map.cover_end) {
      ++it;  // window full; spills to the next MAP
      continue;
    }
    MapAllocation a;
    a.flow = it->flow;
    a.kind = AllocKind::kUnicast;
    a.bytes = it->bytes;
    a.start = s;
    insert_busy(s, s + dur);
    map.allocations.push_back(a);
    bwr_granted_bytes_ += it->bytes;
    it = bwr_intents_.erase(it);
  }

  // Requests, FIFO, first fit from the window start.
  for (auto it = req_intents_.begin(); it != req_intents_.end();) {
    if (it->eligible_at > map.emitted_at) {
      ++it;
      continue;
    }
    SimTime dur = cfg_.serialize(it->bytes);
    SimTime s = bump(map.cover_start, dur);
    if (s + dur > map.cover_end) {
      break;  // keep FIFO order for spilled requests
    }
    MapAllocation a;
    a.flow = it->flow;
    a.kind = AllocKind::kUnicast;
    a.bytes = it->bytes;
    a.start = s;
    insert_busy(s, s + dur);
    map.allocations.push_back(a);
    it = req_intents_.erase(it);
  }

  std::sort(map.allocations.begin(), map.allocations.end(),
            [](const MapAllocation& a, const MapAllocation& b) {
              if (a.start != b.start) return a.start < b.start;
              return a.kind < b.kind;
            });
}

}  // namespace bwrsim
