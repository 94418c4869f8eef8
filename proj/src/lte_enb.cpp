#include "bwrsim/lte_enb.hpp"

#include <algorithm>
#include <utility>

namespace bwrsim {

GrantRecord flush_report(const GrantHistory& hist, std::int64_t detection_sf,
                         std::int64_t window_sf,
                         const std::vector<std::pair<std::int64_t, GrantRecord>>&
                             held_older) {
  GrantRecord out;
  for (std::int64_t sf = detection_sf - window_sf; sf <= detection_sf; ++sf) {
    GrantRecord g = hist.lookup(sf);
    out.bytes += g.bytes;
    for (int i = 0; i < kNumLcg; ++i) out.per_lcg[i] += g.per_lcg[i];
  }
  for (const auto& [sf, g] : held_older) {
    if (sf < detection_sf - window_sf) {
      out.bytes += g.bytes;
      for (int i = 0; i < kNumLcg; ++i) out.per_lcg[i] += g.per_lcg[i];
    }
  }
  return out;
}

LteEnb::LteEnb(EnbConfig cfg, LteChannel& channel, std::vector<LteUe*> ues,
               DataSink data_sink, BwrSink bwr_sink)
    : cfg_(cfg),
      channel_(channel),
      data_sink_(std::move(data_sink)),
      bwr_sink_(std::move(bwr_sink)) {
  for (LteUe* ue : ues) {
    PerUe u;
    u.ue = ue;
    per_ue_.emplace(ue->id(), std::move(u));
  }
}

void LteEnb::on_subframe(std::int64_t t) {
  phase_channel(t);
  phase_ue_tx(t);
  phase_decode(t);
  phase_egress(t);
  phase_control(t);
  phase_schedule(t);
  phase_sr(t);
  phase_bwr(t);
}

std::int64_t LteEnb::backlog_estimate(int ue_id) const {
  const PerUe& u = per_ue_.at(ue_id);
  std::int64_t s = 0;
  for (auto b : u.reported_remaining) s += b;
  return s;
}

std::int64_t LteEnb::per_prb_bytes(int mcs) const { return channel_.tbs(mcs, 1); }

bool LteEnb::control_grant_outstanding(const PerUe& u) const {
  return u.ue->has_pending_control_grant() || u.sr_in_pipeline;
}

void LteEnb::phase_channel(std::int64_t t) {
  if (t % cfg_.channel_update_sf != 0) return;
  for (auto& [id, u] : per_ue_) channel_.sample_mcs(id);
}

void LteEnb::phase_ue_tx(std::int64_t t) {
  // Retransmissions scheduled for this air subframe re-occupy their
  // HARQ process.
  if (auto it = retx_air_.find(t); it != retx_air_.end()) {
    for (const auto& [ue_id, bytes] : it->second) {
      per_ue_.at(ue_id).harq.on_tx(t - cfg_.retx_spacing_sf, true);
    }
  }
  for (auto& [id, u] : per_ue_) {
    auto tb = u.ue->transmit_due(t, tick_time(t), cfg_.enb_id);
    if (!tb) continue;
    // Every block carries a buffer report; it takes effect one
    // turnaround later regardless of the block's CRC fate.
    ControlDue due;
    due.kind = ControlDue::Kind::kBsr;
    due.ue_id = id;
    due.bsr = tb->bsr;
    control_due_[t + cfg_.turnaround_sf].push_back(std::move(due));
    if (tb->is_control) continue;  // nothing on the data plane
    if (!tb->packets.empty()) u.harq.on_tx(t, false);
    pending_decode_[t + cfg_.decode_sf].push_back(std::move(*tb));
  }
}

void LteEnb::phase_decode(std::int64_t t) {
  auto it = pending_decode_.find(t);
  if (it == pending_decode_.end()) return;
  std::vector<UlTransportBlock> blocks = std::move(it->second);
  pending_decode_.erase(it);

  for (auto& tb : blocks) {
    PerUe& u = per_ue_.at(tb.ue_id);
    bool pass = tb.packets.empty() ? true : channel_.harq_pass(tb.is_retx);
    if (!tb.packets.empty()) u.harq.on_decode(tb.first_tx_subframe, pass);

    if (pass) {
      if (tb.is_retx) {
        auto held = std::find_if(
            u.awaiting_retx.begin(), u.awaiting_retx.end(),
            [&](const auto& p) { return p.first == tb.grant_subframe; });
        if (held != u.awaiting_retx.end()) u.awaiting_retx.erase(held);
      }
      if (!tb.packets.empty()) {
        if (u.hold_until.has_value()) {
          for (auto& p : tb.packets) p.harq_affected = true;
        }
        auto pos = std::upper_bound(
            u.rlc_queue.begin(), u.rlc_queue.end(), tb.grant_subframe,
            [](std::int64_t sf, const UlTransportBlock& q) {
              return sf < q.grant_subframe;
            });
        u.rlc_queue.insert(pos, std::move(tb));
      }
      continue;
    }

    // CRC failure: the process goes inactive until the synchronous
    // retransmission; in-order delivery holds everything behind it.
    std::int64_t retx_air_sf = tb.first_tx_subframe + cfg_.retx_spacing_sf;
    std::int64_t retx_decode_sf = retx_air_sf + cfg_.decode_sf;
    for (auto& p : tb.packets) p.harq_affected = true;
    if (!tb.is_retx) {
      u.awaiting_retx.emplace_back(tb.grant_subframe,
                                   u.history.lookup(tb.grant_subframe));
      failures_[t].insert(tb.ue_id);
    }
    // A failed retransmission keeps the data held and wastes the
    // grants already announced for it; no corrective report is sent.
    retx_air_[retx_air_sf].emplace_back(tb.ue_id, tb.granted_bytes);
    if (!u.hold_until || *u.hold_until < retx_decode_sf) {
      u.hold_until = retx_decode_sf;
    }
    tb.is_retx = true;
    tb.first_tx_subframe = retx_air_sf;
    pending_decode_[retx_decode_sf].push_back(std::move(tb));
  }

  // Drop stale bookkeeping.
  while (!failures_.empty() && failures_.begin()->first < t - 64) {
    failures_.erase(failures_.begin());
  }
  while (!retx_air_.empty() && retx_air_.begin()->first < t) {
    retx_air_.erase(retx_air_.begin());
  }
}

void LteEnb::phase_egress(std::int64_t t) {
  std::vector<Packet> out;
  for (auto& [id, u] : per_ue_) {
    if (u.hold_until) {
      if (t < *u.hold_until) continue;
      u.hold_until.reset();
    }
    for (auto& tb : u.rlc_queue) {
      for (auto& p : tb.packets) {
        p.t_egress_enb = tick_time(t);
        out.push_back(std::move(p));
      }
    }
    u.rlc_queue.clear();
  }
  if (!out.empty() && data_sink_) data_sink_(std::move(out));
}

void LteEnb::phase_control(std::int64_t t) {
  auto it = control_due_.find(t);
  if (it == control_due_.end()) return;
  std::vector<ControlDue> dues = std::move(it->second);
  control_due_.erase(it);

  for (auto& due : dues) {
    PerUe& u = per_ue_.at(due.ue_id);
    if (due.kind == ControlDue::Kind::kSr) {
      u.sr_in_pipeline = false;
      if (u.ue->has_pending_control_grant() || backlog_estimate(due.ue_id) > 0) {
        continue;  // scheduler is already feeding this UE
      }
      UeGrant g;
      g.grant_subframe = t;
      g.tx_subframe = t + cfg_.grant_to_tx_sf;
      g.bytes = cfg_.bsr_grant_bytes;
      g.is_control = true;
      u.ue->handle_grant(g);
      continue;
    }
    // Buffer report: reported bytes minus everything granted since the
    // report's dequeue horizon (grants whose transmission the report
    // could not have reflected).
    std::int64_t since_first =
        due.bsr.built_at_subframe - cfg_.grant_to_tx_sf + 1;
    std::int64_t granted = u.history.sum_bytes(since_first, t - 1);
    u.reported_remaining = due.bsr.bytes;
    for (int lcg = 0; lcg < kNumLcg && granted > 0; ++lcg) {
      std::int64_t d = std::min(granted, u.reported_remaining[lcg]);
      u.reported_remaining[lcg] -= d;
      granted -= d;
    }
  }
}

void LteEnb::phase_schedule(std::int64_t t) {
  std::int64_t air = t + cfg_.grant_to_tx_sf;
  std::int64_t budget = cfg_.n_prb;
  if (auto it = retx_air_.find(air); it != retx_air_.end()) {
    for (const auto& [ue_id, bytes] : it->second) {
      std::int64_t per_prb = per_prb_bytes(channel_.mcs(ue_id));
      budget -= (bytes + per_prb - 1) / per_prb;
    }
  }
  if (budget <= 0) return;

  std::vector<int> active;
  for (auto& [id, u] : per_ue_) {
    if (backlog_estimate(id) > 0) active.push_back(id);
  }
  if (active.empty()) return;

  std::size_t n = active.size();
  std::size_t first = static_cast<std::size_t>(t % static_cast<std::int64_t>(n));
  std::int64_t base = budget / static_cast<std::int64_t>(n);
  std::int64_t rem = budget % static_cast<std::int64_t>(n);

  for (std::size_t i = 0; i < n; ++i) {
    int ue_id = active[(first + i) % n];
    PerUe& u = per_ue_.at(ue_id);
    std::int64_t prbs = base + (static_cast<std::int64_t>(i) < rem ? 1 : 0);
    if (prbs <= 0) continue;
    std::int64_t cap = channel_.tbs(channel_.mcs(ue_id), static_cast<int>(prbs));
    std::int64_t bytes = std::min(backlog_estimate(ue_id), cap);
    if (bytes <= 0) continue;

    GrantRecord rec;
    rec.bytes = bytes;
    std::int64_t left = bytes;
    for (int lcg = 0; lcg < kNumLcg && left > 0; ++lcg) {
      std::int64_t d = std::min(left, u.reported_remaining[lcg]);
      rec.per_lcg[lcg] += d;
      u.reported_remaining[lcg] -= d;
      left -= d;
    }
    rec.per_lcg[0] += left;  // keeps the per-LCG sum equal to bytes
    u.history.put(t, rec);

    UeGrant g;
    g.grant_subframe = t;
    g.tx_subframe = air;
    g.bytes = bytes;
    g.is_control = false;
    u.ue->handle_grant(g);
  }
}

void LteEnb::phase_sr(std::int64_t t) {
  if (t % cfg_.sr_period_sf != 0) return;
  for (auto& [id, u] : per_ue_) {
    if (!u.ue->handle_sr_opportunity()) continue;
    if (control_grant_outstanding(u)) continue;
    ControlDue due;
    due.kind = ControlDue::Kind::kSr;
    due.ue_id = id;
    control_due_[t + cfg_.turnaround_sf].push_back(std::move(due));
    u.sr_in_pipeline = true;
  }
}

std::vector<BwrMessage> LteEnb::bwr_messages_for(std::int64_t sf) const {
  std::vector<BwrMessage> out;
  const std::set<int>* flush_ues = nullptr;
  if (cfg_.mode == BwrMode::kFlush) {
    if (auto it = failures_.find(sf); it != failures_.end()) {
      flush_ues = &it->second;
    }
  }

  BwrMessage normal;
  normal.enb_id = static_cast<std::uint32_t>(cfg_.enb_id);
  normal.grant_subframe = static_cast<std::int32_t>(sf);
  normal.expected_arrival =
      tick_time(sf + cfg_.grant_to_tx_sf + cfg_.decode_sf);
  bool any_normal_ue = false;
  for (const auto& [id, u] : per_ue_) {
    if (flush_ues && flush_ues->count(id)) continue;
    any_normal_ue = true;
    GrantRecord g = u.history.lookup(sf);
    normal.total_bytes += g.bytes;
    for (int i = 0; i < kNumLcg; ++i) normal.per_lcg_bytes[i] += g.per_lcg[i];
  }

  if (flush_ues && !flush_ues->empty()) {
    BwrMessage flush;
    flush.enb_id = static_cast<std::uint32_t>(cfg_.enb_id);
    flush.grant_subframe = static_cast<std::int32_t>(sf);
    flush.expected_arrival = tick_time(sf + cfg_.retx_spacing_sf);
    flush.flush_included = true;
    for (int id : *flush_ues) {
      const PerUe& u = per_ue_.at(id);
      std::vector<std::pair<std::int64_t, GrantRecord>> held;
      for (const auto& tb : u.rlc_queue) {
        held.emplace_back(tb.grant_subframe, u.history.lookup(tb.grant_subframe));
      }
      for (const auto& p : u.awaiting_retx) held.push_back(p);
      GrantRecord r = flush_report(u.history, sf, cfg_.retx_spacing_sf, held);
      flush.total_bytes += r.bytes;
      for (int i = 0; i < kNumLcg; ++i) flush.per_lcg_bytes[i] += r.per_lcg[i];
    }
    out.push_back(flush);
    if (any_normal_ue && normal.total_bytes > 0) out.push_back(normal);
  } else {
    out.push_back(normal);
  }
  return out;
}

void LteEnb::phase_bwr(std::int64_t t) {
  if (cfg_.mode == BwrMode::kBaseline) return;
  if (t % cfg_.bwr_period_sf != 0) return;
  std::vector<BwrMessage> flushes;
  std::vector<BwrMessage> normals;
  for (std::int64_t sf = t - cfg_.bwr_period_sf + 1; sf <= t; ++sf) {
    if (sf < 0) continue;
    for (auto& m : bwr_messages_for(sf)) {
      (m.flush_included ? flushes : normals).push_back(m);
    }
  }
  // Flush reports are the time-critical ones; they go upstream first.
  for (const auto& m : flushes) {
    ++bwr_emitted_;
    if (bwr_sink_) bwr_sink_(m);
  }
  for (const auto& m : normals) {
    ++bwr_emitted_;
    if (bwr_sink_) bwr_sink_(m);
  }
}

}  // namespace bwrsim
