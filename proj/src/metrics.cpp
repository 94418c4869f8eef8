#include "bwrsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace bwrsim {

const char* segment_name(Segment s) {
  switch (s) {
    case Segment::kEndToEnd: return "e2e";
    case Segment::kDocsisOnly: return "docsis_only";
    default: return "lte_only";
  }
}

const char* filter_name(Filter f) {
  return f == Filter::kAll ? "all" : "harq_affected";
}

void MetricsCollector::finalize(Packet&& p) {
  LatencyRecord r;
  r.id = p.id;
  r.size_bytes = p.size_bytes;
  r.harq_affected = p.harq_affected;
  r.t_arrival_ue = p.t_arrival_ue;
  r.t_egress_enb = p.t_egress_enb;
  r.t_arrival_cm = p.t_arrival_cm;
  r.t_egress_cmts = p.t_egress_cmts;

  if (r.t_arrival_ue.us() < 0 || r.t_egress_enb.us() < 0 ||
      r.t_arrival_cm.us() < 0 || r.t_egress_cmts.us() < 0) {
    throw ModelError("metrics: incomplete record for packet " +
                     std::to_string(r.id));
  }
  if (!(r.t_arrival_ue <= r.t_egress_enb && r.t_egress_enb <= r.t_arrival_cm &&
        r.t_arrival_cm <= r.t_egress_cmts)) {
    throw ModelError("metrics: non-monotone timestamps for packet " +
                     std::to_string(r.id));
  }
  by_id_[r.id] = records_.size();
  egressed_bytes_ += r.size_bytes;
  records_.push_back(r);
}

std::vector<double> MetricsCollector::values_ms(Segment seg, Filter f) const {
  std::vector<double> v;
  v.reserve(records_.size());
  for (const auto& r : records_) {
    if (f == Filter::kHarqAffected && !r.harq_affected) continue;
    v.push_back(r.latency(seg).ms());
  }
  std::sort(v.begin(), v.end());
  return v;
}

SummaryStats MetricsCollector::summarize(Segment seg, Filter f) const {
  SummaryStats s;
  std::vector<double> v = values_ms(seg, f);
  s.count = v.size();
  if (v.empty()) return s;
  s.min_ms = v.front();
  s.max_ms = v.back();
  double sum = 0;
  for (double x : v) sum += x;
  s.avg_ms = sum / static_cast<double>(v.size());
  auto rank = [&](double q) {
    std::size_t idx = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(v.size())));
    if (idx == 0) idx = 1;
    return v[idx - 1];
  };
  s.p50_ms = rank(0.50);
  s.p95_ms = rank(0.95);
  s.p99_ms = rank(0.99);
  return s;
}

std::vector<std::pair<double, double>> MetricsCollector::cdf_points(
    Segment seg, Filter f) const {
  std::vector<double> v = values_ms(seg, f);
  if (v.empty()) throw ModelError("cdf_points: no records");
  std::vector<std::pair<double, double>> pts;
  double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double frac = static_cast<double>(i + 1) / n;
    if (!pts.empty() && pts.back().first == v[i]) {
      pts.back().second = frac;  // collapse equal latencies
    } else {
      pts.emplace_back(v[i], frac);
    }
  }
  return pts;
}

ConservationResult MetricsCollector::conservation_check() const {
  ConservationResult res;
  for (std::uint64_t id : generated_ids_) {
    if (by_id_.find(id) == by_id_.end()) {
      res.pass = false;
      res.detail = "packet " + std::to_string(id) + " never egressed";
      return res;
    }
  }
  if (generated_bytes_ != egressed_bytes_) {
    res.pass = false;
    res.detail = "generated " + std::to_string(generated_bytes_) +
                 " bytes, egressed " + std::to_string(egressed_bytes_);
  }
  return res;
}

}  // namespace bwrsim
