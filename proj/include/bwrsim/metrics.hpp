#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bwrsim/packet.hpp"
#include "bwrsim/sim_time.hpp"

namespace bwrsim {

enum class Segment { kEndToEnd, kDocsisOnly, kLteOnly };
enum class Filter { kAll, kHarqAffected };

// Completed per-packet lifecycle. Timestamps are validated to be
// present and non-decreasing in pipeline order when the record is
// finalized.
struct LatencyRecord {
  std::uint64_t id = 0;
  std::int64_t size_bytes = 0;
  bool harq_affected = false;
  SimTime t_arrival_ue{0};
  SimTime t_egress_enb{0};
  SimTime t_arrival_cm{0};
  SimTime t_egress_cmts{0};

  SimTime latency(Segment s) const {
    switch (s) {
      case Segment::kEndToEnd: return t_egress_cmts - t_arrival_ue;
      case Segment::kDocsisOnly: return t_egress_cmts - t_arrival_cm;
      default: return t_egress_enb - t_arrival_ue;
    }
  }
};

struct SummaryStats {
  std::size_t count = 0;
  double min_ms = 0, avg_ms = 0, max_ms = 0;
  double p50_ms = 0, p95_ms = 0, p99_ms = 0;
};

struct ConservationResult {
  bool pass = true;
  std::string detail;
};

const char* segment_name(Segment s);
const char* filter_name(Filter f);

// Append-only collection during the run, read-only aggregation after.
class MetricsCollector {
 public:
  void on_generated(const Packet& p) {
    generated_bytes_ += p.size_bytes;
    generated_ids_.push_back(p.id);
  }

  // Called at CMTS egress; the last timestamp must already be set.
  void finalize(Packet&& p);

  // min/avg/max and nearest-rank percentiles, in milliseconds.
  SummaryStats summarize(Segment seg, Filter f) const;

  // Empirical distribution: (latency_ms, cumulative fraction) pairs,
  // non-decreasing in both coordinates, final fraction 1.0.
  std::vector<std::pair<double, double>> cdf_points(Segment seg,
                                                    Filter f = Filter::kAll) const;

  // Every generated packet has a complete record and byte totals
  // match. Valid once traffic has drained.
  ConservationResult conservation_check() const;

  const std::vector<LatencyRecord>& records() const { return records_; }
  std::int64_t generated_bytes() const { return generated_bytes_; }
  std::int64_t egressed_bytes() const { return egressed_bytes_; }

 private:
  std::vector<double> values_ms(Segment seg, Filter f) const;

  std::vector<LatencyRecord> records_;
  std::vector<std::uint64_t> generated_ids_;
  std::map<std::uint64_t, std::size_t> by_id_;
  std::int64_t generated_bytes_ = 0;
  std::int64_t egressed_bytes_ = 0;
};

}  // namespace bwrsim
