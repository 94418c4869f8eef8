#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bwrsim/docsis.hpp"
#include "bwrsim/lte_channel.hpp"
#include "bwrsim/lte_enb.hpp"
#include "bwrsim/traffic.hpp"

namespace bwrsim {

// Full configuration of one run. Defaults reproduce the reference
// uplink scenario: 2 s, 1 eNB / 1 UE, 200-byte packets every 1 ms,
// FDD 10 MHz (50 PRB), round-robin scheduling, reports over UGS every
// 2 ms. Every deviation needs an explicit key.
struct Scenario {
  std::int64_t duration_ms = 2000;
  std::uint64_t seed = 1;
  BwrMode mode = BwrMode::kBaseline;
  std::int64_t drain_ms = 100;  // traffic stops this long before the end

  int n_enb = 1;
  int n_ue = 1;  // per eNB

  TrafficSpec traffic;

  // lte
  std::int64_t sr_period_ms = 5;
  std::int64_t sr_offset_us = 500;   // sub-subframe offset of the LTE grid
  std::int64_t bsr_period_ms = 10;
  std::int64_t decode_ms = 2;
  std::int64_t turnaround_ms = 4;
  std::int64_t grant_to_tx_ms = 4;
  std::int64_t harq_spacing_ms = 8;
  int bandwidth_prb = 50;
  std::int64_t bsr_grant_bytes = 8;

  // channel
  bool harq_on = false;
  double bler = 0.1;
  double retx_bler = 0.0;
  double mcs_mean = 22.0;
  double mcs_sigma = 2.0;
  int mcs_lo = 18;
  int mcs_hi = 26;
  std::int64_t channel_update_ms = 10;
  std::string tbs_table_path;

  std::int64_t bwr_period_ms = 2;  // eNB report build cadence

  DocsisConfig docsis;

  void validate() const;

  ChannelConfig channel_config() const;
  EnbConfig enb_config(int enb_id) const;
  UeConfig ue_config() const;

  static const char* mode_name(BwrMode m);
  static BwrMode parse_mode(const std::string& s);
};

// Flat-sectioned config text: one `section.key = value` per line,
// '#' comments, blank lines ignored. Unknown keys are errors.
Scenario scenario_from_file(const std::string& path);
void scenario_apply(Scenario& sc, const std::string& key,
                    const std::string& value);
Scenario scenario_from_text(const std::string& text);

}  // namespace bwrsim
