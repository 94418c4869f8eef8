#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bwrsim/rng.hpp"
#include "bwrsim/sim_time.hpp"

namespace bwrsim {

constexpr int kMaxPrb = 50;  // 10 MHz uplink

struct ChannelConfig {
  SimTime update_period = SimTime::from_ms(10);
  double mcs_mean = 22.0;
  int mcs_lo = 18;
  int mcs_hi = 26;
  double mcs_sigma = 2.0;
  bool harq_on = false;
  double bler = 0.1;        // first-transmission CRC failure probability
  double retx_bler = 0.0;   // retransmissions pass by default
  // Optional lookup: bytes per PRB indexed by MCS; empty -> mcs*6.
  std::map<int, std::int64_t> tbs_bytes_per_prb;
};

// Transport block capacity for one subframe. Default mapping is
// n_prb * mcs * 6 bytes, monotone in both arguments; a lookup table
// (mcs -> bytes per PRB) can replace it.
std::int64_t tbs_bytes(const ChannelConfig& cfg, int mcs, int n_prb);

// Abstracted PHY: a slow-fading MCS process held constant between
// 10 ms updates, plus per-transport-block CRC outcome draws.
class LteChannel {
 public:
  LteChannel(ChannelConfig cfg, RngStream& mcs_stream, RngStream& bler_stream)
      : cfg_(cfg), mcs_rng_(mcs_stream), bler_rng_(bler_stream) {}

  // Draw a fresh MCS for `ue`; call once per UE per update boundary.
  int sample_mcs(int ue) {
    double x = mcs_rng_.normal_clipped(cfg_.mcs_mean, cfg_.mcs_sigma,
                                       cfg_.mcs_lo, cfg_.mcs_hi);
    int mcs = static_cast<int>(x + 0.5);
    if (mcs < cfg_.mcs_lo) mcs = cfg_.mcs_lo;
    if (mcs > cfg_.mcs_hi) mcs = cfg_.mcs_hi;
    current_mcs_[ue] = mcs;
    return mcs;
  }

  int mcs(int ue) const {
    auto it = current_mcs_.find(ue);
    return it == current_mcs_.end() ? static_cast<int>(cfg_.mcs_mean)
                                    : it->second;
  }

  // CRC outcome for one transport block.
  bool harq_pass(bool is_retx) {
    if (!cfg_.harq_on) return true;
    double p = is_retx ? cfg_.retx_bler : cfg_.bler;
    return !bler_rng_.bernoulli(p);
  }

  std::int64_t tbs(int mcs, int n_prb) const { return tbs_bytes(cfg_, mcs, n_prb); }

  const ChannelConfig& config() const { return cfg_; }

 private:
  ChannelConfig cfg_;
  RngStream& mcs_rng_;
  RngStream& bler_rng_;
  std::map<int, int> current_mcs_;
};

}  // namespace bwrsim
