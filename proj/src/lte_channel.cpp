#include "bwrsim/lte_channel.hpp"

#include <string>

namespace bwrsim {

std::int64_t tbs_bytes(const ChannelConfig& cfg, int mcs, int n_prb) {
  if (n_prb <= 0 || n_prb > kMaxPrb) {
    throw ModelError("tbs_bytes: n_prb out of range: " + std::to_string(n_prb));
  }
  if (!cfg.tbs_bytes_per_prb.empty()) {
    auto it = cfg.tbs_bytes_per_prb.find(mcs);
    if (it == cfg.tbs_bytes_per_prb.end()) {
      throw ModelError("tbs_bytes: mcs " + std::to_string(mcs) +
                       " missing from lookup table");
    }
    return it->second * n_prb;
  }
  return static_cast<std::int64_t>(n_prb) * mcs * 6;
}

}  // namespace bwrsim
