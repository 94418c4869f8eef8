#include "bwrsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bwrsim {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (...) {
    throw ConfigError("bad integer value for " + key + ": '" + v + "'");
  }
}

// Millisecond values must land on the integer-microsecond clock.
std::int64_t parse_ms_to_us(const std::string& key, const std::string& v) {
  double ms = parse_double(key, v);
  double us = ms * 1000.0;
  double rounded = std::round(us);
  if (std::abs(us - rounded) > 1e-6 || rounded < 0) {
    throw ConfigError(key + " must be a non-negative whole number of microseconds");
  }
  return static_cast<std::int64_t>(rounded);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean value for " + key + ": '" + v + "'");
}

}  // namespace

const char* Scenario::mode_name(BwrMode m) {
  switch (m) {
    case BwrMode::kBaseline: return "baseline";
    case BwrMode::kNoFlush: return "bwr_no_flush";
    default: return "bwr_flush";
  }
}

BwrMode Scenario::parse_mode(const std::string& s) {
  if (s == "baseline") return BwrMode::kBaseline;
  if (s == "bwr_no_flush") return BwrMode::kNoFlush;
  if (s == "bwr_flush") return BwrMode::kFlush;
  throw ConfigError("run.mode must be baseline|bwr_no_flush|bwr_flush, got '" +
                    s + "'");
}

void Scenario::validate() const {
  if (duration_ms < 0) throw ConfigError("run.duration_ms must be >= 0");
  if (drain_ms < 0) throw ConfigError("run.drain_ms must be >= 0");
  if (n_enb < 0 || n_ue < 0) throw ConfigError("lte.n_enb/n_ue must be >= 0");
  if (bandwidth_prb <= 0 || bandwidth_prb > kMaxPrb) {
    throw ConfigError("lte.bandwidth_prb must be 1..50");
  }
  if (bler < 0.0 || bler > 1.0) throw ConfigError("channel.bler must be in [0,1]");
  if (retx_bler < 0.0 || retx_bler > 1.0) {
    throw ConfigError("channel.retx_bler must be in [0,1]");
  }
  if (mcs_lo > mcs_hi) throw ConfigError("channel.mcs_lo must be <= mcs_hi");
  if (mcs_sigma < 0.0) throw ConfigError("channel.mcs_sigma must be >= 0");
  if (sr_period_ms <= 0 || bsr_period_ms <= 0 || decode_ms <= 0) {
    throw ConfigError("lte periods must be > 0");
  }
  if (sr_offset_us < 0 || sr_offset_us >= 1000) {
    throw ConfigError("lte.sr_offset_ms must be in [0, 1) ms");
  }
  if (docsis.map_interval.us() <= 0) {
    throw ConfigError("docsis.map_interval_ms must be > 0");
  }
  if (docsis.upstream_mbps <= 0) {
    throw ConfigError("docsis.upstream_mbps must be > 0");
  }
  if (docsis.p_collide < 0.0 || docsis.p_collide > 1.0) {
    throw ConfigError("docsis.contention must be off or a probability in [0,1]");
  }
  if (bwr_period_ms <= 0) throw ConfigError("docsis.bwr_period_ms must be > 0");
  if (docsis.ugs_period.us() <= 0) {
    throw ConfigError("docsis.ugs_period_ms must be > 0");
  }
  traffic.validate();
}

ChannelConfig Scenario::channel_config() const {
  ChannelConfig c;
  c.update_period = SimTime::from_ms(channel_update_ms);
  c.mcs_mean = mcs_mean;
  c.mcs_lo = mcs_lo;
  c.mcs_hi = mcs_hi;
  c.mcs_sigma = mcs_sigma;
  c.harq_on = harq_on;
  c.bler = bler;
  c.retx_bler = retx_bler;
  if (!tbs_table_path.empty()) {
    std::ifstream in(tbs_table_path);
    if (!in) throw ConfigError("cannot open channel.tbs_table: " + tbs_table_path);
    std::string line;
    std::getline(in, line);  // header: mcs,bytes_per_prb
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty()) continue;
      std::size_t comma = line.find(',');
      if (comma == std::string::npos) {
        throw ConfigError("bad tbs_table line: " + line);
      }
      int mcs = static_cast<int>(parse_int("tbs_table.mcs", trim(line.substr(0, comma))));
      std::int64_t bpp =
          parse_int("tbs_table.bytes_per_prb", trim(line.substr(comma + 1)));
      c.tbs_bytes_per_prb[mcs] = bpp;
    }
  }
  return c;
}

EnbConfig Scenario::enb_config(int enb_id) const {
  EnbConfig e;
  e.enb_id = enb_id;
  e.turnaround_sf = turnaround_ms;
  e.grant_to_tx_sf = grant_to_tx_ms;
  e.decode_sf = decode_ms;
  e.retx_spacing_sf = harq_spacing_ms;
  e.n_prb = bandwidth_prb;
  e.bsr_grant_bytes = bsr_grant_bytes;
  e.sr_period_sf = sr_period_ms;
  e.channel_update_sf = channel_update_ms;
  e.grid_offset_us = sr_offset_us;
  e.mode = mode;
  e.bwr_period_sf = bwr_period_ms;
  return e;
}

UeConfig Scenario::ue_config() const {
  UeConfig u;
  u.sr_period_sf = sr_period_ms;
  u.bsr_period_sf = bsr_period_ms;
  return u;
}

void scenario_apply(Scenario& sc, const std::string& key,
                    const std::string& value) {
  const std::string& k = key;
  const std::string v = trim(value);

  if (k == "run.duration_ms") sc.duration_ms = parse_int(k, v);
  else if (k == "run.seed") sc.seed = static_cast<std::uint64_t>(parse_int(k, v));
  else if (k == "run.mode") sc.mode = Scenario::parse_mode(v);
  else if (k == "run.drain_ms") sc.drain_ms = parse_int(k, v);
  else if (k == "run.harq") sc.harq_on = parse_bool(k, v);

  else if (k == "traffic.kind") {
    if (v == "cbr") sc.traffic.kind = TrafficKind::kCbr;
    else if (v == "onoff") sc.traffic.kind = TrafficKind::kOnOff;
    else throw ConfigError("traffic.kind must be cbr|onoff, got '" + v + "'");
  } else if (k == "traffic.packet_size") sc.traffic.packet_size = parse_int(k, v);
  else if (k == "traffic.inter_arrival_ms")
    sc.traffic.inter_arrival = SimTime(parse_ms_to_us(k, v));
  else if (k == "traffic.phase_ms") sc.traffic.phase = SimTime(parse_ms_to_us(k, v));
  else if (k == "traffic.on_ms") sc.traffic.on_duration = SimTime(parse_ms_to_us(k, v));
  else if (k == "traffic.off_ms") sc.traffic.off_duration = SimTime(parse_ms_to_us(k, v));
  else if (k == "traffic.rate_in_on") sc.traffic.rate_in_on = parse_double(k, v);
  else if (k == "traffic.lcg") sc.traffic.lcg = static_cast<int>(parse_int(k, v));
  else if (k == "traffic.inject") {
    if (v == "ue") sc.traffic.inject = InjectPoint::kUe;
    else if (v == "cm") sc.traffic.inject = InjectPoint::kCm;
    else throw ConfigError("traffic.inject must be ue|cm, got '" + v + "'");
  }

  else if (k == "lte.n_enb") sc.n_enb = static_cast<int>(parse_int(k, v));
  else if (k == "lte.n_ue") sc.n_ue = static_cast<int>(parse_int(k, v));
  else if (k == "lte.sr_period_ms") sc.sr_period_ms = parse_int(k, v);
  else if (k == "lte.sr_offset_ms") sc.sr_offset_us = parse_ms_to_us(k, v);
  else if (k == "lte.bsr_period_ms") sc.bsr_period_ms = parse_int(k, v);
  else if (k == "lte.decode_ms") sc.decode_ms = parse_int(k, v);
  else if (k == "lte.turnaround_ms") sc.turnaround_ms = parse_int(k, v);
  else if (k == "lte.grant_to_tx_ms") sc.grant_to_tx_ms = parse_int(k, v);
  else if (k == "lte.harq_spacing_ms") sc.harq_spacing_ms = parse_int(k, v);
  else if (k == "lte.bandwidth_prb") sc.bandwidth_prb = static_cast<int>(parse_int(k, v));
  else if (k == "lte.bsr_grant_bytes") sc.bsr_grant_bytes = parse_int(k, v);

  else if (k == "channel.bler") sc.bler = parse_double(k, v);
  else if (k == "channel.retx_bler") sc.retx_bler = parse_double(k, v);
  else if (k == "channel.mcs_mean") sc.mcs_mean = parse_double(k, v);
  else if (k == "channel.mcs_sigma") sc.mcs_sigma = parse_double(k, v);
  else if (k == "channel.mcs_lo") sc.mcs_lo = static_cast<int>(parse_int(k, v));
  else if (k == "channel.mcs_hi") sc.mcs_hi = static_cast<int>(parse_int(k, v));
  else if (k == "channel.update_ms") sc.channel_update_ms = parse_int(k, v);
  else if (k == "channel.tbs_table") sc.tbs_table_path = v;

  else if (k == "docsis.map_interval_ms")
    sc.docsis.map_interval = SimTime(parse_ms_to_us(k, v));
  else if (k == "docsis.cm_proc_ms") sc.docsis.cm_proc = SimTime(parse_ms_to_us(k, v));
  else if (k == "docsis.cmts_proc_ms")
    sc.docsis.cmts_proc = SimTime(parse_ms_to_us(k, v));
  else if (k == "docsis.cm_overhead_ms")
    sc.docsis.cm_overhead = SimTime(parse_ms_to_us(k, v));
  else if (k == "docsis.upstream_mbps") sc.docsis.upstream_mbps = parse_int(k, v);
  else if (k == "docsis.bwr_transport") {
    if (v == "ugs") sc.docsis.bwr_over_rtps = false;
    else if (v == "rtps") sc.docsis.bwr_over_rtps = true;
    else throw ConfigError("docsis.bwr_transport must be ugs|rtps, got '" + v + "'");
  } else if (k == "docsis.ugs_period_ms")
    sc.docsis.ugs_period = SimTime(parse_ms_to_us(k, v));
  else if (k == "docsis.ugs_offset_ms")
    sc.docsis.ugs_offset = SimTime(parse_ms_to_us(k, v));
  else if (k == "docsis.ugs_grant_bytes") sc.docsis.ugs_grant_bytes = parse_int(k, v);
  else if (k == "docsis.bwr_period_ms") sc.bwr_period_ms = parse_int(k, v);
  else if (k == "docsis.bwr_lead_ms") sc.docsis.bwr_lead = SimTime(parse_ms_to_us(k, v));
  else if (k == "docsis.contention") {
    if (v == "off") sc.docsis.p_collide = 0.0;
    else sc.docsis.p_collide = parse_double(k, v);
  } else if (k == "docsis.backoff_cap_exp")
    sc.docsis.backoff_cap_exp = static_cast<int>(parse_int(k, v));

  else throw ConfigError("unknown config key: " + k);
}

Scenario scenario_from_text(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    scenario_apply(sc, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return sc;
}

Scenario scenario_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_text(ss.str());
}

}  // namespace bwrsim
