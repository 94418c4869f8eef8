#pragma once

#include <memory>
#include <ostream>
#include <vector>

#include "bwrsim/docsis_cm.hpp"
#include "bwrsim/docsis_cmts.hpp"
#include "bwrsim/event_queue.hpp"
#include "bwrsim/lte_channel.hpp"
#include "bwrsim/lte_enb.hpp"
#include "bwrsim/lte_ue.hpp"
#include "bwrsim/metrics.hpp"
#include "bwrsim/rng.hpp"
#include "bwrsim/scenario.hpp"
#include "bwrsim/traffic.hpp"

namespace bwrsim {

struct RunResult {
  Scenario scenario;
  MetricsCollector metrics;
  ConservationResult conservation;
  std::uint64_t events_executed = 0;
  std::uint64_t lte_data_reqs = 0;   // contention requests on the data flow
  std::uint64_t collisions = 0;
  std::uint64_t bwr_messages = 0;
  std::uint64_t bwr_dropped_late = 0;
  std::int64_t cm_padding_bytes = 0;
};

// One seeded single-threaded run. Owns the event queue and every
// module; nothing is shared between runs, so independent runs may
// execute concurrently.
class Simulation {
 public:
  explicit Simulation(Scenario sc);

  void set_event_trace(std::ostream* os) { queue_.set_trace(os); }
  void set_map_trace(std::ostream* os) { cmts_->set_map_trace(os); }

  RunResult run();

  // Wiring access for integration tests.
  EventQueue& queue() { return queue_; }
  DocsisCm& cm() { return *cm_; }
  DocsisCmts& cmts() { return *cmts_; }
  LteEnb& enb(std::size_t i) { return *enbs_.at(i); }
  LteUe& ue(std::size_t i) { return *ues_.at(i); }
  MetricsCollector& metrics() { return metrics_; }

 private:
  void deliver(std::size_t gen_idx, Packet&& p);
  void schedule_arrival(std::size_t gen_idx);
  void schedule_tick(std::int64_t sf);
  void schedule_map(std::int64_t k);
  void schedule_contention(std::int64_t k);
  void schedule_bwr_poll(std::int64_t k);

  Scenario cfg_;
  EventQueue queue_;
  RngRegistry rng_;
  MetricsCollector metrics_;

  std::unique_ptr<LteChannel> channel_;
  std::vector<std::unique_ptr<LteUe>> ues_;
  std::vector<std::unique_ptr<LteEnb>> enbs_;
  std::unique_ptr<DocsisCmts> cmts_;
  std::unique_ptr<DocsisCm> cm_;
  std::vector<TrafficGenerator> generators_;
  std::vector<std::size_t> generator_ue_;  // generator -> UE index

  SimTime duration_{0};
  SimTime traffic_horizon_{0};
};

RunResult run_scenario(const Scenario& sc, std::ostream* event_trace = nullptr,
                       std::ostream* map_trace = nullptr);

}  // namespace bwrsim
