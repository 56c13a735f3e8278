#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "xtrapulp/bsp.hpp"
#include "xtrapulp/graph.hpp"
#include "xtrapulp/metrics.hpp"
#include "xtrapulp/random.hpp"

namespace xtrapulp {

enum class InitMode { BfsLp, Random, Block };

struct Config {
  part_t parts = 2;
  int tasks = 1;
  double vert_imbalance = 0.10;  // Rat_v
  double edge_imbalance = 0.10;  // Rat_e
  double x = 1.0;                // multiplier end point
  double y = 0.25;               // multiplier start point
  int outer_iters = 3;
  int balance_iters = 5;
  int refine_iters = 10;
  std::uint64_t seed = 0;
  DistKind distribution = DistKind::Block;
  InitMode init = InitMode::BfsLp;
  bool sequential = true;

  /// Iterations per stage: outer * (balance + refine).
  int total_iters() const { return outer_iters * (balance_iters + refine_iters); }

  /// Throws ConfigError on p < 1, T < 1, non-positive iteration counts,
  /// negative ratios, or Y outside (0, X].
  void validate() const;
};

/// nprocs * ((X - Y) * iter_tot / I_tot + Y). Throws ConfigError when
/// I_tot == 0 or nprocs < 1.
double compute_mult(int iter_tot, int total_iters, int nprocs, double x, double y);

/// Balance weight max(target / estimate - 1, 0). Estimates below one vertex
/// are clamped to 1 so an empty part gets a large finite weight.
double balance_weight(double target, double estimate);

/// One task's copy of the per-part bookkeeping. `size_*` is replicated on
/// every task (refreshed by allreduce); `delta_*` and `weight_*` are local.
struct PartLedger {
  std::vector<std::int64_t> size_v, size_e, size_c;
  std::vector<std::int64_t> delta_v, delta_e, delta_c;
  std::vector<double> weight_v, weight_e, weight_c;
  double max_v = 0.0, max_e = 0.0, max_c = 0.0;
  double target_v = 0.0;  // Imb_v
  double target_e = 0.0;  // Imb_e

  explicit PartLedger(part_t num_parts = 0);
  part_t num_parts() const { return static_cast<part_t>(size_v.size()); }
  void reset_deltas();
};

enum class Phase { Init, VertBalance, VertRefine, EdgeBalance, EdgeRefine };
std::string_view phase_name(Phase phase);

class Partitioner;

/// Reported after every superstep once ghosts have been updated.
struct SuperstepEvent {
  Phase phase;
  int iteration;           // within the phase call
  int iter_tot;            // stage-wide counter after this superstep
  std::uint64_t moves;     // owned vertices that changed part (all tasks)
  std::uint64_t pairs_sent;
  bool ledger_valid;       // false during initialization
};

using SuperstepObserver = std::function<void(const Partitioner&, const SuperstepEvent&)>;

/// Result of a full run.
struct PartitionResult {
  std::vector<part_t> parts;  // global array indexed by vertex ID
  std::uint64_t supersteps = 0;
  std::uint64_t moves = 0;
};

/// Multi-constraint, multi-objective label propagation on simulated tasks.
/// Tasks hold part labels for their owned and ghost vertices and only ever
/// decide for owned ones; ghosts are refreshed by exchange_updates at the
/// end of every superstep.
class Partitioner {
 public:
  Partitioner(std::span<const LocalGraph> graphs, const Config& config);

  const Config& config() const { return config_; }
  int num_tasks() const { return static_cast<int>(graphs_.size()); }
  const LocalGraph& graph(int task) const { return graphs_[task]; }
  std::span<const part_t> parts(int task) const { return tasks_[task].parts; }
  const PartLedger& ledger(int task) const { return tasks_[task].ledger; }
  int iter_tot() const { return iter_tot_; }
  Runtime& runtime() { return runtime_; }

  void set_observer(SuperstepObserver observer) { observer_ = std::move(observer); }

  /// Initialization per config().init.
  void init_parts();
  void init_bfs();
  void init_random();
  void init_block();

  /// Seeds owned and ghost labels from a global array, then recounts sizes.
  void assign(std::span<const part_t> global_parts);

  void vert_balance(int iterations);
  void vert_refine(int iterations);
  void edge_balance(int iterations);
  void edge_refine(int iterations);

  /// Init, then outer x (vert_balance, vert_refine), reset iter_tot, then
  /// outer x (edge_balance, edge_refine).
  void run();

  /// Recomputes S_v/S_e/S_c from the current labels (allreduce of local
  /// counts) and installs them in every task's ledger.
  void recount_sizes();

  std::vector<part_t> gather() const;

  std::uint64_t total_moves() const { return total_moves_; }

 private:
  enum class Pass { Balance, Refine, EdgeBalance, EdgeRefine };

  struct TaskState {
    std::vector<part_t> parts;
    PartLedger ledger;
    Rng rng;
    UpdateQueue queue;
    // Old label of every owned vertex moved in the current superstep.
    std::vector<part_t> moved_from;
    std::vector<lid_t> moved;
    // Scratch for neighborhood scoring.
    std::vector<double> score;
    std::vector<std::int64_t> raw;
    std::vector<part_t> touched;
  };

  void local_pass(int task, Pass pass, double mult);
  void finish_superstep(Phase phase, int iteration, bool fold_ledger);
  void refresh_maxima(PartLedger& ledger) const;
  void iterate(Phase phase, Pass pass, int iterations);
  void publish_all_owned();

  std::span<const LocalGraph> graphs_;
  Config config_;
  Runtime runtime_;
  std::vector<TaskState> tasks_;
  int iter_tot_ = 0;
  std::uint64_t total_moves_ = 0;
  std::uint64_t last_moves_ = 0;
  // Edge-stage bias schedule.
  double r_e_ = 0.0;
  double r_c_ = 0.0;
  bool edge_target_met_ = false;
  SuperstepObserver observer_;
};

/// Distributes g per config and runs the full algorithm.
PartitionResult xtrapulp(const GlobalGraph& g, const Config& config,
                         SuperstepObserver observer = {});

}  // namespace xtrapulp
