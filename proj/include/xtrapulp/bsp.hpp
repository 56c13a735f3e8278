#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xtrapulp/graph.hpp"

namespace xtrapulp {

struct UpdatePair {
  vid_t vertex;
  part_t part;

  friend bool operator==(const UpdatePair&, const UpdatePair&) = default;
  friend auto operator<=>(const UpdatePair&, const UpdatePair&) = default;
};

using UpdateQueue = std::vector<UpdatePair>;

/// Merges per-worker queues into one task queue, in worker-index order.
UpdateQueue merge_worker_queues(std::span<const UpdateQueue> worker_queues);

/// Send/receive bookkeeping for one task's side of an update exchange.
/// Counts and offsets are in (vertex, part) pairs.
struct ExchangeBuffers {
  std::vector<std::uint64_t> send_counts;
  std::vector<std::uint64_t> send_offsets;
  std::vector<UpdatePair> send_buffer;
  std::vector<std::uint64_t> recv_counts;
  std::vector<std::uint64_t> recv_offsets;
};

/// Task-local half of the exchange: for every queued (v, w), one copy per
/// distinct neighboring task of v. Throws ProtocolError if v is not owned.
ExchangeBuffers pack_updates(const LocalGraph& lg, std::span<const UpdatePair> queue);

/// Applies received pairs to ghost slots. Throws ProtocolError if a pair
/// names a vertex that is not a ghost of this task.
void apply_updates(const LocalGraph& lg, std::span<const UpdatePair> received,
                   std::span<part_t> parts);

/// Message totals for one exchange, for tracing and the no-phantom check.
struct ExchangeStats {
  std::uint64_t superstep = 0;
  std::string label;
  std::vector<std::uint64_t> pairs_sent;  // per task
  std::uint64_t total_pairs = 0;
};

/// T logical tasks in one process. Local compute of a superstep runs either
/// round-robin on the calling thread or one thread per task; collectives are
/// rendezvous points executed by the runtime between supersteps. Both modes
/// give identical results because tasks touch only their own state while
/// computing.
class Runtime {
 public:
  enum class Mode { Sequential, Threaded };

  explicit Runtime(int num_tasks, Mode mode = Mode::Sequential);

  int num_tasks() const { return num_tasks_; }
  Mode mode() const { return mode_; }

  /// Runs step(task) for every task and returns once all have finished.
  /// If any task throws, the superstep is aborted and a std::runtime_error
  /// naming the failing task(s) is thrown after all tasks have stopped.
  void run_superstep(const std::function<void(int task)>& step);

  /// Same execution and error semantics as run_superstep, for task-local
  /// work that completes a superstep after its collectives (e.g. applying
  /// received updates). Does not advance the superstep counter.
  void for_each_task(const std::function<void(int task)>& step);

  /// Alltoall of counts followed by Alltoallv of pairs. Fills recv_counts /
  /// recv_offsets in every buffer and returns each task's received queue,
  /// ordered by source task.
  std::vector<UpdateQueue> alltoallv(std::span<ExchangeBuffers> buffers);

  /// pack_updates on every task, then alltoallv.
  std::vector<UpdateQueue> exchange_updates(std::span<const LocalGraph> graphs,
                                            std::span<const UpdateQueue> queues);

  /// Element-wise sum; every task receives the same vector. Summation runs
  /// in task order. Throws ProtocolError on length mismatch.
  std::vector<std::int64_t> allreduce_sum(std::span<const std::vector<std::int64_t>> per_task) const;
  std::int64_t allreduce_sum(std::span<const std::int64_t> per_task) const;

  /// Returns one copy of the root's value per task.
  template <typename T>
  std::vector<T> broadcast(const T& root_value) const {
    return std::vector<T>(static_cast<std::size_t>(num_tasks_), root_value);
  }

  /// Labels subsequent exchanges in the trace.
  void set_label(std::string label) { label_ = std::move(label); }
  /// Writes one JSON object per exchange to `out` (nullptr disables).
  void set_trace(std::ostream* out) { trace_ = out; }

  std::uint64_t supersteps() const { return supersteps_; }
  const ExchangeStats& last_exchange() const { return last_; }

 private:
  int num_tasks_;
  Mode mode_;
  std::uint64_t supersteps_ = 0;
  std::uint64_t exchanges_ = 0;
  std::string label_;
  std::ostream* trace_ = nullptr;
  ExchangeStats last_;
};

}  // namespace xtrapulp
