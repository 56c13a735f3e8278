#include "xtrapulp/bsp.hpp"

#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"

namespace xtrapulp {

UpdateQueue merge_worker_queues(std::span<const UpdateQueue> worker_queues) {
  std::size_t total = 0;
  for (const auto& q : worker_queues) total += q.size();
  UpdateQueue out;
  out.reserve(total);
  for (const auto& q : worker_queues) out.insert(out.end(), q.begin(), q.end());
  return out;
}

namespace {

// Calls emit(task) once per distinct remote task adjacent to owned vertex v.
template <typename Emit>
void for_each_neighbor_task(const LocalGraph& lg, lid_t v, std::vector<char>& to_send,
                            std::vector<int>& touched, Emit&& emit) {
  touched.clear();
  for (lid_t u : lg.neighbors(v)) {
    const int task = lg.owner(u);
    if (task != lg.task() && !to_send[task]) {
      to_send[task] = 1;
      touched.push_back(task);
      emit(task);
    }
  }
  for (int task : touched) to_send[task] = 0;
}

}  // namespace

ExchangeBuffers pack_updates(const LocalGraph& lg, std::span<const UpdatePair> queue) {
  const auto num_tasks = static_cast<std::size_t>(lg.num_tasks());
  ExchangeBuffers buf;
  buf.send_counts.assign(num_tasks, 0);
  buf.send_offsets.assign(num_tasks, 0);

  std::vector<lid_t> local(queue.size());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto lid = lg.local_id(queue[i].vertex);
    if (!lid || !lg.is_owned(*lid)) {
      throw ProtocolError("task " + std::to_string(lg.task()) + " queued vertex " +
                          std::to_string(queue[i].vertex) + " which it does not own");
    }
    local[i] = *lid;
  }

  std::vector<char> to_send(num_tasks, 0);
  std::vector<int> touched;
  for (lid_t v : local) {
    for_each_neighbor_task(lg, v, to_send, touched, [&](int task) { ++buf.send_counts[task]; });
  }
  for (std::size_t t = 1; t < num_tasks; ++t) {
    buf.send_offsets[t] = buf.send_offsets[t - 1] + buf.send_counts[t - 1];
  }
  buf.send_buffer.resize(buf.send_offsets.back() + buf.send_counts.back());

  auto tmp_offsets = buf.send_offsets;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for_each_neighbor_task(lg, local[i], to_send, touched,
                           [&](int task) { buf.send_buffer[tmp_offsets[task]++] = queue[i]; });
  }
  return buf;
}

void apply_updates(const LocalGraph& lg, std::span<const UpdatePair> received,
                   std::span<part_t> parts) {
  for (const auto& [vertex, part] : received) {
    const auto lid = lg.local_id(vertex);
    if (!lid || lg.is_owned(*lid)) {
      throw ProtocolError("task " + std::to_string(lg.task()) + " received an update for " +
                          std::to_string(vertex) + " which is not one of its ghosts");
    }
    parts[*lid] = part;
  }
}

Runtime::Runtime(int num_tasks, Mode mode) : num_tasks_(num_tasks), mode_(mode) {
  if (num_tasks < 1) throw ConfigError("task count must be at least 1");
}

void Runtime::run_superstep(const std::function<void(int task)>& step) {
  ++supersteps_;
  for_each_task(step);
}

void Runtime::for_each_task(const std::function<void(int task)>& step) {
  std::vector<std::exception_ptr> errors(num_tasks_);
  if (mode_ == Mode::Sequential || num_tasks_ == 1) {
    for (int t = 0; t < num_tasks_; ++t) {
      try {
        step(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(num_tasks_);
    for (int t = 0; t < num_tasks_; ++t) {
      workers.emplace_back([&, t] {
        try {
          step(t);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }

  std::string message;
  std::exception_ptr first;
  for (int t = 0; t < num_tasks_; ++t) {
    if (!errors[t]) continue;
    if (!first) first = errors[t];
    try {
      std::rethrow_exception(errors[t]);
    } catch (const std::exception& e) {
      message += "\n  task " + std::to_string(t) + ": " + e.what();
    } catch (...) {
      message += "\n  task " + std::to_string(t) + ": unknown error";
    }
  }
  if (first) {
    // Protocol violations keep their type so callers can tell them apart.
    try {
      std::rethrow_exception(first);
    } catch (const ProtocolError&) {
      throw ProtocolError("superstep " + std::to_string(supersteps_) + " aborted:" + message);
    } catch (...) {
    }
    throw std::runtime_error("superstep " + std::to_string(supersteps_) + " aborted:" + message);
  }
}

std::vector<UpdateQueue> Runtime::alltoallv(std::span<ExchangeBuffers> buffers) {
  if (buffers.size() != static_cast<std::size_t>(num_tasks_)) {
    throw ProtocolError("alltoallv needs one buffer per task");
  }
  const auto num_tasks = static_cast<std::size_t>(num_tasks_);
  for (const auto& b : buffers) {
    if (b.send_counts.size() != num_tasks || b.send_offsets.size() != num_tasks) {
      throw ProtocolError("alltoallv count arrays must have one entry per task");
    }
  }

  // Alltoall of counts: recv_counts[dst][src] = send_counts at src for dst.
  for (std::size_t dst = 0; dst < num_tasks; ++dst) {
    auto& b = buffers[dst];
    b.recv_counts.assign(num_tasks, 0);
    b.recv_offsets.assign(num_tasks, 0);
    for (std::size_t src = 0; src < num_tasks; ++src) {
      b.recv_counts[src] = buffers[src].send_counts[dst];
    }
    for (std::size_t src = 1; src < num_tasks; ++src) {
      b.recv_offsets[src] = b.recv_offsets[src - 1] + b.recv_counts[src - 1];
    }
  }

  ExchangeStats stats;
  stats.superstep = supersteps_;
  stats.label = label_;
  stats.pairs_sent.assign(num_tasks, 0);

  std::vector<UpdateQueue> received(num_tasks);
  for (std::size_t dst = 0; dst < num_tasks; ++dst) {
    const auto& b = buffers[dst];
    received[dst].resize(b.recv_offsets.back() + b.recv_counts.back());
    for (std::size_t src = 0; src < num_tasks; ++src) {
      const auto& s = buffers[src];
      const auto begin = s.send_buffer.begin() + static_cast<std::ptrdiff_t>(s.send_offsets[dst]);
      std::copy(begin, begin + static_cast<std::ptrdiff_t>(s.send_counts[dst]),
                received[dst].begin() + static_cast<std::ptrdiff_t>(b.recv_offsets[src]));
      stats.pairs_sent[src] += s.send_counts[dst];
      stats.total_pairs += s.send_counts[dst];
    }
  }

  ++exchanges_;
  if (trace_ != nullptr) {
    nlohmann::json line = {{"exchange", exchanges_},
                           {"superstep", stats.superstep},
                           {"label", stats.label},
                           {"pairs_sent", stats.pairs_sent},
                           {"total_pairs", stats.total_pairs}};
    *trace_ << line.dump() << '\n';
  }
  last_ = std::move(stats);
  return received;
}

std::vector<UpdateQueue> Runtime::exchange_updates(std::span<const LocalGraph> graphs,
                                                   std::span<const UpdateQueue> queues) {
  if (graphs.size() != static_cast<std::size_t>(num_tasks_) || queues.size() != graphs.size()) {
    throw ProtocolError("exchange_updates needs one graph and one queue per task");
  }
  std::vector<ExchangeBuffers> buffers(graphs.size());
  run_superstep([&](int t) { buffers[t] = pack_updates(graphs[t], queues[t]); });
  return alltoallv(buffers);
}

std::vector<std::int64_t> Runtime::allreduce_sum(
    std::span<const std::vector<std::int64_t>> per_task) const {
  if (per_task.size() != static_cast<std::size_t>(num_tasks_)) {
    throw ProtocolError("allreduce needs one contribution per task");
  }
  std::vector<std::int64_t> sum(per_task.front().size(), 0);
  for (const auto& v : per_task) {
    if (v.size() != sum.size()) throw ProtocolError("allreduce length mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
  }
  return sum;
}

std::int64_t Runtime::allreduce_sum(std::span<const std::int64_t> per_task) const {
  if (per_task.size() != static_cast<std::size_t>(num_tasks_)) {
    throw ProtocolError("allreduce needs one contribution per task");
  }
  std::int64_t sum = 0;
  for (auto v : per_task) sum += v;
  return sum;
}

}  // namespace xtrapulp
