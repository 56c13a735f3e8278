#include "xtrapulp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace xtrapulp {

void Config::validate() const {
  if (parts < 1) throw ConfigError("part count must be at least 1");
  if (tasks < 1) throw ConfigError("task count must be at least 1");
  if (outer_iters < 1 || balance_iters < 1 || refine_iters < 1) {
    throw ConfigError("iteration counts must be at least 1");
  }
  if (vert_imbalance < 0.0 || edge_imbalance < 0.0) {
    throw ConfigError("imbalance ratios must be non-negative");
  }
  if (!(y > 0.0) || !(y <= x)) throw ConfigError("multiplier end points need 0 < Y <= X");
}

double compute_mult(int iter_tot, int total_iters, int nprocs, double x, double y) {
  if (total_iters <= 0) throw ConfigError("total iteration count must be positive");
  if (nprocs < 1) throw ConfigError("task count must be at least 1");
  const double progress = static_cast<double>(iter_tot) / static_cast<double>(total_iters);
  // lerp is exact at both ends and monotone, unlike (x - y) * f + y.
  return static_cast<double>(nprocs) * std::lerp(y, x, progress);
}

double balance_weight(double target, double estimate) {
  return std::max(target / std::max(estimate, 1.0) - 1.0, 0.0);
}

PartLedger::PartLedger(part_t num_parts)
    : size_v(num_parts, 0),
      size_e(num_parts, 0),
      size_c(num_parts, 0),
      delta_v(num_parts, 0),
      delta_e(num_parts, 0),
      delta_c(num_parts, 0),
      weight_v(num_parts, 0.0),
      weight_e(num_parts, 0.0),
      weight_c(num_parts, 0.0) {}

void PartLedger::reset_deltas() {
  std::fill(delta_v.begin(), delta_v.end(), 0);
  std::fill(delta_e.begin(), delta_e.end(), 0);
  std::fill(delta_c.begin(), delta_c.end(), 0);
}

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::Init: return "init";
    case Phase::VertBalance: return "vert_balance";
    case Phase::VertRefine: return "vert_refine";
    case Phase::EdgeBalance: return "edge_balance";
    case Phase::EdgeRefine: return "edge_refine";
  }
  return "unknown";
}

namespace {

// Adds `sign` times the contribution of one edge whose endpoints carry
// labels a and b to the edge / cut deltas.
void add_edge_term(PartLedger& l, std::int64_t sign, part_t a, part_t b) {
  if (a == b) {
    l.delta_e[a] += sign;
  } else {
    l.delta_c[a] += sign;
    l.delta_c[b] += sign;
  }
}

template <typename T>
T max_of(const std::vector<T>& v) {
  return v.empty() ? T{} : *std::max_element(v.begin(), v.end());
}

}  // namespace

Partitioner::Partitioner(std::span<const LocalGraph> graphs, const Config& config)
    : graphs_(graphs),
      config_(config),
      runtime_(static_cast<int>(graphs.size()),
               config.sequential ? Runtime::Mode::Sequential : Runtime::Mode::Threaded) {
  config_.tasks = static_cast<int>(graphs.size());
  config_.validate();

  std::uint64_t n = 0;
  std::uint64_t arcs = 0;
  for (const auto& lg : graphs_) {
    n += lg.num_owned();
    arcs += lg.num_arcs();
  }
  if (static_cast<std::uint64_t>(config_.parts) > n) {
    throw ConfigError("part count " + std::to_string(config_.parts) + " exceeds vertex count " +
                      std::to_string(n));
  }
  const double p = config_.parts;
  const double target_v = (1.0 + config_.vert_imbalance) * static_cast<double>(n) / p;
  const double target_e = (1.0 + config_.edge_imbalance) * static_cast<double>(arcs / 2) / p;

  tasks_.resize(graphs_.size());
  for (int t = 0; t < num_tasks(); ++t) {
    auto& st = tasks_[t];
    const auto& lg = graphs_[t];
    st.parts.assign(lg.num_local(), kNoPart);
    st.ledger = PartLedger(config_.parts);
    st.ledger.target_v = target_v;
    st.ledger.target_e = target_e;
    st.rng = make_rng(config_.seed, Stream::InitTask, static_cast<std::uint64_t>(t));
    st.moved_from.assign(lg.num_owned(), kNoPart);
    st.score.assign(config_.parts, 0.0);
    st.raw.assign(config_.parts, 0);
  }
}

void Partitioner::init_parts() {
  switch (config_.init) {
    case InitMode::BfsLp: init_bfs(); break;
    case InitMode::Random: init_random(); break;
    case InitMode::Block: init_block(); break;
  }
  recount_sizes();
}

void Partitioner::init_bfs() {
  const part_t p = config_.parts;
  std::uint64_t n = 0;
  for (const auto& lg : graphs_) n += lg.num_owned();

  // Master task: p distinct roots via a sparse partial Fisher-Yates shuffle.
  std::vector<vid_t> roots(p);
  {
    Rng rng = make_rng(config_.seed, Stream::Roots);
    std::unordered_map<vid_t, vid_t> swapped;
    const auto at = [&](vid_t i) {
      const auto it = swapped.find(i);
      return it == swapped.end() ? i : it->second;
    };
    for (part_t i = 0; i < p; ++i) {
      const vid_t j = static_cast<vid_t>(i) + uniform_below(rng, n - static_cast<vid_t>(i));
      const vid_t vi = at(i);
      roots[i] = at(j);
      swapped[j] = vi;
    }
  }
  const auto per_task_roots = runtime_.broadcast(roots);

  runtime_.set_label("init");
  runtime_.run_superstep([&](int t) {
    auto& st = tasks_[t];
    std::fill(st.parts.begin(), st.parts.end(), kNoPart);
    const auto& mine = per_task_roots[t];
    for (part_t i = 0; i < p; ++i) {
      if (const auto lid = graphs_[t].local_id(mine[i])) st.parts[*lid] = i;
    }
  });

  std::int64_t updates = 1;
  int iteration = 0;
  while (updates > 0) {
    std::vector<ExchangeBuffers> buffers(num_tasks());
    runtime_.run_superstep([&](int t) {
      auto& st = tasks_[t];
      const auto& lg = graphs_[t];
      st.queue.clear();
      for (lid_t v = 0; v < lg.num_owned(); ++v) {
        if (st.parts[v] != kNoPart) continue;
        st.touched.clear();
        for (lid_t u : lg.neighbors(v)) {
          const part_t pu = st.parts[u];
          if (pu != kNoPart && st.raw[pu] == 0) {
            st.raw[pu] = 1;
            st.touched.push_back(pu);
          }
        }
        if (st.touched.empty()) continue;
        std::sort(st.touched.begin(), st.touched.end());
        const part_t w = st.touched[uniform_below(st.rng, st.touched.size())];
        st.queue.push_back({lg.global_id(v), w});
        for (part_t i : st.touched) st.raw[i] = 0;
      }
      // Labels chosen this superstep become visible together, so the
      // labelled region grows one BFS level per superstep.
      for (const auto& [gid, w] : st.queue) st.parts[*lg.local_id(gid)] = w;
      buffers[t] = pack_updates(lg, st.queue);
    });
    std::vector<std::int64_t> queued(num_tasks());
    for (int t = 0; t < num_tasks(); ++t) queued[t] = static_cast<std::int64_t>(tasks_[t].queue.size());
    updates = runtime_.allreduce_sum(queued);
    auto received = runtime_.alltoallv(buffers);
    runtime_.for_each_task(
        [&](int t) { apply_updates(graphs_[t], received[t], tasks_[t].parts); });
    total_moves_ += static_cast<std::uint64_t>(updates);
    last_moves_ = static_cast<std::uint64_t>(updates);
    if (observer_) {
      observer_(*this, {Phase::Init, iteration, iter_tot_, last_moves_,
                        runtime_.last_exchange().total_pairs, false});
    }
    ++iteration;
  }

  // Vertices unreachable from every root get a uniform random part.
  std::vector<ExchangeBuffers> buffers(num_tasks());
  runtime_.run_superstep([&](int t) {
    auto& st = tasks_[t];
    const auto& lg = graphs_[t];
    st.queue.clear();
    for (lid_t v = 0; v < lg.num_owned(); ++v) {
      if (st.parts[v] != kNoPart) continue;
      st.parts[v] = static_cast<part_t>(uniform_below(st.rng, static_cast<std::uint64_t>(p)));
      st.queue.push_back({lg.global_id(v), st.parts[v]});
    }
    buffers[t] = pack_updates(lg, st.queue);
  });
  auto received = runtime_.alltoallv(buffers);
  runtime_.for_each_task([&](int t) { apply_updates(graphs_[t], received[t], tasks_[t].parts); });
  if (observer_) {
    observer_(*this, {Phase::Init, iteration, iter_tot_, 0, runtime_.last_exchange().total_pairs,
                      false});
  }
}

void Partitioner::publish_all_owned() {
  std::vector<ExchangeBuffers> buffers(num_tasks());
  runtime_.run_superstep([&](int t) {
    auto& st = tasks_[t];
    const auto& lg = graphs_[t];
    st.queue.clear();
    for (lid_t v = 0; v < lg.num_owned(); ++v) st.queue.push_back({lg.global_id(v), st.parts[v]});
    buffers[t] = pack_updates(lg, st.queue);
  });
  auto received = runtime_.alltoallv(buffers);
  runtime_.for_each_task([&](int t) { apply_updates(graphs_[t], received[t], tasks_[t].parts); });
  if (observer_) {
    observer_(*this, {Phase::Init, 0, iter_tot_, 0, runtime_.last_exchange().total_pairs, false});
  }
}

void Partitioner::init_random() {
  runtime_.set_label("init");
  runtime_.run_superstep([&](int t) {
    auto& st = tasks_[t];
    std::fill(st.parts.begin(), st.parts.end(), kNoPart);
    for (lid_t v = 0; v < graphs_[t].num_owned(); ++v) {
      st.parts[v] = static_cast<part_t>(
          uniform_below(st.rng, static_cast<std::uint64_t>(config_.parts)));
    }
  });
  publish_all_owned();
}

void Partitioner::init_block() {
  std::uint64_t n = 0;
  for (const auto& lg : graphs_) n += lg.num_owned();
  const auto blocks = Distribution::block(n, config_.parts);
  runtime_.set_label("init");
  runtime_.run_superstep([&](int t) {
    auto& st = tasks_[t];
    const auto& lg = graphs_[t];
    std::fill(st.parts.begin(), st.parts.end(), kNoPart);
    for (lid_t v = 0; v < lg.num_owned(); ++v) st.parts[v] = blocks.owner(lg.global_id(v));
  });
  publish_all_owned();
}

void Partitioner::assign(std::span<const part_t> global_parts) {
  runtime_.for_each_task([&](int t) {
    auto& st = tasks_[t];
    const auto& lg = graphs_[t];
    for (lid_t v = 0; v < lg.num_local(); ++v) {
      const vid_t g = lg.global_id(v);
      if (g >= global_parts.size() || global_parts[g] < 0 || global_parts[g] >= config_.parts) {
        throw InputError("assigned partition does not cover vertex " + std::to_string(g));
      }
      st.parts[v] = global_parts[g];
    }
  });
  recount_sizes();
}

void Partitioner::recount_sizes() {
  std::vector<PartCounts> local(num_tasks());
  runtime_.for_each_task(
      [&](int t) { local[t] = local_part_counts(graphs_[t], tasks_[t].parts, config_.parts); });
  std::vector<std::vector<std::int64_t>> v(num_tasks()), e(num_tasks()), c(num_tasks());
  for (int t = 0; t < num_tasks(); ++t) {
    v[t] = std::move(local[t].vertices);
    e[t] = std::move(local[t].internal_edges);
    c[t] = std::move(local[t].cut_edges);
  }
  const auto sv = runtime_.allreduce_sum(v);
  const auto se = runtime_.allreduce_sum(e);
  const auto sc = runtime_.allreduce_sum(c);
  for (auto& st : tasks_) {
    st.ledger.size_v = sv;
    st.ledger.size_e = se;
    st.ledger.size_c = sc;
    st.ledger.reset_deltas();
    refresh_maxima(st.ledger);
  }
}

void Partitioner::refresh_maxima(PartLedger& l) const {
  l.max_v = std::max(static_cast<double>(max_of(l.size_v)), l.target_v);
  l.max_e = std::max(static_cast<double>(max_of(l.size_e)), l.target_e);
  l.max_c = static_cast<double>(max_of(l.size_c));
}

void Partitioner::local_pass(int task, Pass pass, double mult) {
  auto& st = tasks_[task];
  auto& l = st.ledger;
  const auto& lg = graphs_[task];
  const part_t p = config_.parts;
  const bool degree_weighted = pass == Pass::Balance || pass == Pass::EdgeBalance;

  st.queue.clear();
  st.moved.clear();
  refresh_maxima(l);

  const auto estimate = [&](const std::vector<std::int64_t>& size,
                            const std::vector<std::int64_t>& delta, part_t i) {
    return static_cast<double>(size[i]) + mult * static_cast<double>(delta[i]);
  };
  const auto reweigh = [&](part_t i) {
    if (pass == Pass::Balance) {
      l.weight_v[i] = balance_weight(l.target_v, estimate(l.size_v, l.delta_v, i));
    } else if (pass == Pass::EdgeBalance) {
      l.weight_e[i] = balance_weight(l.target_e, estimate(l.size_e, l.delta_e, i));
      l.weight_c[i] = balance_weight(l.max_c, estimate(l.size_c, l.delta_c, i));
    }
  };
  for (part_t i = 0; i < p; ++i) reweigh(i);
  // Edge balancing may not push any part past the vertex target itself; the
  // other passes only keep parts from growing beyond the current maximum.
  const double vertex_limit = pass == Pass::EdgeBalance ? l.target_v : l.max_v;

  for (lid_t v = 0; v < lg.num_owned(); ++v) {
    const part_t x = st.parts[v];
    const auto deg = static_cast<double>(lg.degree(v));

    st.touched.clear();
    for (lid_t u : lg.neighbors(v)) {
      const part_t pu = st.parts[u];
      if (st.raw[pu] == 0) st.touched.push_back(pu);
      ++st.raw[pu];
      st.score[pu] += degree_weighted ? static_cast<double>(lg.degree(u)) : 1.0;
    }

    // A destination is closed when its estimated size after taking v would
    // pass the current maximum (or target, whichever is larger).
    const auto closed = [&](part_t i) {
      if (estimate(l.size_v, l.delta_v, i) + 1.0 > vertex_limit) return true;
      if (pass == Pass::EdgeRefine) {
        if (estimate(l.size_e, l.delta_e, i) + deg > l.max_e) return true;
        if (estimate(l.size_c, l.delta_c, i) + deg > l.max_c) return true;
      }
      return false;
    };
    const auto value = [&](part_t i) {
      switch (pass) {
        case Pass::Balance: return st.score[i] * l.weight_v[i];
        case Pass::EdgeBalance:
          return st.score[i] * (r_e_ * l.weight_e[i] + r_c_ * l.weight_c[i]);
        case Pass::Refine:
        case Pass::EdgeRefine: return st.score[i];
      }
      return 0.0;
    };

    // Balancing clamps the current part like any other, so a vertex in a part
    // at the limit scores zero for staying. Refinement only clamps
    // destinations and compares against the raw count of x.
    const bool clamp_x = degree_weighted && closed(x);
    part_t best = x;
    double best_value = clamp_x || st.raw[x] == 0 ? 0.0 : value(x);
    for (part_t i : st.touched) {
      if (i == x || closed(i)) continue;
      const double vi = value(i);
      if (vi > best_value || (vi == best_value && best != x && i < best)) {
        best = i;
        best_value = vi;
      }
    }

    if (best != x) {
      const part_t w = best;
      const std::int64_t in_x = st.raw[x];
      const std::int64_t in_w = st.raw[w];
      const auto d = static_cast<std::int64_t>(lg.degree(v));
      --l.delta_v[x];
      ++l.delta_v[w];
      l.delta_e[x] -= in_x;
      l.delta_e[w] += in_w;
      l.delta_c[x] += 2 * in_x - d;
      l.delta_c[w] += d - 2 * in_w;
      reweigh(x);
      reweigh(w);
      st.parts[v] = w;
      st.moved_from[v] = x;
      st.moved.push_back(v);
      st.queue.push_back({lg.global_id(v), w});
    }

    for (part_t i : st.touched) {
      st.raw[i] = 0;
      st.score[i] = 0.0;
    }
  }
}

void Partitioner::finish_superstep(Phase phase, int iteration, bool fold_ledger) {
  std::vector<ExchangeBuffers> buffers(num_tasks());
  // Packing is task-local; it belongs to the superstep that produced the
  // queue but is done here so every pass shares one code path.
  runtime_.for_each_task([&](int t) { buffers[t] = pack_updates(graphs_[t], tasks_[t].queue); });
  auto received = runtime_.alltoallv(buffers);

  runtime_.for_each_task([&](int t) {
    auto& st = tasks_[t];
    const auto& lg = graphs_[t];
    if (fold_ledger && !st.moved.empty() && !received[t].empty()) {
      // Both endpoints of a cross-task edge may move in the same superstep;
      // each side then computed its delta against the other's old label.
      // The task owning the lower global ID repairs the edge's contribution.
      std::unordered_map<lid_t, part_t> incoming;
      incoming.reserve(received[t].size());
      for (const auto& [gid, w] : received[t]) incoming.emplace(*lg.local_id(gid), w);
      for (lid_t v : st.moved) {
        const part_t old_v = st.moved_from[v];
        const part_t new_v = st.parts[v];
        const vid_t gv = lg.global_id(v);
        for (lid_t u : lg.neighbors(v)) {
          if (lg.is_owned(u) || lg.global_id(u) < gv) continue;
          const auto it = incoming.find(u);
          if (it == incoming.end()) continue;
          const part_t old_u = st.parts[u];
          const part_t new_u = it->second;
          add_edge_term(st.ledger, +1, new_v, new_u);
          add_edge_term(st.ledger, -1, new_v, old_u);
          add_edge_term(st.ledger, -1, old_v, new_u);
          add_edge_term(st.ledger, +1, old_v, old_u);
        }
      }
    }
    apply_updates(lg, received[t], st.parts);
  });

  std::vector<std::int64_t> moved(num_tasks());
  for (int t = 0; t < num_tasks(); ++t) moved[t] = static_cast<std::int64_t>(tasks_[t].moved.size());
  last_moves_ = static_cast<std::uint64_t>(runtime_.allreduce_sum(moved));
  total_moves_ += last_moves_;

  if (fold_ledger) {
    std::vector<std::vector<std::int64_t>> dv(num_tasks()), de(num_tasks()), dc(num_tasks());
    for (int t = 0; t < num_tasks(); ++t) {
      dv[t] = tasks_[t].ledger.delta_v;
      de[t] = tasks_[t].ledger.delta_e;
      dc[t] = tasks_[t].ledger.delta_c;
    }
    const auto sv = runtime_.allreduce_sum(dv);
    const auto se = runtime_.allreduce_sum(de);
    const auto sc = runtime_.allreduce_sum(dc);
    for (auto& st : tasks_) {
      auto& l = st.ledger;
      for (part_t i = 0; i < config_.parts; ++i) {
        l.size_v[i] += sv[i];
        l.size_e[i] += se[i];
        l.size_c[i] += sc[i];
      }
      l.reset_deltas();
    }
  }

  if (observer_) {
    observer_(*this, {phase, iteration, iter_tot_, last_moves_,
                      runtime_.last_exchange().total_pairs, fold_ledger});
  }
}

void Partitioner::iterate(Phase phase, Pass pass, int iterations) {
  runtime_.set_label(std::string(phase_name(phase)));
  const int total = config_.total_iters();
  const int balance_total = config_.outer_iters * config_.balance_iters;
  const double ramp_step =
      (config_.x - config_.y) / static_cast<double>(std::max(balance_total - 1, 1));

  for (int it = 0; it < iterations; ++it) {
    const double mult =
        compute_mult(std::min(iter_tot_, total), total, num_tasks(), config_.x, config_.y);

    if (pass == Pass::EdgeBalance && !edge_target_met_) {
      const auto& l = tasks_.front().ledger;
      edge_target_met_ = static_cast<double>(max_of(l.size_e)) <= l.target_e;
    }

    runtime_.run_superstep([&](int t) { local_pass(t, pass, mult); });
    ++iter_tot_;
    finish_superstep(phase, it, true);

    if (pass == Pass::EdgeBalance) {
      // R_e ramps until the edge constraint holds, then freezes while R_c ramps.
      if (!edge_target_met_) {
        r_e_ = std::min(r_e_ + ramp_step, config_.x);
      } else {
        r_c_ = std::min(r_c_ + ramp_step, config_.x);
      }
    }
  }
}

void Partitioner::vert_balance(int iterations) {
  recount_sizes();
  iterate(Phase::VertBalance, Pass::Balance, iterations);
}

void Partitioner::vert_refine(int iterations) {
  recount_sizes();
  iterate(Phase::VertRefine, Pass::Refine, iterations);
}

void Partitioner::edge_balance(int iterations) {
  recount_sizes();
  if (r_e_ == 0.0 && r_c_ == 0.0) r_e_ = r_c_ = config_.y;
  iterate(Phase::EdgeBalance, Pass::EdgeBalance, iterations);
}

void Partitioner::edge_refine(int iterations) {
  recount_sizes();
  iterate(Phase::EdgeRefine, Pass::EdgeRefine, iterations);
}

void Partitioner::run() {
  init_parts();

  iter_tot_ = 0;
  for (int i = 0; i < config_.outer_iters; ++i) {
    vert_balance(config_.balance_iters);
    vert_refine(config_.refine_iters);
  }

  iter_tot_ = 0;
  r_e_ = r_c_ = config_.y;
  edge_target_met_ = false;
  for (int i = 0; i < config_.outer_iters; ++i) {
    edge_balance(config_.balance_iters);
    edge_refine(config_.refine_iters);
  }
}

std::vector<part_t> Partitioner::gather() const {
  std::uint64_t n = 0;
  for (const auto& lg : graphs_) n += lg.num_owned();
  std::vector<part_t> out(n, kNoPart);
  for (int t = 0; t < num_tasks(); ++t) {
    const auto& lg = graphs_[t];
    for (lid_t v = 0; v < lg.num_owned(); ++v) out[lg.global_id(v)] = tasks_[t].parts[v];
  }
  return out;
}

PartitionResult xtrapulp(const GlobalGraph& g, const Config& config, SuperstepObserver observer) {
  config.validate();
  const auto dist = config.distribution == DistKind::Block
                        ? Distribution::block(g.num_vertices(), config.tasks)
                        : Distribution::random_hash(g.num_vertices(), config.tasks, config.seed);
  const auto graphs = distribute(g, dist);
  Partitioner partitioner(graphs, config);
  if (observer) partitioner.set_observer(std::move(observer));
  partitioner.run();
  return {partitioner.gather(), partitioner.runtime().supersteps(), partitioner.total_moves()};
}

}  // namespace xtrapulp
