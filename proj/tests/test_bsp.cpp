#include <atomic>
#include <numeric>

#include "doctest.h"
#include "graphs.hpp"
#include "oracles.hpp"
#include "xtrapulp/bsp.hpp"
#include "xtrapulp/gen.hpp"

using namespace xtrapulp;

namespace {

std::vector<UpdateQueue> sorted(std::vector<UpdateQueue> q) {
  for (auto& v : q) std::sort(v.begin(), v.end());
  return q;
}

}  // namespace

TEST_CASE("empty exchange") {
  const auto g = build_csr(testgraphs::cycle(8), 8);
  const auto lgs = distribute(g, Distribution::block(8, 4));
  Runtime rt(4);
  const std::vector<UpdateQueue> queues(4);
  const auto got = rt.exchange_updates(lgs, queues);
  REQUIRE(got.size() == 4);
  for (const auto& q : got) CHECK(q.empty());
  CHECK(rt.last_exchange().total_pairs == 0);
}

TEST_CASE("single crossing edge") {
  const auto g = build_csr(testgraphs::path(4), 4);
  const auto lgs = distribute(g, Distribution::block(4, 2));
  Runtime rt(2);
  std::vector<UpdateQueue> queues(2);
  queues[0].push_back({1, 5});
  const auto got = rt.exchange_updates(lgs, queues);
  CHECK(got[0].empty());
  CHECK(got[1] == UpdateQueue{{1, 5}});
}

TEST_CASE("delivery matches the neighbour-task oracle") {
  GenSpec s;
  s.kind = GenKind::Er;
  s.n = 256;
  s.d_avg = 6;
  s.seed = 21;
  const auto edges = generate(s);
  const auto g = build_csr(edges, s.n);
  for (auto mode : {Runtime::Mode::Sequential, Runtime::Mode::Threaded}) {
    const auto dist = Distribution::random_hash(s.n, 4, 2);
    const auto lgs = distribute(g, dist);
    std::vector<UpdateQueue> queues(4);
    Rng rng(8);
    for (vid_t v = 0; v < s.n; ++v) {
      if (rng() % 3 == 0) queues[dist.owner(v)].push_back({v, static_cast<part_t>(rng() % 9)});
    }
    Runtime rt(4, mode);
    const auto got = sorted(rt.exchange_updates(lgs, queues));
    const auto want = oracle::expected_delivery(edges, dist, queues);
    CHECK(got == want);
    std::uint64_t total = 0;
    for (const auto& q : want) total += q.size();
    CHECK(rt.last_exchange().total_pairs == total);
  }
}

TEST_CASE("received pairs land in ghost slots") {
  const auto g = build_csr(testgraphs::path(4), 4);
  const auto lgs = distribute(g, Distribution::block(4, 2));
  std::vector<part_t> parts(lgs[1].num_local(), 0);
  const UpdateQueue recv{{1, 3}};
  apply_updates(lgs[1], recv, parts);
  CHECK(parts[*lgs[1].local_id(1)] == 3);
  const UpdateQueue bad{{0, 3}};
  CHECK_THROWS_AS(apply_updates(lgs[1], bad, parts), ProtocolError);
}

TEST_CASE("packing a vertex the task does not own is an error") {
  const auto g = build_csr(testgraphs::path(4), 4);
  const auto lgs = distribute(g, Distribution::block(4, 2));
  const UpdateQueue q{{3, 1}};
  CHECK_THROWS_AS(pack_updates(lgs[0], q), ProtocolError);
}

TEST_CASE("worker queues merge in worker order") {
  const std::vector<UpdateQueue> w{{{4, 1}}, {}, {{2, 0}, {3, 1}}};
  CHECK(merge_worker_queues(w) == UpdateQueue{{4, 1}, {2, 0}, {3, 1}});
}

TEST_CASE("allreduce") {
  Runtime rt(2);
  const std::vector<std::vector<std::int64_t>> in{{1, 2}, {3, 4}};
  CHECK(rt.allreduce_sum(in) == std::vector<std::int64_t>{4, 6});
  const std::vector<std::vector<std::int64_t>> zeros(2, std::vector<std::int64_t>(3, 0));
  CHECK(rt.allreduce_sum(zeros) == std::vector<std::int64_t>(3, 0));
  const std::vector<std::vector<std::int64_t>> ragged{{1}, {1, 2}};
  CHECK_THROWS_AS(rt.allreduce_sum(ragged), ProtocolError);
}

TEST_CASE("allreduce of random vectors over eight tasks") {
  Runtime rt(8);
  Rng rng(4);
  std::vector<std::vector<std::int64_t>> in(8, std::vector<std::int64_t>(20));
  std::vector<std::int64_t> want(20, 0);
  for (auto& v : in) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = static_cast<std::int64_t>(rng() % 2001) - 1000;
      want[i] += v[i];
    }
  }
  CHECK(rt.allreduce_sum(in) == want);
}

TEST_CASE("broadcast") {
  CHECK(Runtime(1).broadcast(std::vector<int>{7}) == std::vector<std::vector<int>>{{7}});
  const std::vector<vid_t> roots{9, 1, 4};
  for (const auto& copy : Runtime(4).broadcast(roots)) CHECK(copy == roots);
}

TEST_CASE("superstep runs each task once") {
  for (auto mode : {Runtime::Mode::Sequential, Runtime::Mode::Threaded}) {
    Runtime rt(5, mode);
    std::atomic<int> calls{0};
    std::vector<int> seen(5, 0);
    rt.run_superstep([&](int t) {
      calls += 1;
      seen[t] += 1;
    });
    CHECK(calls == 5);
    CHECK(seen == std::vector<int>(5, 1));
    CHECK(rt.supersteps() == 1);
  }
}

TEST_CASE("a failing task aborts the superstep") {
  for (auto mode : {Runtime::Mode::Sequential, Runtime::Mode::Threaded}) {
    Runtime rt(3, mode);
    CHECK_THROWS_WITH_AS(rt.run_superstep([](int t) {
      if (t == 1) throw std::runtime_error("boom");
    }),
                         doctest::Contains("1"), std::runtime_error);
  }
}
