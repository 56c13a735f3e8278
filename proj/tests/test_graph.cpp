#include <algorithm>
#include <set>

#include "doctest.h"
#include "graphs.hpp"
#include "oracles.hpp"
#include "xtrapulp/gen.hpp"
#include "xtrapulp/graph.hpp"

using namespace xtrapulp;

TEST_CASE("csr of a path") {
  const EdgeList e{{0, 1}, {1, 2}};
  const auto g = build_csr(e, 3);
  CHECK(g.offsets() == std::vector<std::uint64_t>{0, 1, 3, 4});
  CHECK(g.adjacency() == std::vector<vid_t>{1, 0, 2, 1});
  CHECK(g.num_edges() == 2);
}

TEST_CASE("self loop is dropped") {
  const EdgeList e{{0, 0}};
  const auto g = build_csr(e, 1);
  CHECK(g.num_vertices() == 1);
  CHECK(g.num_edges() == 0);
  CHECK(g.adjacency().empty());
}

TEST_CASE("grid edge count") {
  const auto e = testgraphs::grid(32, 32);
  const auto g = build_csr(e, 1024);
  CHECK(g.num_vertices() == 1024);
  CHECK(g.num_edges() == 2 * 32 * 31);
}

TEST_CASE("duplicates kept unless dedup") {
  const EdgeList e{{0, 1}, {1, 0}, {0, 1}, {1, 2}};
  CHECK(build_csr(e, 3).num_edges() == 4);
  CHECK(build_csr(e, 3, true).num_edges() == 2);
}

TEST_CASE("out of range id is rejected") {
  const EdgeList e{{0, 1}, {1, 7}};
  CHECK_THROWS_AS(build_csr(e, 3), InputError);
}

TEST_CASE("csr round trips the edge multiset") {
  GenSpec s;
  s.kind = GenKind::Er;
  s.n = 512;
  s.d_avg = 8;
  s.seed = 3;
  auto e = generate(s);
  const auto g = build_csr(e, s.n);
  auto back = g.edges();
  for (auto& x : e) {
    if (x.u > x.v) std::swap(x.u, x.v);
  }
  const auto key = [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); };
  std::sort(e.begin(), e.end(), key);
  std::sort(back.begin(), back.end(), key);
  CHECK(back == oracle::without_loops(e));
}

TEST_CASE("single task has no ghosts") {
  const auto g = build_csr(testgraphs::cycle(10), 10);
  const auto parts = distribute(g, Distribution::block(10, 1));
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].num_owned() == 10);
  CHECK(parts[0].num_ghosts() == 0);
}

TEST_CASE("path split over two tasks") {
  const auto g = build_csr(testgraphs::path(4), 4);
  const auto lg = distribute(g, Distribution::block(4, 2));
  CHECK(lg[0].num_owned() == 2);
  CHECK(lg[0].num_ghosts() == 1);
  CHECK(lg[0].global_id(2) == 2);
  CHECK(lg[0].owner(2) == 1);
  CHECK(lg[1].num_owned() == 2);
  CHECK(lg[1].num_ghosts() == 1);
  CHECK(lg[1].global_id(2) == 1);
  CHECK(lg[1].degree(2) == 2);
}

TEST_CASE("random hash ownership is stable and complete") {
  const vid_t n = 1000;
  const auto a = Distribution::random_hash(n, 7, 11);
  const auto b = Distribution::random_hash(n, 7, 11);
  std::vector<int> count(7);
  for (vid_t v = 0; v < n; ++v) {
    CHECK(a.owner(v) == b.owner(v));
    count[a.owner(v)] += 1;
  }
  CHECK(*std::min_element(count.begin(), count.end()) > 0);
}

TEST_CASE("local graphs reconstruct the global graph") {
  GenSpec s;
  s.kind = GenKind::Rmat;
  s.n = 1024;
  s.d_avg = 8;
  s.seed = 5;
  const auto g = build_csr(generate(s), s.n);
  for (const auto& dist : {Distribution::block(s.n, 4), Distribution::random_hash(s.n, 3, 9)}) {
    const auto lgs = distribute(g, dist);
    std::vector<std::vector<vid_t>> adj(s.n);
    vid_t owned = 0;
    for (const auto& lg : lgs) {
      owned += lg.num_owned();
      for (lid_t v = 0; v < lg.num_owned(); ++v) {
        CHECK(dist.owner(lg.global_id(v)) == lg.task());
        for (lid_t w : lg.neighbors(v)) adj[lg.global_id(v)].push_back(lg.global_id(w));
      }
      for (lid_t gh = lg.num_owned(); gh < lg.num_local(); ++gh) {
        CHECK(lg.owner(gh) != lg.task());
        CHECK(lg.degree(gh) == g.degree(lg.global_id(gh)));
      }
    }
    CHECK(owned == s.n);
    for (vid_t v = 0; v < s.n; ++v) {
      std::sort(adj[v].begin(), adj[v].end());
      const auto nb = g.neighbors(v);
      CHECK(std::equal(adj[v].begin(), adj[v].end(), nb.begin(), nb.end()));
    }
  }
}

TEST_CASE("more tasks than vertices is rejected") {
  const auto g = build_csr(testgraphs::path(3), 3);
  CHECK_THROWS_AS(distribute(g, Distribution::block(3, 4)), ConfigError);
}
