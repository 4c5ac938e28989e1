/*
 * Copyright 2026 The amplesim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>

#include "ample/graph.hpp"
#include "ample/rng.hpp"
#include "doctest.h"

using namespace ample;

TEST_SUITE("graph") {

TEST_CASE("two-node edge list") {
  const Graph g = parse_edge_list("0 1\n1 0\n", 2, false);
  CHECK(g.degrees() == std::vector<std::size_t>{1, 1});
  CHECK(g.neighbor_ids(0)[0] == 1);
}

TEST_CASE("empty edge list gives isolated nodes") {
  const Graph g = parse_edge_list("", 3, false);
  CHECK(g.num_nodes() == 3);
  CHECK(g.degrees() == std::vector<std::size_t>{0, 0, 0});
  CHECK(g.neighbor_ids(2).empty());
}

TEST_CASE("comments, weights and duplicates") {
  const Graph g = parse_edge_list("# header\n0 1 0.5\n\n0 1\n2 0 2.0\n", 3, false);
  CHECK(g.degree(0) == 2);
  CHECK(g.neighbor_weights(0)[0] == doctest::Approx(0.5));
  CHECK(g.neighbor_weights(0)[1] == doctest::Approx(1.0));
  CHECK(g.neighbor_weights(2)[0] == doctest::Approx(2.0));
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(parse_edge_list("0 5\n", 3, false), IngestionError);
  CHECK_THROWS_AS(parse_edge_list("0 x\n", 3, false), Error);
  CHECK_THROWS_AS(parse_edge_list("-1 0\n", 3, false), Error);
}

TEST_CASE("missing file names the path") {
  try {
    (void)load_edge_list("/definitely/not/here.txt", 2, false);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("/definitely/not/here.txt") != std::string::npos);
  }
}

TEST_CASE("undirected parsing mirrors each line") {
  const Graph g = parse_edge_list("0 1\n", 2, true);
  CHECK(g.degrees() == std::vector<std::size_t>{1, 1});
  CHECK(g.undirected());
}

TEST_CASE("undirected CSR must be symmetric") {
  const std::vector<Edge> e{{0, 1, 1.0}};
  CHECK_THROWS_AS(build_csr(e, 2, true), IngestionError);
}

TEST_CASE("build_csr offsets") {
  const std::vector<Edge> e{{0, 1, 1.0}};
  const Graph g = build_csr(e, 2);
  const auto off = g.csr_offsets();
  CHECK(std::vector<std::size_t>(off.begin(), off.end()) == std::vector<std::size_t>{0, 1, 1});
}

TEST_CASE("build_csr sorts rows") {
  const std::vector<Edge> e{{1, 2, 1.0}, {1, 0, 1.0}};
  const Graph g = build_csr(e, 3);
  const auto ids = g.neighbor_ids(1);
  CHECK(std::vector<NodeId>(ids.begin(), ids.end()) == std::vector<NodeId>{0, 2});
  CHECK(g.neighbors(1) == std::vector<Neighbor>{{0, 1.0}, {2, 1.0}});
}

TEST_CASE("build_csr row counts match a brute-force count") {
  Rng rng(11);
  std::vector<Edge> e;
  for (int i = 0; i < 10; ++i)
    e.push_back({static_cast<NodeId>(rng.below(5)), static_cast<NodeId>(rng.below(5)), 1.0});
  const Graph g = build_csr(e, 5);
  CHECK(g.csr_offsets()[5] == 10);
  for (NodeId v = 0; v < 5; ++v) {
    const auto expected = std::count_if(e.begin(), e.end(), [&](const Edge& x) { return x.src == v; });
    CHECK(g.degree(v) == static_cast<std::size_t>(expected));
  }
}

TEST_CASE("neighbors of undirected two-node graph") {
  const std::vector<Edge> e{{0, 1, 1.0}};
  const Graph g = build_csr(symmetrize(e), 2, true);
  CHECK(g.neighbors(0) == std::vector<Neighbor>{{1, 1.0}});
  CHECK(g.neighbors(1) == std::vector<Neighbor>{{0, 1.0}});
}

TEST_CASE("symmetrize does not double self-loops") {
  const std::vector<Edge> e{{0, 0, 1.0}, {0, 1, 1.0}};
  CHECK(symmetrize(e).size() == 3);
}

TEST_CASE("power law truncation forces degree one") {
  const Graph g = generate_power_law_graph(2, 2.0, 1, 3);
  CHECK(g.degrees() == std::vector<std::size_t>{1, 1});
}

TEST_CASE("power law generator is deterministic") {
  CHECK(generate_power_law_graph(300, 2.0, 50, 9) == generate_power_law_graph(300, 2.0, 50, 9));
  CHECK_FALSE(generate_power_law_graph(300, 2.0, 50, 9) == generate_power_law_graph(300, 2.0, 50, 10));
}

TEST_CASE("power law rows are distinct and loop free") {
  const Graph g = generate_power_law_graph(500, 2.0, 100, 4);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto ids = g.neighbor_ids(v);
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    CHECK(std::find(ids.begin(), ids.end(), v) == ids.end());
    CHECK(g.degree(v) >= 1);
    CHECK(g.degree(v) <= 100);
  }
}

TEST_CASE("power law mean matches the analytic mean within 3 sigma") {
  const double gamma = 2.2;
  const std::size_t dmax = 100, n = 1000;
  // Independent summation of the truncated law.
  double z = 0, m1 = 0, m2 = 0;
  for (std::size_t d = 1; d <= dmax; ++d) {
    const double p = std::pow(static_cast<double>(d), -gamma);
    z += p;
    m1 += d * p;
    m2 += static_cast<double>(d * d) * p;
  }
  m1 /= z;
  m2 /= z;
  CHECK(truncated_power_law_mean(gamma, dmax) == doctest::Approx(m1).epsilon(1e-12));
  const double sigma = std::sqrt((m2 - m1 * m1) / n);
  const DegreeStats s = degree_stats(generate_power_law_graph(n, gamma, dmax, 7));
  CHECK(std::abs(s.mean - m1) <= 3 * sigma);
}

TEST_CASE("uniform generator gives exact degree") {
  const Graph g = generate_uniform_degree_graph(50, 4, 1);
  for (auto d : g.degrees()) CHECK(d == 4);
}

TEST_CASE("degree stats") {
  const DegreeStats s = degree_stats(parse_edge_list("0 1\n0 2\n1 0\n", 3, false));
  CHECK(s.min == 0);
  CHECK(s.max == 2);
  CHECK(s.mean == doctest::Approx(1.0));
}

}  // TEST_SUITE
