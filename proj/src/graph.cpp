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

#include "ample/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "ample/rng.hpp"

namespace ample {

Graph::Graph(std::size_t num_nodes, std::vector<std::size_t> offsets, std::vector<NodeId> neighbors,
             std::vector<double> weights, bool undirected)
    : num_nodes_(num_nodes),
      offsets_(std::move(offsets)),
      neighbors_(std::move(neighbors)),
      weights_(std::move(weights)),
      undirected_(undirected) {
  if (weights_.empty() && !neighbors_.empty()) weights_.assign(neighbors_.size(), 1.0);
  if (offsets_.size() != num_nodes_ + 1) throw IngestionError("csr_offsets must have num_nodes+1 entries");
  if (offsets_.front() != 0) throw IngestionError("csr_offsets[0] must be 0");
  if (offsets_.back() != neighbors_.size())
    throw IngestionError("csr_offsets[num_nodes] must equal the neighbor count");
  if (!std::is_sorted(offsets_.begin(), offsets_.end()))
    throw IngestionError("csr_offsets must be non-decreasing");
  if (weights_.size() != neighbors_.size()) throw IngestionError("edge_weights misaligned with csr_neighbors");
  for (NodeId n : neighbors_) {
    if (n >= num_nodes_) throw IngestionError("neighbor ID " + std::to_string(n) + " out of range");
  }
  if (undirected_) {
    std::vector<std::tuple<NodeId, NodeId, double>> fwd;
    std::vector<std::tuple<NodeId, NodeId, double>> rev;
    fwd.reserve(neighbors_.size());
    rev.reserve(neighbors_.size());
    for (std::size_t v = 0; v < num_nodes_; ++v) {
      for (std::size_t e = offsets_[v]; e < offsets_[v + 1]; ++e) {
        fwd.emplace_back(static_cast<NodeId>(v), neighbors_[e], weights_[e]);
        rev.emplace_back(neighbors_[e], static_cast<NodeId>(v), weights_[e]);
      }
    }
    std::sort(fwd.begin(), fwd.end());
    std::sort(rev.begin(), rev.end());
    if (fwd != rev) throw IngestionError("undirected graph is not symmetric");
  }
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> d(num_nodes_);
  for (std::size_t v = 0; v < num_nodes_; ++v) d[v] = offsets_[v + 1] - offsets_[v];
  return d;
}

std::vector<Neighbor> Graph::neighbors(NodeId v) const {
  std::vector<Neighbor> out;
  out.reserve(degree(v));
  for (std::size_t e = offsets_[v]; e < offsets_[v + 1]; ++e) out.push_back({neighbors_[e], weights_[e]});
  return out;
}

DegreeStats degree_stats(const Graph& g) {
  DegreeStats s;
  s.degree = g.degrees();
  if (s.degree.empty()) return s;
  s.min = *std::min_element(s.degree.begin(), s.degree.end());
  s.max = *std::max_element(s.degree.begin(), s.degree.end());
  s.mean = static_cast<double>(g.num_edges()) / static_cast<double>(g.num_nodes());
  return s;
}

Graph build_csr(std::span<const Edge> edges, std::size_t num_nodes, bool undirected) {
  for (const Edge& e : edges) {
    if (e.src >= num_nodes || e.dst >= num_nodes) {
      throw IngestionError("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                           ") references a node >= " + std::to_string(num_nodes));
    }
  }
  std::vector<std::size_t> offsets(num_nodes + 1, 0);
  for (const Edge& e : edges) ++offsets[e.src + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<NodeId> nbrs(edges.size());
  std::vector<double> wts(edges.size());
  for (const Edge& e : edges) {
    const std::size_t at = cursor[e.src]++;
    nbrs[at] = e.dst;
    wts[at] = e.weight;
  }
  std::vector<std::size_t> order;
  for (std::size_t v = 0; v < num_nodes; ++v) {
    const std::size_t lo = offsets[v];
    const std::size_t hi = offsets[v + 1];
    if (hi - lo < 2) continue;
    order.resize(hi - lo);
    std::iota(order.begin(), order.end(), lo);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return nbrs[a] < nbrs[b]; });
    std::vector<NodeId> n2(hi - lo);
    std::vector<double> w2(hi - lo);
    for (std::size_t k = 0; k < order.size(); ++k) {
      n2[k] = nbrs[order[k]];
      w2[k] = wts[order[k]];
    }
    std::copy(n2.begin(), n2.end(), nbrs.begin() + static_cast<std::ptrdiff_t>(lo));
    std::copy(w2.begin(), w2.end(), wts.begin() + static_cast<std::ptrdiff_t>(lo));
  }
  return Graph(num_nodes, std::move(offsets), std::move(nbrs), std::move(wts), undirected);
}

std::vector<Edge> symmetrize(std::span<const Edge> edges) {
  std::vector<Edge> out;
  out.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    out.push_back(e);
    if (e.src != e.dst) out.push_back({e.dst, e.src, e.weight});
  }
  return out;
}

Graph parse_edge_list(std::string_view text, std::size_t num_nodes, bool undirected,
                      std::string_view source_name) {
  std::vector<Edge> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return std::string(source_name) + ":" + std::to_string(lineno); };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long src = -1;
    long long dst = -1;
    if (!(fields >> src >> dst)) throw ParseError(where() + ": expected 'src dst [weight]'");
    double w = 1.0;
    std::string extra;
    if (fields >> extra) {
      std::size_t used = 0;
      try {
        w = std::stod(extra, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != extra.size() || !std::isfinite(w)) throw ParseError(where() + ": bad weight '" + extra + "'");
      if (fields >> extra) throw ParseError(where() + ": trailing field '" + extra + "'");
    }
    if (src < 0 || dst < 0) throw ParseError(where() + ": negative node ID");
    if (static_cast<unsigned long long>(src) >= num_nodes || static_cast<unsigned long long>(dst) >= num_nodes) {
      throw IngestionError(where() + ": node ID " + std::to_string(std::max(src, dst)) +
                           " >= num_nodes " + std::to_string(num_nodes));
    }
    edges.push_back({static_cast<NodeId>(src), static_cast<NodeId>(dst), w});
  }
  if (undirected) edges = symmetrize(edges);
  return build_csr(edges, num_nodes, undirected);
}

Graph load_edge_list(const std::filesystem::path& path, std::size_t num_nodes, bool undirected) {
  std::ifstream f(path);
  if (!f) throw IngestionError("cannot open edge list '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_edge_list(ss.str(), num_nodes, undirected, path.string());
}

double truncated_power_law_mean(double gamma, std::size_t max_degree) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t d = 1; d <= max_degree; ++d) {
    const double p = std::pow(static_cast<double>(d), -gamma);
    num += static_cast<double>(d) * p;
    den += p;
  }
  return num / den;
}

namespace {

// Floyd's sampling of `k` distinct values from [0, n-1) mapped around `self`.
std::vector<NodeId> sample_neighbors(Rng& rng, std::size_t n, std::size_t k, NodeId self) {
  std::vector<NodeId> picked;
  picked.reserve(k);
  const std::size_t pool = n - 1;
  for (std::size_t j = pool - k; j < pool; ++j) {
    auto t = static_cast<NodeId>(rng.below(j + 1));
    if (std::find(picked.begin(), picked.end(), t) != picked.end()) t = static_cast<NodeId>(j);
    picked.push_back(t);
  }
  for (NodeId& p : picked) {
    if (p >= self) ++p;
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

Graph from_degrees(const std::vector<std::size_t>& deg, Rng& rng) {
  const std::size_t n = deg.size();
  std::vector<Edge> edges;
  edges.reserve(std::accumulate(deg.begin(), deg.end(), std::size_t{0}));
  for (std::size_t v = 0; v < n; ++v) {
    for (NodeId u : sample_neighbors(rng, n, deg[v], static_cast<NodeId>(v))) {
      edges.push_back({static_cast<NodeId>(v), u, 1.0});
    }
  }
  return build_csr(edges, n, false);
}

}  // namespace

Graph generate_power_law_graph(std::size_t n, double gamma, std::size_t max_degree, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_power_law_graph: n must be >= 2");
  if (!(gamma > 1.0)) throw std::invalid_argument("generate_power_law_graph: gamma must be > 1");
  if (max_degree < 1) throw std::invalid_argument("generate_power_law_graph: max_degree must be >= 1");
  if (max_degree >= n) throw std::invalid_argument("generate_power_law_graph: max_degree must be < n");

  std::vector<double> cdf(max_degree);
  double total = 0.0;
  for (std::size_t d = 1; d <= max_degree; ++d) {
    total += std::pow(static_cast<double>(d), -gamma);
    cdf[d - 1] = total;
  }
  Rng rng(seed);
  std::vector<std::size_t> deg(n);
  for (auto& d : deg) {
    const double u = rng.uniform01() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    d = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()) + 1, max_degree);
  }
  return from_degrees(deg, rng);
}

Graph generate_uniform_degree_graph(std::size_t n, std::size_t degree, std::uint64_t seed) {
  if (n < 2 || degree >= n) throw std::invalid_argument("generate_uniform_degree_graph: need degree < n");
  Rng rng(seed);
  return from_degrees(std::vector<std::size_t>(n, degree), rng);
}

}  // namespace ample
