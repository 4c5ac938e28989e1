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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "ample/common.hpp"

namespace ample {

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;
};

struct Neighbor {
  NodeId id;
  double weight;
  bool operator==(const Neighbor&) const = default;
};

/// Compressed sparse adjacency. Row v lists N(v), the nodes whose embeddings
/// v aggregates; an edge (u, v) places v in row u. Rows are sorted by
/// neighbor ID. Self-loops present in the input are kept as ordinary edges;
/// the GCN self term is added by the model layer, not stored here.
class Graph {
 public:
  Graph() = default;

  // Validates every invariant; throws IngestionError if one is broken.
  Graph(std::size_t num_nodes, std::vector<std::size_t> offsets, std::vector<NodeId> neighbors,
        std::vector<double> weights, bool undirected);

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return neighbors_.size(); }
  bool undirected() const noexcept { return undirected_; }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::vector<std::size_t> degrees() const;

  std::span<const NodeId> neighbor_ids(NodeId v) const {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }
  std::span<const double> neighbor_weights(NodeId v) const {
    return {weights_.data() + offsets_[v], degree(v)};
  }
  // Materialized (id, weight) pairs in stored order.
  std::vector<Neighbor> neighbors(NodeId v) const;

  std::span<const std::size_t> csr_offsets() const noexcept { return offsets_; }
  std::span<const NodeId> csr_neighbors() const noexcept { return neighbors_; }
  std::span<const double> edge_weights() const noexcept { return weights_; }

  bool operator==(const Graph&) const = default;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<double> weights_;
  bool undirected_ = false;
};

struct DegreeStats {
  std::vector<std::size_t> degree;
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

DegreeStats degree_stats(const Graph& g);

/// Sorts each row by neighbor ID (stable for duplicates, which are kept).
/// With undirected = true the caller is asserting the edge set is already
/// symmetric; use symmetrize() first otherwise.
Graph build_csr(std::span<const Edge> edges, std::size_t num_nodes, bool undirected = false);

// Adds (dst, src, w) for every (src, dst, w). Self-loops are not doubled.
std::vector<Edge> symmetrize(std::span<const Edge> edges);

/// Whitespace-separated "src dst [weight]" per line, '#' comments and blank
/// lines ignored. Duplicate lines are preserved.
Graph load_edge_list(const std::filesystem::path& path, std::size_t num_nodes, bool undirected);
Graph parse_edge_list(std::string_view text, std::size_t num_nodes, bool undirected,
                      std::string_view source_name = "<memory>");

/// In-degrees from a discrete power law P(d) ~ d^-gamma truncated to
/// [1, max_degree]; each node's neighbors are distinct, uniform, and never
/// the node itself.
Graph generate_power_law_graph(std::size_t n, double gamma, std::size_t max_degree,
                               std::uint64_t seed);

// Every node gets exactly `degree` distinct uniform neighbors.
Graph generate_uniform_degree_graph(std::size_t n, std::size_t degree, std::uint64_t seed);

// Analytic mean of the truncated power law by direct summation.
double truncated_power_law_mean(double gamma, std::size_t max_degree);

}  // namespace ample
