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

// Dense-matrix formulations of the three layers, written against Eigen and
// sharing no code with the sparse implementation.

#pragma once

#include <Eigen/Dense>

#include "ample/gnn.hpp"
#include "ample/graph.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Mat to_eigen(const ample::Matrix& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

inline ample::Matrix from_eigen(const Mat& m) {
  ample::Matrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

// A(i, j) = total weight of the stored edges i -> j (row i lists N(i)).
inline Mat weighted_adjacency(const ample::Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Mat a = Mat::Zero(n, n);
  const auto off = g.csr_offsets();
  const auto ids = g.csr_neighbors();
  const auto w = g.edge_weights();
  for (std::size_t i = 0; i < g.num_nodes(); ++i)
    for (std::size_t e = off[i]; e < off[i + 1]; ++e) a(i, ids[e]) += w[e];
  return a;
}

inline Mat count_adjacency(const ample::Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Mat a = Mat::Zero(n, n);
  const auto off = g.csr_offsets();
  const auto ids = g.csr_neighbors();
  for (std::size_t i = 0; i < g.num_nodes(); ++i)
    for (std::size_t e = off[i]; e < off[i + 1]; ++e) a(i, ids[e]) += 1.0;
  return a;
}

inline Mat act(const Mat& m, ample::Activation a) {
  return a == ample::Activation::ReLU ? Mat(m.cwiseMax(0.0)) : m;
}

// A_hat = D^-1/2 (A + I) D^-1/2 with D_ii = 1 + sum_j A_ij.
inline Mat gcn_propagation(const ample::Graph& g) {
  const Mat a = weighted_adjacency(g);
  const auto n = a.rows();
  const Vec d = Vec::Ones(n) + a.rowwise().sum();
  const Vec inv = d.cwiseSqrt().cwiseInverse();
  return inv.asDiagonal() * (a + Mat::Identity(n, n)) * inv.asDiagonal();
}

inline Mat gcn(const ample::Graph& g, const Mat& x, const ample::LayerWeights& w) {
  return gcn_propagation(g) * x * to_eigen(w.w).transpose();
}

inline Mat mlp(Mat h, const ample::LayerWeights& w) {
  for (const auto& l : w.mlp) {
    Mat z = h * to_eigen(l.weight).transpose();
    if (!l.bias.empty()) {
      const Eigen::Map<const Eigen::RowVectorXd> b(l.bias.data(), static_cast<Eigen::Index>(l.bias.size()));
      z.rowwise() += b;
    }
    h = act(z, l.activation);
  }
  return h;
}

// MLP((A + (1 + eps) I) X)
inline Mat gin_aggregate(const ample::Graph& g, const Mat& x, double eps) {
  const Mat a = count_adjacency(g);
  return (a + (1.0 + eps) * Mat::Identity(a.rows(), a.cols())) * x;
}

inline Mat gin(const ample::Graph& g, const Mat& x, const ample::LayerWeights& w) {
  return mlp(gin_aggregate(g, x, w.eps), w);
}

// Row-normalized adjacency; empty rows stay zero.
inline Mat mean_matrix(const ample::Graph& g) {
  Mat a = count_adjacency(g);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double deg = a.row(i).sum();
    if (deg > 0) a.row(i) /= deg;
  }
  return a;
}

inline Mat sage_messages(const Mat& x, const ample::LayerWeights& w, ample::Activation sigma) {
  Mat z = x * to_eigen(w.w3).transpose();
  const Eigen::Map<const Eigen::RowVectorXd> b(w.b.data(), static_cast<Eigen::Index>(w.b.size()));
  z.rowwise() += b;
  return act(z, sigma);
}

inline Mat sage(const ample::Graph& g, const Mat& x, const ample::LayerWeights& w, ample::Activation sigma) {
  return x * to_eigen(w.w1).transpose() +
         mean_matrix(g) * sage_messages(x, w, sigma) * to_eigen(w.w2).transpose();
}

inline Mat layer(const ample::Graph& g, const Mat& x, const ample::ModelConfig& cfg, const ample::LayerWeights& w) {
  switch (cfg.kind) {
    case ample::ModelKind::GCN: return gcn(g, x, w);
    case ample::ModelKind::GIN: return gin(g, x, w);
    case ample::ModelKind::GraphSAGE: return sage(g, x, w, cfg.sigma);
  }
  return {};
}

inline double max_relative_error(const Mat& a, const Mat& b) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-12);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace oracle
