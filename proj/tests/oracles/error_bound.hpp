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

// Worst-case error of the integer datapath against exact arithmetic, for one
// layer. Each quantize step contributes at most half a step; a product of
// quantized weights Wq and quantized input vq against exact W and v obeys
//   |Wq vq - W v| <= sum_c (|W| + sW/2)(e_c + sv/2) + (sW/2)|v_c|
// where e is the error already on the input and sv <= (max|v| + max e) / q_max.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ample/gnn.hpp"
#include "ample/graph.hpp"
#include "ample/quant.hpp"

namespace oracle {

inline double qmax_of(ample::Precision p) { return p == ample::Precision::Int8 ? 127.0 : 7.0; }

inline double sym_scale(const std::vector<double>& v, double qmax) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return std::max(m / qmax, 1e-12);
}

inline double weight_scale(const ample::Matrix& w, double qmax) {
  double m = 0.0;
  for (double x : w.data()) m = std::max(m, std::abs(x));
  return std::max(m / qmax, 1e-12);
}

// Bound for y = W v when v carries error e; v is the exact input.
inline std::vector<double> linear_bound(const ample::Matrix& w, const std::vector<double>& v,
                                        const std::vector<double>& e, double qmax) {
  const double sw = weight_scale(w, qmax);
  double vmax = 0.0;
  double emax = 0.0;
  for (std::size_t c = 0; c < v.size(); ++c) {
    vmax = std::max(vmax, std::abs(v[c]));
    emax = std::max(emax, e[c]);
  }
  const double sv = std::max((vmax + emax) / qmax, 1e-12);
  std::vector<double> out(w.rows(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r) {
    double b = 0.0;
    for (std::size_t c = 0; c < w.cols(); ++c) {
      b += (std::abs(w(r, c)) + sw / 2) * (e[c] + sv / 2) + (sw / 2) * std::abs(v[c]);
    }
    out[r] = b;
  }
  return out;
}

inline std::vector<double> matvec(const ample::Matrix& w, const std::vector<double>& v) {
  std::vector<double> y(w.rows(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) y[r] += w(r, c) * v[c];
  return y;
}

/// Per-node, per-feature bound on |simulated - exact| for a single layer.
/// Float nodes get a small rounding allowance only.
inline ample::Matrix quantized_error_bound(const ample::Graph& g, const ample::FeatureMatrix& x,
                                           const ample::ModelConfig& cfg, const ample::LayerWeights& w,
                                           const ample::PrecisionAssignment& assign) {
  using ample::ModelKind;
  const std::size_t n = g.num_nodes();
  const ample::FeatureMatrix table =
      cfg.kind == ModelKind::GraphSAGE ? ample::sage_messages(x, w, cfg.sigma) : x;
  const std::vector<double> table_v(table.data().begin(), table.data().end());
  const std::vector<double> x_v(x.data().begin(), x.data().end());

  // Exact aggregate, computed independently of the library.
  std::vector<double> dhat(n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (double wt : g.neighbor_weights(static_cast<ample::NodeId>(i))) dhat[i] += wt;

  const std::size_t fout = ample::output_width(cfg, w);
  ample::Matrix bound(n, fout);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = assign.precision[i];
    const auto id = static_cast<ample::NodeId>(i);
    const auto ids = g.neighbor_ids(id);
    const auto wts = g.neighbor_weights(id);
    const std::size_t width = table.cols();
    std::vector<double> m(width, 0.0);
    for (std::size_t e = 0; e < ids.size(); ++e) {
      const double c = cfg.kind == ModelKind::GCN ? wts[e] / std::sqrt(dhat[ids[e]] * dhat[i]) : 1.0;
      for (std::size_t k = 0; k < width; ++k) m[k] += c * table(ids[e], k);
    }
    const double deg = static_cast<double>(ids.size());
    if (cfg.kind == ModelKind::GCN)
      for (std::size_t k = 0; k < width; ++k) m[k] += x(i, k) / dhat[i];
    if (cfg.kind == ModelKind::GraphSAGE && deg > 0)
      for (double& v : m) v /= deg;
    if (cfg.kind == ModelKind::GIN)
      for (std::size_t k = 0; k < width; ++k) m[k] += (1.0 + w.eps) * x(i, k);

    if (p == ample::Precision::Float32) {
      // Reassociation only.
      double mag = 1.0;
      for (double v : m) mag = std::max(mag, std::abs(v));
      for (std::size_t f = 0; f < fout; ++f) bound(i, f) = 1e-9 * mag;
      continue;
    }
    const double qmax = qmax_of(p);
    const double s = sym_scale(table_v, qmax);
    double agg_err = 0.0;
    switch (cfg.kind) {
      case ModelKind::GCN: agg_err = (deg + 1.0) * s / 2; break;
      case ModelKind::GIN: agg_err = deg * s / 2 + (1.0 + w.eps) * sym_scale(x_v, qmax) / 2; break;
      case ModelKind::GraphSAGE: agg_err = deg > 0 ? s / 2 : 0.0; break;
    }
    agg_err *= 1.0 + 1e-9;
    std::vector<double> e(width, agg_err);

    std::vector<double> out;
    if (cfg.kind == ModelKind::GraphSAGE) {
      const std::vector<double> xi(x.row(i).begin(), x.row(i).end());
      const auto b1 = linear_bound(w.w1, xi, std::vector<double>(xi.size(), 0.0), qmax);
      const auto b2 = linear_bound(w.w2, m, e, qmax);
      out.resize(fout);
      for (std::size_t f = 0; f < fout; ++f) out[f] = b1[f] + b2[f];
    } else if (cfg.kind == ModelKind::GIN) {
      std::vector<double> h = m;
      std::vector<double> he = e;
      for (const auto& l : w.mlp) {
        auto nb = linear_bound(l.weight, h, he, qmax);
        auto y = matvec(l.weight, h);
        for (std::size_t f = 0; f < y.size(); ++f) {
          if (!l.bias.empty()) y[f] += l.bias[f];
          y[f] = ample::apply_activation(l.activation, y[f]);
        }
        h = std::move(y);
        he = std::move(nb);
      }
      out = he;
    } else {
      out = linear_bound(w.w, m, e, qmax);
    }
    for (std::size_t f = 0; f < fout; ++f) bound(i, f) = out[f] * (1.0 + 1e-9) + 1e-12;
  }
  return bound;
}

}  // namespace oracle
