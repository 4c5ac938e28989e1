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

#include "ample/gnn.hpp"

#include <cmath>

#include "ample/rng.hpp"

namespace ample {

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::GCN: return "gcn";
    case ModelKind::GIN: return "gin";
    case ModelKind::GraphSAGE: return "sage";
  }
  return "?";
}

std::string_view to_string(Aggregation a) { return a == Aggregation::Sum ? "sum" : "mean"; }

std::string_view to_string(Placement p) {
  switch (p) {
    case Placement::None: return "none";
    case Placement::Aggregation: return "aggregation";
    case Placement::Transformation: return "transformation";
  }
  return "?";
}

std::string_view to_string(Activation a) { return a == Activation::ReLU ? "relu" : "identity"; }

ModelKind parse_model_kind(std::string_view s) {
  if (s == "gcn") return ModelKind::GCN;
  if (s == "gin") return ModelKind::GIN;
  if (s == "sage" || s == "graphsage") return ModelKind::GraphSAGE;
  throw ConfigError("unknown model kind '" + std::string(s) + "'");
}

Activation parse_activation(std::string_view s) {
  if (s == "relu") return Activation::ReLU;
  if (s == "identity") return Activation::Identity;
  throw ConfigError("unknown activation '" + std::string(s) + "'");
}

ModelConfig ModelConfig::gcn() {
  return {ModelKind::GCN, Aggregation::Sum, Placement::None, Placement::Aggregation, Activation::ReLU};
}

ModelConfig ModelConfig::gin() {
  return {ModelKind::GIN, Aggregation::Sum, Placement::Aggregation, Placement::None, Activation::ReLU};
}

ModelConfig ModelConfig::sage(Activation sigma) {
  return {ModelKind::GraphSAGE, Aggregation::Mean, Placement::Transformation, Placement::Transformation, sigma};
}

ModelConfig ModelConfig::preset(ModelKind k) {
  switch (k) {
    case ModelKind::GCN: return gcn();
    case ModelKind::GIN: return gin();
    case ModelKind::GraphSAGE: return sage();
  }
  throw ConfigError("unknown model kind");
}

std::size_t LayerWeights::word_count() const {
  std::size_t n = w.data().size() + w1.data().size() + w2.data().size() + w3.data().size() + b.size();
  for (const auto& l : mlp) n += l.weight.data().size() + l.bias.size();
  return n;
}

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  for (double& v : m.data()) v = rng.uniform(-bound, bound);
  return m;
}

std::vector<double> random_vector(std::size_t n, double bound, Rng& rng) {
  std::vector<double> v(n);
  for (double& e : v) e = rng.uniform(-bound, bound);
  return v;
}

// y = W v, accumulated in column order.
void linear(const Matrix& w, std::span<const double> v, std::span<double> y) {
  for (std::size_t f = 0; f < w.rows(); ++f) {
    double acc = 0.0;
    const auto row = w.row(f);
    for (std::size_t k = 0; k < w.cols(); ++k) acc += row[k] * v[k];
    y[f] = acc;
  }
}

std::vector<double> apply_mlp(const std::vector<DenseLayer>& mlp, std::span<const double> in) {
  std::vector<double> h(in.begin(), in.end());
  for (const DenseLayer& l : mlp) {
    std::vector<double> y(l.weight.rows());
    linear(l.weight, h, y);
    for (std::size_t f = 0; f < y.size(); ++f) {
      if (!l.bias.empty()) y[f] += l.bias[f];
      y[f] = apply_activation(l.activation, y[f]);
    }
    h = std::move(y);
  }
  return h;
}

void check_rows(const Graph& g, const FeatureMatrix& x) {
  if (x.rows() != g.num_nodes()) {
    throw ShapeError("feature matrix has " + std::to_string(x.rows()) + " rows, graph has " +
                     std::to_string(g.num_nodes()) + " nodes");
  }
}

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                     ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Visits N(i) u {i} in ascending ID order with GCN coefficients. The self
// term goes after any stored self-loop edges.
template <class Fn>
void for_each_normalized(const Graph& g, const std::vector<double>& dhat, NodeId i, Fn&& fn) {
  const auto ids = g.neighbor_ids(i);
  const auto wts = g.neighbor_weights(i);
  bool self_done = false;
  for (std::size_t e = 0; e < ids.size(); ++e) {
    if (!self_done && ids[e] > i) {
      fn(i, 1.0 / std::sqrt(dhat[i] * dhat[i]));
      self_done = true;
    }
    fn(ids[e], wts[e] / std::sqrt(dhat[ids[e]] * dhat[i]));
  }
  if (!self_done) fn(i, 1.0 / std::sqrt(dhat[i] * dhat[i]));
}

}  // namespace

LayerWeights make_random_weights(ModelKind kind, const LayerDims& dims, Rng& rng, double eps) {
  LayerWeights w;
  switch (kind) {
    case ModelKind::GCN:
      w.w = random_matrix(dims.out, dims.in, rng);
      break;
    case ModelKind::GIN: {
      w.eps = eps;
      DenseLayer l1{random_matrix(dims.hidden, dims.in, rng), {}, Activation::ReLU};
      l1.bias = random_vector(dims.hidden, 1.0 / std::sqrt(static_cast<double>(dims.in)), rng);
      DenseLayer l2{random_matrix(dims.out, dims.hidden, rng), {}, Activation::Identity};
      l2.bias = random_vector(dims.out, 1.0 / std::sqrt(static_cast<double>(dims.hidden)), rng);
      w.mlp = {std::move(l1), std::move(l2)};
      break;
    }
    case ModelKind::GraphSAGE:
      w.w3 = random_matrix(dims.hidden, dims.in, rng);
      w.b = random_vector(dims.hidden, 1.0 / std::sqrt(static_cast<double>(dims.in)), rng);
      w.w1 = random_matrix(dims.out, dims.in, rng);
      w.w2 = random_matrix(dims.out, dims.hidden, rng);
      break;
  }
  return w;
}

FeatureMatrix make_random_features(std::size_t n, std::size_t d, Rng& rng) {
  FeatureMatrix x(n, d);
  for (double& v : x.data()) v = rng.uniform(-1.0, 1.0);
  return x;
}

std::size_t message_width(const ModelConfig& cfg, const LayerWeights& w, std::size_t in_dim) {
  if (cfg.kind == ModelKind::GraphSAGE || !w.w3.empty()) return w.w3.rows();
  return in_dim;
}

std::size_t output_width(const ModelConfig& cfg, const LayerWeights& w) {
  switch (cfg.kind) {
    case ModelKind::GCN: return w.w.rows();
    case ModelKind::GIN: return w.mlp.empty() ? 0 : w.mlp.back().weight.rows();
    case ModelKind::GraphSAGE: return w.w1.rows();
  }
  return 0;
}

void validate_layer(const ModelConfig& cfg, const LayerWeights& w, std::size_t in_dim) {
  switch (cfg.kind) {
    case ModelKind::GCN:
      if (w.w.empty()) throw ShapeError("GCN layer needs W");
      require_shape(w.w, w.w.rows(), in_dim, "GCN W");
      break;
    case ModelKind::GIN: {
      if (w.mlp.empty()) throw ShapeError("GIN layer needs a non-empty MLP");
      if (!(w.eps >= 0.0)) throw ShapeError("GIN eps must be >= 0");
      std::size_t width = in_dim;
      for (const auto& l : w.mlp) {
        require_shape(l.weight, l.weight.rows(), width, "GIN MLP weight");
        if (!l.bias.empty() && l.bias.size() != l.weight.rows()) throw ShapeError("GIN MLP bias size");
        width = l.weight.rows();
      }
      break;
    }
    case ModelKind::GraphSAGE:
      if (w.w1.empty() || w.w2.empty() || w.w3.empty()) throw ShapeError("GraphSAGE layer needs W1, W2, W3");
      require_shape(w.w3, w.w3.rows(), in_dim, "SAGE W3");
      if (w.b.size() != w.w3.rows()) throw ShapeError("SAGE b must match W3 rows");
      require_shape(w.w1, w.w1.rows(), in_dim, "SAGE W1");
      require_shape(w.w2, w.w1.rows(), w.w3.rows(), "SAGE W2");
      break;
  }
}

double apply_activation(Activation a, double v) {
  return a == Activation::ReLU ? (v > 0.0 ? v : 0.0) : v;
}

std::vector<double> gcn_norm_factors(const Graph& g) {
  std::vector<double> d(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    double s = 1.0;
    for (double w : g.neighbor_weights(static_cast<NodeId>(i))) s += w;
    d[i] = s;
  }
  return d;
}

FeatureMatrix gcn_layer(const Graph& g, const FeatureMatrix& x, const LayerWeights& w) {
  check_rows(g, x);
  validate_layer(ModelConfig::gcn(), w, x.cols());
  const auto dhat = gcn_norm_factors(g);
  FeatureMatrix out(g.num_nodes(), w.w.rows());
  std::vector<double> m(x.cols());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    std::fill(m.begin(), m.end(), 0.0);
    for_each_normalized(g, dhat, i, [&](NodeId j, double c) {
      const auto xj = x.row(j);
      for (std::size_t k = 0; k < m.size(); ++k) m[k] += c * xj[k];
    });
    linear(w.w, m, out.row(i));
  }
  return out;
}

FeatureMatrix gin_layer(const Graph& g, const FeatureMatrix& x, const LayerWeights& w) {
  check_rows(g, x);
  validate_layer(ModelConfig::gin(), w, x.cols());
  FeatureMatrix out(g.num_nodes(), w.mlp.back().weight.rows());
  std::vector<double> s(x.cols());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    std::fill(s.begin(), s.end(), 0.0);
    for (NodeId j : g.neighbor_ids(i)) {
      const auto xj = x.row(j);
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += xj[k];
    }
    const auto xi = x.row(i);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = (1.0 + w.eps) * xi[k] + s[k];
    const auto y = apply_mlp(w.mlp, s);
    std::copy(y.begin(), y.end(), out.row(i).begin());
  }
  return out;
}

FeatureMatrix sage_messages(const FeatureMatrix& x, const LayerWeights& w, Activation sigma) {
  FeatureMatrix msg(x.rows(), w.w3.rows());
  for (std::size_t j = 0; j < x.rows(); ++j) {
    auto r = msg.row(j);
    linear(w.w3, x.row(j), r);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = apply_activation(sigma, r[k] + w.b[k]);
  }
  return msg;
}

FeatureMatrix sage_layer(const Graph& g, const FeatureMatrix& x, const LayerWeights& w, Activation sigma) {
  check_rows(g, x);
  validate_layer(ModelConfig::sage(sigma), w, x.cols());
  const FeatureMatrix msg = sage_messages(x, w, sigma);
  const std::size_t f_out = w.w1.rows();
  FeatureMatrix out(g.num_nodes(), f_out);
  std::vector<double> m(msg.cols());
  std::vector<double> a(f_out);
  std::vector<double> b(f_out);
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    std::fill(m.begin(), m.end(), 0.0);
    const auto ids = g.neighbor_ids(i);
    for (NodeId j : ids) {
      const auto mj = msg.row(j);
      for (std::size_t k = 0; k < m.size(); ++k) m[k] += mj[k];
    }
    if (!ids.empty()) {
      const double deg = static_cast<double>(ids.size());
      for (double& v : m) v = v / deg;
    }
    linear(w.w1, x.row(i), a);
    linear(w.w2, m, b);
    auto o = out.row(i);
    for (std::size_t f = 0; f < f_out; ++f) o[f] = a[f] + b[f];
  }
  return out;
}

FeatureMatrix message_passing_layer(const Graph& g, const FeatureMatrix& x, const ModelConfig& cfg,
                                    const LayerWeights& w) {
  switch (cfg.kind) {
    case ModelKind::GCN: return gcn_layer(g, x, w);
    case ModelKind::GIN: return gin_layer(g, x, w);
    case ModelKind::GraphSAGE: return sage_layer(g, x, w, cfg.sigma);
  }
  throw ConfigError("message_passing_layer: unknown model kind");
}

FeatureMatrix generic_layer(const Graph& g, const FeatureMatrix& x, const ModelConfig& cfg,
                            const LayerWeights& w) {
  check_rows(g, x);
  const bool projected = !w.w3.empty();
  const FeatureMatrix msg = projected ? sage_messages(x, w, cfg.sigma) : FeatureMatrix{};
  const FeatureMatrix& phi = projected ? msg : x;
  const bool normalized = cfg.normalization == Placement::Aggregation;
  const auto dhat = normalized ? gcn_norm_factors(g) : std::vector<double>{};

  std::size_t f_out = 0;
  if (cfg.residual == Placement::Transformation) f_out = w.w1.rows();
  else if (!w.mlp.empty()) f_out = w.mlp.back().weight.rows();
  else f_out = w.w.rows();
  if (f_out == 0) throw ShapeError("generic_layer: no transformation weights");

  FeatureMatrix out(g.num_nodes(), f_out);
  std::vector<double> m(phi.cols());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    std::fill(m.begin(), m.end(), 0.0);
    const auto ids = g.neighbor_ids(i);
    // phi and A
    if (normalized) {
      for_each_normalized(g, dhat, i, [&](NodeId j, double c) {
        const auto r = phi.row(j);
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += c * r[k];
      });
    } else {
      for (NodeId j : ids) {
        const auto r = phi.row(j);
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += r[k];
      }
    }
    if (cfg.aggregation == Aggregation::Mean && !ids.empty()) {
      const double deg = static_cast<double>(ids.size());
      for (double& v : m) v = v / deg;
    }
    const auto xi = x.row(i);
    if (cfg.residual == Placement::Aggregation) {
      if (m.size() != xi.size()) throw ShapeError("generic_layer: residual width mismatch");
      for (std::size_t k = 0; k < m.size(); ++k) m[k] = (1.0 + w.eps) * xi[k] + m[k];
    }
    // gamma
    auto o = out.row(i);
    if (cfg.residual == Placement::Transformation) {
      std::vector<double> a(f_out);
      std::vector<double> b(f_out);
      linear(w.w1, xi, a);
      linear(w.w2, m, b);
      for (std::size_t f = 0; f < f_out; ++f) o[f] = a[f] + b[f];
    } else if (!w.mlp.empty()) {
      const auto y = apply_mlp(w.mlp, m);
      std::copy(y.begin(), y.end(), o.begin());
    } else {
      linear(w.w, m, o);
    }
  }
  return out;
}

FeatureMatrix run_model(const Graph& g, const FeatureMatrix& x, const ModelConfig& cfg,
                        const std::vector<LayerWeights>& layers) {
  FeatureMatrix h = x;
  for (const auto& l : layers) h = message_passing_layer(g, h, cfg, l);
  return h;
}

}  // namespace ample
