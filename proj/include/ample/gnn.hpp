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

#include <string>
#include <string_view>
#include <vector>

#include "ample/graph.hpp"
#include "ample/matrix.hpp"

namespace ample {

class Rng;

enum class ModelKind { GCN, GIN, GraphSAGE };
enum class Aggregation { Sum, Mean };
enum class Placement { None, Aggregation, Transformation };
enum class Activation { Identity, ReLU };

std::string_view to_string(ModelKind k);
std::string_view to_string(Aggregation a);
std::string_view to_string(Placement p);
std::string_view to_string(Activation a);
ModelKind parse_model_kind(std::string_view s);
Activation parse_activation(std::string_view s);

/// Which parts of the generic update law a model turns on.
///  - normalization = Aggregation: messages scaled by e_ji / sqrt(d_j d_i)
///    and the self term x_i / d_i added to the sum.
///  - residual = Aggregation: (1 + eps) x_i added to the aggregate.
///  - residual = Transformation: update is W1 x_i + W2 m_i.
///  - normalization = Transformation: the 1/|N(i)| factor of the mean. It is
///    folded into the Mean aggregation, so it changes no arithmetic.
struct ModelConfig {
  ModelKind kind = ModelKind::GCN;
  Aggregation aggregation = Aggregation::Sum;
  Placement residual = Placement::None;
  Placement normalization = Placement::Aggregation;
  Activation sigma = Activation::ReLU;

  static ModelConfig gcn();
  static ModelConfig gin();
  static ModelConfig sage(Activation sigma = Activation::ReLU);
  static ModelConfig preset(ModelKind k);

  bool operator==(const ModelConfig&) const = default;
};

struct DenseLayer {
  Matrix weight;             // out x in
  std::vector<double> bias;  // out, or empty for no bias
  Activation activation = Activation::Identity;
};

/// Parameters for one layer. Which members are used depends on the model:
/// GCN uses w; GIN uses mlp and eps; GraphSAGE uses w1, w2, w3 and b.
struct LayerWeights {
  Matrix w;
  std::vector<DenseLayer> mlp;
  double eps = 0.0;
  Matrix w1;
  Matrix w2;
  Matrix w3;
  std::vector<double> b;

  // Total scalar parameter count, used for Weight Bank transfer sizing.
  std::size_t word_count() const;
};

struct LayerDims {
  std::size_t in = 16;
  std::size_t hidden = 16;  // GIN MLP hidden width, GraphSAGE message width
  std::size_t out = 16;
};

/// Random weights, uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]. GIN gets a
/// two-layer MLP (ReLU, then identity).
LayerWeights make_random_weights(ModelKind kind, const LayerDims& dims, Rng& rng, double eps = 0.1);

FeatureMatrix make_random_features(std::size_t n, std::size_t d, Rng& rng);

// Width of the vector each neighbor contributes (D_in, or the SAGE hidden width).
std::size_t message_width(const ModelConfig& cfg, const LayerWeights& w, std::size_t in_dim);
std::size_t output_width(const ModelConfig& cfg, const LayerWeights& w);

// Throws ShapeError when weights do not fit in_dim or each other.
void validate_layer(const ModelConfig& cfg, const LayerWeights& w, std::size_t in_dim);

double apply_activation(Activation a, double v);

/// d_i = 1 + sum of the weights in row i.
std::vector<double> gcn_norm_factors(const Graph& g);

FeatureMatrix gcn_layer(const Graph& g, const FeatureMatrix& x, const LayerWeights& w);
FeatureMatrix gin_layer(const Graph& g, const FeatureMatrix& x, const LayerWeights& w);
FeatureMatrix sage_layer(const Graph& g, const FeatureMatrix& x, const LayerWeights& w,
                         Activation sigma = Activation::ReLU);

// sigma(W3 x_j + b) for every node: the GraphSAGE message table.
FeatureMatrix sage_messages(const FeatureMatrix& x, const LayerWeights& w, Activation sigma);

/// Dispatches on cfg.kind to the layer ops above.
FeatureMatrix message_passing_layer(const Graph& g, const FeatureMatrix& x, const ModelConfig& cfg,
                                    const LayerWeights& w);

/// Builds phi, A and gamma from the cfg fields alone (kind is ignored):
/// phi is sigma(W3 x_j + b) when w3 is set, gamma is W1 x + W2 m when
/// residual = Transformation, the MLP when one is given, else W m.
/// Accumulation order matches the specialized ops, so presets agree bit for bit.
FeatureMatrix generic_layer(const Graph& g, const FeatureMatrix& x, const ModelConfig& cfg,
                            const LayerWeights& w);

// Sequential application of message_passing_layer.
FeatureMatrix run_model(const Graph& g, const FeatureMatrix& x, const ModelConfig& cfg,
                        const std::vector<LayerWeights>& layers);

}  // namespace ample
