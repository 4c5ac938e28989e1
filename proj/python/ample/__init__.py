# Copyright 2026 The amplesim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for the amplesim GNN accelerator simulator."""

from ._ample import (  # noqa: F401
    Graph,
    Workload,
    build_csr,
    build_workload,
    calibrate,
    choose_slot,
    config_keys,
    default_config,
    degree_quant_assign,
    dequantize,
    gcn_layer,
    gcn_norm_factors,
    generate_power_law_graph,
    gin_layer,
    load_edge_list,
    nodeslot_allocation,
    protection_probabilities,
    quantize,
    reference,
    route_flit,
    sage_layer,
    simulate,
)

__version__ = "0.1.0"
