// SPDX-License-Identifier: Apache-2.0
//
// beamwave: beamforming and device scheduling for superimposed
// multicast-unicast transmissions in mmWave networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "beamwave/config.hpp"
#include "beamwave/evaluation.hpp"

namespace beamwave::harness
{

/// One sweep axis: config fields and their value tuples. A single-field axis
/// lists plain values; multiple fields vary together (zipped), e.g. k and
/// k_prime moving in lockstep. Distinct axes combine as a cartesian product.
struct SweepAxis
{
    std::vector<std::string> fields;
    std::vector<std::vector<double>> values; ///< one tuple per grid point
};

struct SweepSpec
{
    std::vector<SweepAxis> axes; ///< empty means a single cell
    std::vector<evaluation::SchemeKind> schemes;
};

/// Parses the plain-text key-value config (see README for the schema):
/// top-level `key = value` lines fill SystemConfig; a `[sweep]` section
/// declares axes (`field = v1 v2 ...`), an optional `zip = f1 f2` line to
/// tie axes together, and the scheme list. Unset fields take the reference
/// defaults; the BEAMWAVE_MASTER_SEED environment variable, when set,
/// overrides master_seed.
std::pair<SystemConfig, SweepSpec> parse_config(const std::string &text);

/// Inverse of parse_config for the SystemConfig part (round-trip stable).
std::string serialize_config(const SystemConfig &cfg, const SweepSpec &sweep);

/// One grid point of a sweep: the resolved config and a readable label.
struct CellSpec
{
    int index = 0;
    SystemConfig cfg;
    std::string label;
};

struct ResultRow
{
    int cell = 0;
    int seed = 0;
    evaluation::ScenarioResult result;
    std::uint64_t channel_fingerprint = 0;
};

struct AggregateRow
{
    int cell = 0;
    evaluation::SchemeKind scheme;
    int n_seeds = 0;
    int n_feasible = 0;
    double feasible_rate = 0.0;
    double mean_min_unicast_sinr = 0.0;
    double std_min_unicast_sinr = 0.0;
    double mean_unicast_se = 0.0;
    double std_unicast_se = 0.0;
    double mean_min_multicast_sinr = 0.0;
    double mean_iterations = 0.0;
    double mean_runtime_ms = 0.0;
};

struct ResultTable
{
    std::vector<CellSpec> cells;
    std::vector<evaluation::SchemeKind> schemes;
    std::vector<ResultRow> rows; ///< ordered by (cell, seed, scheme)

    /// Per-(cell, scheme) means over feasible seeds, recomputable from rows.
    std::vector<AggregateRow> aggregate() const;
};

/// Expands the sweep grid against the base config; throws on invalid cells.
std::vector<CellSpec> expand_cells(const SystemConfig &base, const SweepSpec &sweep);

/// Runs every (cell, seed, scheme) combination. Each seed's channel set is
/// generated once per cell and shared by all schemes; rows are bit-identical
/// for any worker count. Per-seed infeasibility is recorded (feasible=false),
/// not propagated.
ResultTable run_experiment(const SystemConfig &cfg, const SweepSpec &sweep, int workers = 0);

/// Writes results.csv (one row per cell/seed/scheme) and aggregate.csv into
/// the destination directory. Floats carry 15 significant digits.
void emit_csv(const ResultTable &table, const std::string &destination_dir);

/// Channel set of one seed of one cell, exactly as run_experiment derives it.
std::vector<channel::ChannelMatrix> channels_for_seed(const SystemConfig &cfg, int seed);

} // namespace beamwave::harness
