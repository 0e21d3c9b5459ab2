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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "beamwave/harness.hpp"

namespace
{

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int cmd_run(const std::string &config_path, const std::string &out_dir, int workers)
{
    const auto [cfg, sweep] = beamwave::harness::parse_config(read_file(config_path));
    const beamwave::harness::ResultTable table =
        beamwave::harness::run_experiment(cfg, sweep, workers);
    beamwave::harness::emit_csv(table, out_dir);
    std::cout << "wrote " << table.rows.size() << " result rows over " << table.cells.size()
              << " cells to " << out_dir << "\n";
    return 0;
}

int cmd_schedule(const std::string &theta_path, int k_prime)
{
    std::ifstream in(theta_path);
    if (!in)
    {
        throw std::runtime_error("cannot open '" + theta_path + "'");
    }
    const beamwave::metrics::DiscordanceMatrix theta = beamwave::metrics::read_csv(in);
    const beamwave::scheduler::ScheduleDecision decision =
        beamwave::scheduler::solve_schedule(theta, k_prime);
    std::cout << "selected:";
    for (int idx : decision.selected)
    {
        std::cout << ' ' << idx;
    }
    std::cout << "\nobjective: ";
    std::cout.precision(15);
    std::cout << decision.objective << "\n";
    return 0;
}

int cmd_metrics(const std::string &dump_path, const std::string &kind_name, double omega)
{
    std::ifstream in(dump_path);
    if (!in)
    {
        throw std::runtime_error("cannot open '" + dump_path + "'");
    }
    const std::vector<beamwave::channel::ChannelDumpRecord> records =
        beamwave::channel::read_channel_dump(in);
    if (records.size() < 2)
    {
        throw std::runtime_error("channel dump holds fewer than two devices");
    }
    std::vector<beamwave::channel::ChannelMatrix> channels;
    channels.reserve(records.size());
    for (const beamwave::channel::ChannelDumpRecord &rec : records)
    {
        channels.push_back(beamwave::channel::channel_from_paths(rec.geom, rec.paths));
    }
    beamwave::metrics::MetricKind kind;
    kind.tag = beamwave::metrics::metric_tag_from_string(kind_name);
    kind.omega = omega;
    const beamwave::metrics::DiscordanceMatrix theta =
        beamwave::metrics::discordance_matrix(channels, kind);
    beamwave::metrics::write_csv(std::cout, theta);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"beamwave: cross-layer beamforming and scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    int workers = 0;
    CLI::App *run = app.add_subcommand("run", "run a Monte-Carlo experiment sweep");
    run->add_option("--config", config_path, "experiment configuration file")->required();
    run->add_option("--out", out_dir, "output directory for CSV files");
    run->add_option("--workers", workers, "worker threads (0 = hardware concurrency)");

    std::string theta_path;
    int k_prime = 0;
    CLI::App *schedule = app.add_subcommand("schedule", "solve a scheduling instance from CSV");
    schedule->add_option("--theta", theta_path, "discordance matrix CSV")->required();
    schedule->add_option("--k-prime", k_prime, "number of devices to select")->required();

    std::string dump_path;
    std::string kind_name = "king";
    double omega = 0.5;
    CLI::App *metrics = app.add_subcommand("metrics", "discordance matrix from a channel dump");
    metrics->add_option("--channels", dump_path, "channel dump CSV")->required();
    metrics->add_option("--kind", kind_name, "metric: corr|pawn|rook|king");
    metrics->add_option("--omega", omega, "energy/correlation weight for rook and king");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
        {
            return cmd_run(config_path, out_dir, workers);
        }
        if (schedule->parsed())
        {
            return cmd_schedule(theta_path, k_prime);
        }
        if (metrics->parsed())
        {
            return cmd_metrics(dump_path, kind_name, omega);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
