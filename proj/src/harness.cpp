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

#include "beamwave/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "beamwave/errors.hpp"

namespace beamwave::harness
{

namespace
{

constexpr std::uint64_t kChannelPurpose = 0x6368616e6e656cULL; // "channel"
constexpr std::uint64_t kSchedulePurpose = 0x72616e64ULL;      // "rand"

std::string trim(const std::string &s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
    {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_words(const std::string &s)
{
    std::vector<std::string> out;
    std::string word;
    std::istringstream stream(s);
    while (stream >> word)
    {
        while (!word.empty() && word.back() == ',')
        {
            word.pop_back();
        }
        if (!word.empty())
        {
            out.push_back(word);
        }
    }
    return out;
}

using FieldSetter = std::function<void(SystemConfig &, double)>;

const std::map<std::string, FieldSetter> &field_setters()
{
    static const std::map<std::string, FieldSetter> setters = {
        {"k", [](SystemConfig &c, double v) { c.k = static_cast<int>(v); }},
        {"k_prime", [](SystemConfig &c, double v) { c.k_prime = static_cast<int>(v); }},
        {"n_tx", [](SystemConfig &c, double v) { c.n_tx = static_cast<int>(v); }},
        {"n_rx", [](SystemConfig &c, double v) { c.n_rx = static_cast<int>(v); }},
        {"l_rx", [](SystemConfig &c, double v) { c.l_rx = static_cast<int>(v); }},
        {"p_tx_dbm", [](SystemConfig &c, double v) { c.p_tx_dbm = v; }},
        {"p_rx_dbm", [](SystemConfig &c, double v) { c.p_rx_dbm = v; }},
        {"sigma2_dbm", [](SystemConfig &c, double v) { c.sigma2_dbm = v; }},
        {"gamma_min", [](SystemConfig &c, double v) { c.gamma_min = v; }},
        {"omega", [](SystemConfig &c, double v) { c.omega = v; }},
        {"n_conv", [](SystemConfig &c, double v) { c.n_conv = static_cast<int>(v); }},
        {"epsilon", [](SystemConfig &c, double v) { c.epsilon = v; }},
        {"paths", [](SystemConfig &c, double v) { c.paths = static_cast<int>(v); }},
        {"spacing_ratio", [](SystemConfig &c, double v) { c.spacing_ratio = v; }},
        {"aoa_min", [](SystemConfig &c, double v) { c.aoa_range.lo = v; }},
        {"aoa_max", [](SystemConfig &c, double v) { c.aoa_range.hi = v; }},
        {"aod_min", [](SystemConfig &c, double v) { c.aod_range.lo = v; }},
        {"aod_max", [](SystemConfig &c, double v) { c.aod_range.hi = v; }},
        {"master_seed",
         [](SystemConfig &c, double v) { c.master_seed = static_cast<std::uint64_t>(v); }},
        {"n_seeds", [](SystemConfig &c, double v) { c.n_seeds = static_cast<int>(v); }},
        {"xhaus_cap", [](SystemConfig &c, double v) { c.xhaus_cap = static_cast<int>(v); }},
    };
    return setters;
}

void set_field(SystemConfig &cfg, const std::string &field, double value)
{
    const auto it = field_setters().find(field);
    if (it == field_setters().end())
    {
        throw std::invalid_argument("unknown config field '" + field + "'");
    }
    it->second(cfg, value);
}

double parse_number(const std::string &field, const std::string &value)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
        {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    }
    catch (const std::exception &)
    {
        throw std::invalid_argument("config field '" + field + "': cannot parse value '" + value +
                                    "'");
    }
}

std::string format_double(double v)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

} // namespace

void SystemConfig::validate() const
{
    auto required = [](int v, const char *name) {
        if (v == 0)
        {
            throw std::invalid_argument(std::string("missing required field '") + name + "'");
        }
        if (v < 0)
        {
            throw std::invalid_argument(std::string("field '") + name + "' must be positive");
        }
    };
    required(k, "k");
    required(k_prime, "k_prime");
    required(n_tx, "n_tx");
    if (k_prime > k)
    {
        throw std::invalid_argument("field 'k_prime' must not exceed 'k'");
    }
    if (k_prime > n_tx)
    {
        throw std::invalid_argument("field 'k_prime' must not exceed 'n_tx'");
    }
    if (n_rx < 1)
    {
        throw std::invalid_argument("field 'n_rx' must be positive");
    }
    if (l_rx < 2)
    {
        throw std::invalid_argument("field 'l_rx' must be at least 2");
    }
    if (!(gamma_min > 0.0))
    {
        throw std::invalid_argument("field 'gamma_min' must be positive");
    }
    if (omega < 0.0 || omega > 1.0)
    {
        throw std::invalid_argument("field 'omega' must lie in [0, 1]");
    }
    if (n_conv < 1)
    {
        throw std::invalid_argument("field 'n_conv' must be positive");
    }
    if (!(epsilon > 0.0))
    {
        throw std::invalid_argument("field 'epsilon' must be positive");
    }
    if (paths < 1)
    {
        throw std::invalid_argument("field 'paths' must be positive");
    }
    if (!(spacing_ratio > 0.0))
    {
        throw std::invalid_argument("field 'spacing_ratio' must be positive");
    }
    if (n_seeds < 1)
    {
        throw std::invalid_argument("field 'n_seeds' must be positive");
    }
    if (xhaus_cap < 1)
    {
        throw std::invalid_argument("field 'xhaus_cap' must be positive");
    }
    if (aoa_range.lo > aoa_range.hi || aod_range.lo > aod_range.hi)
    {
        throw std::invalid_argument("angle ranges must satisfy lo <= hi");
    }
}

std::pair<SystemConfig, SweepSpec> parse_config(const std::string &text)
{
    SystemConfig cfg;
    SweepSpec sweep;

    // Raw sweep axes in declaration order, later folded by zip groups.
    std::vector<SweepAxis> raw_axes;
    std::vector<std::vector<std::string>> zip_groups;

    bool in_sweep = false;
    std::istringstream stream(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(stream, raw_line))
    {
        ++line_no;
        std::string line = raw_line;
        const auto comment = line.find('#');
        if (comment != std::string::npos)
        {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty())
        {
            continue;
        }
        if (line.front() == '[')
        {
            if (line == "[sweep]")
            {
                in_sweep = true;
                continue;
            }
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown section '" + line + "'");
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
        {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key or value");
        }

        if (!in_sweep)
        {
            set_field(cfg, key, parse_number(key, value));
            continue;
        }
        if (key == "schemes")
        {
            for (const std::string &name : split_words(value))
            {
                sweep.schemes.push_back(evaluation::scheme_from_string(name, cfg.omega));
            }
            continue;
        }
        if (key == "zip")
        {
            zip_groups.push_back(split_words(value));
            continue;
        }
        SweepAxis axis;
        axis.fields = {key};
        for (const std::string &word : split_words(value))
        {
            axis.values.push_back({parse_number(key, word)});
        }
        if (axis.values.empty())
        {
            throw std::invalid_argument("sweep axis '" + key + "' has no values");
        }
        if (key == "master_seed" || key == "n_seeds")
        {
            throw std::invalid_argument("'" + key + "' cannot be a sweep axis");
        }
        if (field_setters().find(key) == field_setters().end())
        {
            throw std::invalid_argument("unknown sweep field '" + key + "'");
        }
        raw_axes.push_back(std::move(axis));
    }

    // Fold zipped fields into shared axes.
    for (const std::vector<std::string> &group : zip_groups)
    {
        if (group.size() < 2)
        {
            throw std::invalid_argument("zip needs at least two fields");
        }
        SweepAxis merged;
        std::size_t count = 0;
        for (const std::string &field : group)
        {
            auto it = std::find_if(raw_axes.begin(), raw_axes.end(), [&](const SweepAxis &a) {
                return a.fields.size() == 1 && a.fields[0] == field;
            });
            if (it == raw_axes.end())
            {
                throw std::invalid_argument("zip references missing axis '" + field + "'");
            }
            if (merged.fields.empty())
            {
                count = it->values.size();
                merged.values.assign(count, {});
            }
            if (it->values.size() != count)
            {
                throw std::invalid_argument("zipped axes must have equal lengths");
            }
            merged.fields.push_back(field);
            for (std::size_t i = 0; i < count; ++i)
            {
                merged.values[i].push_back(it->values[i][0]);
            }
            raw_axes.erase(it);
        }
        raw_axes.push_back(std::move(merged));
    }
    sweep.axes = std::move(raw_axes);

    if (sweep.schemes.empty())
    {
        // Reference scheme set; exhaustive search stays opt-in.
        for (const char *name : {"random", "beamwave-corr", "beamwave-pawn", "beamwave-rook",
                                 "beamwave-king"})
        {
            sweep.schemes.push_back(evaluation::scheme_from_string(name, cfg.omega));
        }
    }

    if (const char *env = std::getenv("BEAMWAVE_MASTER_SEED"); env != nullptr && *env != '\0')
    {
        try
        {
            cfg.master_seed = std::stoull(env);
        }
        catch (const std::exception &)
        {
            throw std::invalid_argument("BEAMWAVE_MASTER_SEED is not an unsigned integer");
        }
    }

    cfg.validate();
    return {cfg, sweep};
}

std::string serialize_config(const SystemConfig &cfg, const SweepSpec &sweep)
{
    std::ostringstream os;
    os << "k = " << cfg.k << "\n";
    os << "k_prime = " << cfg.k_prime << "\n";
    os << "n_tx = " << cfg.n_tx << "\n";
    os << "n_rx = " << cfg.n_rx << "\n";
    os << "l_rx = " << cfg.l_rx << "\n";
    os << "p_tx_dbm = " << format_double(cfg.p_tx_dbm) << "\n";
    os << "p_rx_dbm = " << format_double(cfg.p_rx_dbm) << "\n";
    os << "sigma2_dbm = " << format_double(cfg.sigma2_dbm) << "\n";
    os << "gamma_min = " << format_double(cfg.gamma_min) << "\n";
    os << "omega = " << format_double(cfg.omega) << "\n";
    os << "n_conv = " << cfg.n_conv << "\n";
    os << "epsilon = " << format_double(cfg.epsilon) << "\n";
    os << "paths = " << cfg.paths << "\n";
    os << "spacing_ratio = " << format_double(cfg.spacing_ratio) << "\n";
    os << "aoa_min = " << format_double(cfg.aoa_range.lo) << "\n";
    os << "aoa_max = " << format_double(cfg.aoa_range.hi) << "\n";
    os << "aod_min = " << format_double(cfg.aod_range.lo) << "\n";
    os << "aod_max = " << format_double(cfg.aod_range.hi) << "\n";
    os << "master_seed = " << cfg.master_seed << "\n";
    os << "n_seeds = " << cfg.n_seeds << "\n";
    os << "xhaus_cap = " << cfg.xhaus_cap << "\n";
    os << "\n[sweep]\n";
    for (const SweepAxis &axis : sweep.axes)
    {
        for (std::size_t f = 0; f < axis.fields.size(); ++f)
        {
            os << axis.fields[f] << " =";
            for (const std::vector<double> &tuple : axis.values)
            {
                os << ' ' << format_double(tuple[f]);
            }
            os << "\n";
        }
        if (axis.fields.size() > 1)
        {
            os << "zip =";
            for (const std::string &field : axis.fields)
            {
                os << ' ' << field;
            }
            os << "\n";
        }
    }
    os << "schemes =";
    for (const evaluation::SchemeKind &scheme : sweep.schemes)
    {
        std::string name = evaluation::to_string(scheme);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        os << ' ' << name;
    }
    os << "\n";
    return os.str();
}

std::vector<CellSpec> expand_cells(const SystemConfig &base, const SweepSpec &sweep)
{
    std::vector<CellSpec> cells;
    std::vector<std::size_t> cursor(sweep.axes.size(), 0);
    while (true)
    {
        CellSpec cell;
        cell.cfg = base;
        std::ostringstream label;
        for (std::size_t a = 0; a < sweep.axes.size(); ++a)
        {
            const SweepAxis &axis = sweep.axes[a];
            const std::vector<double> &tuple = axis.values[cursor[a]];
            for (std::size_t f = 0; f < axis.fields.size(); ++f)
            {
                set_field(cell.cfg, axis.fields[f], tuple[f]);
                if (label.tellp() > 0)
                {
                    label << ' ';
                }
                label << axis.fields[f] << '=' << format_double(tuple[f]);
            }
        }
        cell.cfg.validate();
        cell.index = static_cast<int>(cells.size());
        cell.label = label.str().empty() ? "base" : label.str();
        cells.push_back(std::move(cell));

        // Advance the odometer; the last axis varies fastest.
        if (sweep.axes.empty())
        {
            break;
        }
        int a = static_cast<int>(sweep.axes.size()) - 1;
        while (a >= 0)
        {
            if (++cursor[static_cast<std::size_t>(a)] <
                sweep.axes[static_cast<std::size_t>(a)].values.size())
            {
                break;
            }
            cursor[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0)
        {
            break;
        }
    }
    return cells;
}

std::vector<channel::ChannelMatrix> channels_for_seed(const SystemConfig &cfg, int seed)
{
    std::vector<channel::ChannelMatrix> channels;
    channels.reserve(static_cast<std::size_t>(cfg.k));
    for (int device = 0; device < cfg.k; ++device)
    {
        Substream stream = Substream::derived(
            cfg.master_seed,
            {kChannelPurpose, static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(device)});
        channels.push_back(channel::generate_channel(stream, cfg.geometry(), cfg.paths,
                                                     cfg.aoa_range, cfg.aod_range));
    }
    return channels;
}

ResultTable run_experiment(const SystemConfig &cfg, const SweepSpec &sweep, int workers)
{
    cfg.validate();
    if (sweep.schemes.empty())
    {
        throw std::invalid_argument("run_experiment: sweep lists no schemes");
    }
    for (const SweepAxis &axis : sweep.axes)
    {
        if (axis.values.empty() || axis.fields.empty())
        {
            throw std::invalid_argument("run_experiment: empty sweep axis");
        }
    }

    ResultTable table;
    table.cells = expand_cells(cfg, sweep);
    table.schemes = sweep.schemes;
    const int n_cells = static_cast<int>(table.cells.size());
    const int n_seeds = cfg.n_seeds;
    const int n_schemes = static_cast<int>(sweep.schemes.size());
    table.rows.resize(static_cast<std::size_t>(n_cells) * n_seeds * n_schemes);

    if (workers <= 0)
    {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers < 1)
        {
            workers = 1;
        }
    }

    std::atomic<int> next_task{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int n_tasks = n_cells * n_seeds;

    auto work = [&]() {
        while (true)
        {
            const int task = next_task.fetch_add(1);
            if (task >= n_tasks)
            {
                return;
            }
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error)
                {
                    return;
                }
            }
            const int cell = task / n_seeds;
            const int seed = task % n_seeds;
            try
            {
                const SystemConfig &cell_cfg = table.cells[static_cast<std::size_t>(cell)].cfg;
                const std::vector<channel::ChannelMatrix> channels =
                    channels_for_seed(cell_cfg, seed);
                const std::uint64_t fp = channel::fingerprint(channels);
                for (int s = 0; s < n_schemes; ++s)
                {
                    const evaluation::SchemeKind &scheme = sweep.schemes[static_cast<std::size_t>(s)];
                    Substream rng = Substream::derived(
                        cell_cfg.master_seed,
                        {kSchedulePurpose, static_cast<std::uint64_t>(cell),
                         static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(s)});
                    ResultRow row;
                    row.cell = cell;
                    row.seed = seed;
                    row.channel_fingerprint = fp;
                    try
                    {
                        row.result = evaluation::run_scheme(channels, cell_cfg, scheme, rng);
                    }
                    catch (const ScenarioInfeasibleError &)
                    {
                        row.result = evaluation::ScenarioResult{};
                        row.result.scheme = scheme;
                        row.result.feasible = false;
                    }
                    catch (const SingularConfigurationError &)
                    {
                        row.result = evaluation::ScenarioResult{};
                        row.result.scheme = scheme;
                        row.result.feasible = false;
                    }
                    table.rows[(static_cast<std::size_t>(cell) * n_seeds + seed) * n_schemes + s] =
                        std::move(row);
                }
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                {
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
    {
        pool.emplace_back(work);
    }
    for (std::thread &t : pool)
    {
        t.join();
    }
    if (first_error)
    {
        std::rethrow_exception(first_error);
    }

    // Scheme-fairness audit: the rows of one (cell, seed) pair must have been
    // produced from the identical channel realization.
    for (int cell = 0; cell < n_cells; ++cell)
    {
        for (int seed = 0; seed < n_seeds; ++seed)
        {
            const std::size_t base = (static_cast<std::size_t>(cell) * n_seeds + seed) * n_schemes;
            for (int s = 1; s < n_schemes; ++s)
            {
                if (table.rows[base + s].channel_fingerprint !=
                    table.rows[base].channel_fingerprint)
                {
                    throw InternalConsistencyError(
                        "run_experiment: schemes saw different channel realizations");
                }
            }
        }
    }
    return table;
}

std::vector<AggregateRow> ResultTable::aggregate() const
{
    const int n_schemes = static_cast<int>(schemes.size());
    std::vector<AggregateRow> out;
    if (rows.empty() || n_schemes == 0)
    {
        return out;
    }
    const int n_cells = static_cast<int>(cells.size());
    const int n_seeds = static_cast<int>(rows.size()) / (n_cells * n_schemes);
    for (int cell = 0; cell < n_cells; ++cell)
    {
        for (int s = 0; s < n_schemes; ++s)
        {
            AggregateRow agg;
            agg.cell = cell;
            agg.scheme = schemes[static_cast<std::size_t>(s)];
            agg.n_seeds = n_seeds;
            double sum_sinr = 0.0, sum_sinr2 = 0.0;
            double sum_se = 0.0, sum_se2 = 0.0;
            double sum_mc = 0.0, sum_iters = 0.0, sum_runtime = 0.0;
            for (int seed = 0; seed < n_seeds; ++seed)
            {
                const ResultRow &row =
                    rows[(static_cast<std::size_t>(cell) * n_seeds + seed) * n_schemes + s];
                sum_runtime += row.result.runtime_ms;
                if (!row.result.feasible)
                {
                    continue;
                }
                ++agg.n_feasible;
                sum_sinr += row.result.min_unicast_sinr;
                sum_sinr2 += row.result.min_unicast_sinr * row.result.min_unicast_sinr;
                sum_se += row.result.unicast_se;
                sum_se2 += row.result.unicast_se * row.result.unicast_se;
                sum_mc += *std::min_element(row.result.multicast_sinrs.begin(),
                                            row.result.multicast_sinrs.end());
                sum_iters += row.result.iterations;
            }
            agg.feasible_rate = static_cast<double>(agg.n_feasible) / n_seeds;
            agg.mean_runtime_ms = sum_runtime / n_seeds;
            if (agg.n_feasible > 0)
            {
                const double n = agg.n_feasible;
                agg.mean_min_unicast_sinr = sum_sinr / n;
                agg.mean_unicast_se = sum_se / n;
                agg.mean_min_multicast_sinr = sum_mc / n;
                agg.mean_iterations = sum_iters / n;
                if (agg.n_feasible > 1)
                {
                    agg.std_min_unicast_sinr = std::sqrt(
                        std::max(0.0, (sum_sinr2 - n * agg.mean_min_unicast_sinr *
                                                       agg.mean_min_unicast_sinr) /
                                          (n - 1.0)));
                    agg.std_unicast_se = std::sqrt(
                        std::max(0.0, (sum_se2 - n * agg.mean_unicast_se * agg.mean_unicast_se) /
                                          (n - 1.0)));
                }
            }
            out.push_back(agg);
        }
    }
    return out;
}

namespace
{

std::string metric_column(const evaluation::SchemeKind &scheme)
{
    switch (scheme.tag)
    {
    case evaluation::SchemeTag::kBeamwave:
    case evaluation::SchemeTag::kTdm:
        return metrics::to_string(scheme.metric.tag);
    case evaluation::SchemeTag::kRandom:
    case evaluation::SchemeTag::kXhaus:
        return "none";
    }
    return "none";
}

} // namespace

void emit_csv(const ResultTable &table, const std::string &destination_dir)
{
    std::filesystem::path dir(destination_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    std::ofstream results(dir / "results.csv");
    if (!results)
    {
        throw std::runtime_error("emit_csv: cannot write " + (dir / "results.csv").string());
    }
    results << "scenario_id,seed,scheme,metric,K,K_prime,N_tx,N_rx,L_rx,min_unicast_sinr,"
               "unicast_se,min_multicast_sinr,feasible,ccp_iterations,runtime_ms\n";
    for (const ResultRow &row : table.rows)
    {
        const SystemConfig &cfg = table.cells[static_cast<std::size_t>(row.cell)].cfg;
        const double min_mc =
            row.result.multicast_sinrs.empty()
                ? 0.0
                : *std::min_element(row.result.multicast_sinrs.begin(),
                                    row.result.multicast_sinrs.end());
        results << row.cell << ',' << row.seed << ',' << evaluation::to_string(row.result.scheme)
                << ',' << metric_column(row.result.scheme) << ',' << cfg.k << ',' << cfg.k_prime
                << ',' << cfg.n_tx << ',' << cfg.n_rx << ',' << cfg.l_rx << ','
                << format_double(row.result.min_unicast_sinr) << ','
                << format_double(row.result.unicast_se) << ',' << format_double(min_mc) << ','
                << (row.result.feasible ? 1 : 0) << ',' << row.result.iterations << ','
                << format_double(row.result.runtime_ms) << '\n';
    }
    results.close();

    std::ofstream aggregate(dir / "aggregate.csv");
    if (!aggregate)
    {
        throw std::runtime_error("emit_csv: cannot write " + (dir / "aggregate.csv").string());
    }
    aggregate << "scenario_id,label,scheme,metric,K,K_prime,N_tx,N_rx,L_rx,n_seeds,feasible_rate,"
                 "mean_min_unicast_sinr,std_min_unicast_sinr,mean_unicast_se,std_unicast_se,"
                 "mean_min_multicast_sinr,mean_ccp_iterations,mean_runtime_ms\n";
    for (const AggregateRow &agg : table.aggregate())
    {
        const CellSpec &cell = table.cells[static_cast<std::size_t>(agg.cell)];
        aggregate << agg.cell << ',' << '"' << cell.label << '"' << ','
                  << evaluation::to_string(agg.scheme) << ',' << metric_column(agg.scheme) << ','
                  << cell.cfg.k << ',' << cell.cfg.k_prime << ',' << cell.cfg.n_tx << ','
                  << cell.cfg.n_rx << ',' << cell.cfg.l_rx << ',' << agg.n_seeds << ','
                  << format_double(agg.feasible_rate) << ','
                  << format_double(agg.mean_min_unicast_sinr) << ','
                  << format_double(agg.std_min_unicast_sinr) << ','
                  << format_double(agg.mean_unicast_se) << ',' << format_double(agg.std_unicast_se)
                  << ',' << format_double(agg.mean_min_multicast_sinr) << ','
                  << format_double(agg.mean_iterations) << ','
                  << format_double(agg.mean_runtime_ms) << '\n';
    }
}

} // namespace beamwave::harness
