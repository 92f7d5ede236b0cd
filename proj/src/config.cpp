// mimo-rfsel  RF-chain activation and antenna selection for downlink massive MIMO
// Copyright (C) 2026 mimo-rfsel contributors
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

#include "rfsel/config.hpp"

#include <json.hpp>

#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rfsel
{

namespace
{

std::string trim(const std::string &s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

int parse_int(const std::string &v, const std::string &key)
{
    try
    {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("");
        return x;
    }
    catch (const std::exception &)
    {
        throw std::invalid_argument("config: bad integer for '" + key + "': " + v);
    }
}

double parse_double(const std::string &v, const std::string &key)
{
    try
    {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("");
        return x;
    }
    catch (const std::exception &)
    {
        throw std::invalid_argument("config: bad number for '" + key + "': " + v);
    }
}

std::uint64_t parse_u64(const std::string &v, const std::string &key)
{
    try
    {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("");
        return static_cast<std::uint64_t>(x);
    }
    catch (const std::exception &)
    {
        throw std::invalid_argument("config: bad unsigned integer for '" + key + "': " + v);
    }
}

} // namespace

std::vector<double> parse_value_list(const std::string &text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (item.empty())
            continue;
        out.push_back(parse_double(item, "values"));
    }
    return out;
}

std::vector<Algorithm> parse_algorithm_list(const std::string &text)
{
    std::vector<Algorithm> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (item.empty())
            continue;
        out.push_back(parse_algorithm(item));
    }
    if (out.empty())
        throw std::invalid_argument("config: empty algorithm list");
    return out;
}

void apply_config_key(ExperimentConfig &cfg, const std::string &key, const std::string &value)
{
    if (key == "users")
        cfg.users = parse_int(value, key);
    else if (key == "antennas")
        cfg.antennas = parse_int(value, key);
    else if (key == "p_max")
        cfg.p_max = parse_double(value, key);
    else if (key == "p_c")
        cfg.p_c = parse_double(value, key);
    else if (key == "alpha")
        cfg.alpha = parse_double(value, key);
    else if (key == "cell_radius")
        cfg.cell_radius = parse_double(value, key);
    else if (key == "min_distance")
        cfg.min_distance = parse_double(value, key);
    else if (key == "trials")
        cfg.trials = parse_int(value, key);
    else if (key == "seed")
        cfg.master_seed = parse_u64(value, key);
    else if (key == "axis")
        cfg.axis = parse_axis(value);
    else if (key == "values")
        cfg.sweep_values = parse_value_list(value);
    else if (key == "algorithms")
        cfg.algorithms = parse_algorithm_list(value);
    else if (key == "random_power")
    {
        if (value == "waterfill")
            cfg.random_power = RandomPower::waterfill;
        else if (value == "equal_received")
            cfg.random_power = RandomPower::equal_received;
        else
            throw std::invalid_argument("config: random_power must be waterfill|equal_received");
    }
    else if (key == "equal_power_variant")
    {
        if (value == "paper")
            cfg.erp_variant = EqualPowerVariant::paper;
        else if (value == "feasible")
            cfg.erp_variant = EqualPowerVariant::feasible;
        else
            throw std::invalid_argument("config: equal_power_variant must be paper|feasible");
    }
    else if (key == "random_chains")
        cfg.random_chains = parse_int(value, key);
    else if (key == "threads")
        cfg.threads = parse_int(value, key);
    else if (key == "bfs_subset_cap")
        cfg.bfs_subset_cap = parse_u64(value, key);
    else if (key == "initial_bfs_cap")
        cfg.initial_bfs_cap = parse_u64(value, key);
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig load_config_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open " + path.string());

    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

namespace
{

nlohmann::json config_to_json(const ExperimentConfig &cfg)
{
    nlohmann::json j;
    j["users"] = cfg.users;
    j["antennas"] = cfg.antennas;
    j["p_max"] = cfg.p_max;
    j["p_c"] = cfg.p_c;
    j["alpha"] = cfg.alpha;
    j["cell_radius"] = cfg.cell_radius;
    j["min_distance"] = cfg.min_distance;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.master_seed;
    j["axis"] = to_string(cfg.axis);
    j["values"] = cfg.sweep_values;
    std::vector<std::string> algos;
    for (Algorithm a : cfg.algorithms)
        algos.emplace_back(to_string(a));
    j["algorithms"] = algos;
    j["random_power"] =
        cfg.random_power == RandomPower::waterfill ? "waterfill" : "equal_received";
    j["equal_power_variant"] = cfg.erp_variant == EqualPowerVariant::paper ? "paper" : "feasible";
    j["random_chains"] = cfg.random_chains;
    j["threads"] = cfg.threads;
    j["bfs_subset_cap"] = cfg.bfs_subset_cap;
    j["initial_bfs_cap"] = cfg.initial_bfs_cap;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json &j)
{
    ExperimentConfig cfg;
    cfg.users = j.at("users").get<int>();
    cfg.antennas = j.at("antennas").get<int>();
    cfg.p_max = j.at("p_max").get<double>();
    cfg.p_c = j.at("p_c").get<double>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.cell_radius = j.at("cell_radius").get<double>();
    cfg.min_distance = j.at("min_distance").get<double>();
    cfg.trials = j.at("trials").get<int>();
    cfg.master_seed = j.at("seed").get<std::uint64_t>();
    cfg.axis = parse_axis(j.at("axis").get<std::string>());
    cfg.sweep_values = j.at("values").get<std::vector<double>>();
    cfg.algorithms.clear();
    for (const auto &name : j.at("algorithms"))
        cfg.algorithms.push_back(parse_algorithm(name.get<std::string>()));
    cfg.random_power = j.at("random_power").get<std::string>() == "waterfill"
                           ? RandomPower::waterfill
                           : RandomPower::equal_received;
    cfg.erp_variant = j.at("equal_power_variant").get<std::string>() == "paper"
                          ? EqualPowerVariant::paper
                          : EqualPowerVariant::feasible;
    cfg.random_chains = j.at("random_chains").get<int>();
    cfg.threads = j.at("threads").get<int>();
    cfg.bfs_subset_cap = j.at("bfs_subset_cap").get<std::uint64_t>();
    cfg.initial_bfs_cap = j.at("initial_bfs_cap").get<std::uint64_t>();
    return cfg;
}

} // namespace

void write_manifest(const std::filesystem::path &path, const RunManifest &manifest)
{
    nlohmann::json j;
    j["tool"] = "mimo_rfsel";
    j["command"] = manifest.command;
    j["version"] = manifest.version;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["config"] = config_to_json(manifest.config);
    j["outputs"] = manifest.outputs;
    nlohmann::json skips = nlohmann::json::array();
    for (const auto &[pt, label, count] : manifest.skips)
        skips.push_back({{"point", pt}, {"algorithm", label}, {"count", count}});
    j["skipped"] = skips;

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("manifest: cannot write " + path.string());
    out << j.dump(2) << '\n';
}

RunManifest load_manifest(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("manifest: cannot open " + path.string());
    nlohmann::json j;
    in >> j;

    RunManifest m;
    m.command = j.value("command", "");
    m.version = j.value("version", "");
    m.config = config_from_json(j.at("config"));
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
    if (j.contains("outputs"))
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
}

std::string utc_timestamp_now()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace rfsel
