// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli_common.hpp"

#include <phishhook/csv.hpp>
#include <phishhook/error.hpp>
#include <phishhook/opcodes.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

namespace phishhook::cli
{
void add_common_options(CLI::App& sub, CommonOptions& common)
{
    sub.add_option("--out", common.out, "Parent directory for run directories")->capture_default_str();
    sub.add_option("--run-name", common.run_name, "Run directory name (default <command>_<timestamp>)");
    sub.add_option("--seed", common.seed, "Base random seed")->capture_default_str();
    sub.add_option("--workers", common.workers, "Worker threads (0 = all cores)")->capture_default_str();
    sub.add_option("--config", common.config, "JSON file of option values")->check(CLI::ExistingFile);
}

namespace
{
std::vector<std::string> config_values(const nlohmann::json& value)
{
    if (value.is_array())
    {
        std::vector<std::string> out;
        for (const auto& v : value)
            out.push_back(config_values(v).at(0));
        return out;
    }
    if (value.is_string())
        return {value.get<std::string>()};
    if (value.is_boolean())
        return {value.get<bool>() ? "true" : "false"};
    return {value.dump()};
}
}  // namespace

void apply_json_config(CLI::App& sub, const std::filesystem::path& path)
{
    nlohmann::json j;
    try
    {
        auto in = csv::open_input(path);
        j = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!j.is_object())
        throw ValidationError(path.string() + ": config must be a JSON object");
    for (const auto& [key, value] : j.items())
    {
        if (key == "config")
            throw ValidationError("config files cannot nest --config");
        CLI::Option* opt = nullptr;
        try
        {
            opt = sub.get_option("--" + key);
        }
        catch (const CLI::OptionNotFound&)
        {
            throw ValidationError(path.string() + ": unknown option '" + key + "' for " + sub.get_name());
        }
        if (opt->count() > 0)
            continue;  // the command line wins
        opt->clear();
        for (const auto& v : config_values(value))
            opt->add_result(v);
        opt->run_callback();
    }
}

namespace
{
std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
    return s.str();
}
}  // namespace

RunContext::RunContext(const CLI::App& sub, const CommonOptions& common)
{
    const std::filesystem::path parent{common.out};
    if (!common.run_name.empty())
        dir_ = parent / common.run_name;
    else
    {
        const auto base = sub.get_name() + "_" + timestamp();
        dir_ = parent / base;
        for (int i = 1; std::filesystem::exists(dir_); ++i)
            dir_ = parent / (base + "-" + std::to_string(i));
    }
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
        throw IoError("cannot create run directory " + dir_.string() + ": " + ec.message());

    config_["command"] = sub.get_name();
    config_["tool_version"] = "0.1.0";
    config_["opcode_table"] = OpcodeTable::shanghai().fork() + "/v1";
    auto& options = config_["options"];
    options = nlohmann::json::object();
    for (const auto* opt : sub.get_options())
    {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "help")
            continue;
        const auto& name = opt->get_lnames().front();
        if (opt->count() > 0)
        {
            const auto& results = opt->results();
            if (name == "endpoint")
                options[name] = endpoint_host(results.front());
            else if (results.size() == 1)
                options[name] = results.front();
            else
                options[name] = results;
        }
        else if (!opt->get_default_str().empty())
            options[name] = opt->get_default_str();
    }
    save();
}

std::string endpoint_host(const std::string& url)
{
    const auto scheme = url.find("://");
    const auto start = scheme == std::string::npos ? 0 : scheme + 3;
    auto host = url.substr(start, url.find_first_of("/?#", start) - start);
    if (const auto at = host.rfind('@'); at != std::string::npos)
        host.erase(0, at + 1);
    return url.substr(0, start) + host;
}

void RunContext::save() const
{
    auto out = csv::open_output(dir_ / "config.json");
    out << config_.dump(2) << '\n';
}

void RunContext::note(const std::string& key, nlohmann::json value)
{
    config_[key] = std::move(value);
    save();
}

std::string file_digest(const std::filesystem::path& path)
{
    auto in = csv::open_input(path);
    const std::string data{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
    const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
    return digest_hex(bytecode_digest(BytesView{p, data.size()}));
}

Corpus load_corpus_noted(const std::filesystem::path& path, RunContext& run, bool dedup)
{
    auto corpus = load_corpus(path);
    nlohmann::json info{{"path", path.string()},
                        {"sha256", file_digest(path)},
                        {"records", corpus.size()},
                        {"phishing", corpus.count(Label::phishing)},
                        {"benign", corpus.count(Label::benign)}};
    if (dedup)
    {
        auto d = dedup_exact(corpus);
        info["dedup_removed"] = d.removed;
        corpus = std::move(d.corpus);
    }
    run.note("corpus", info);
    return corpus;
}

void HyperFlags::add_to(CLI::App& sub)
{
    sub.add_option("--n-trees", n_trees, "Trees (rf, gbdt)");
    sub.add_option("--max-depth", max_depth, "Tree depth, 0 = unlimited");
    sub.add_option("--max-features", max_features, "Candidate features per split, 0 = family default");
    sub.add_option("--min-samples-leaf", min_samples_leaf, "Minimum samples per leaf");
    sub.add_option("--learning-rate", learning_rate, "Boosting learning rate");
    sub.add_option("--neighbors", neighbors, "k for kNN");
    sub.add_option("--l2", l2, "L2 penalty (logreg, svm)");
    sub.add_option("--max-iter", max_iter, "Gradient steps (logreg, svm)");
    sub.add_flag("--no-bootstrap", no_bootstrap, "Train forest trees on the full sample");
}

Hyperparams HyperFlags::resolve(Family family, std::uint64_t seed) const
{
    auto p = default_hyperparams(family);
    p.seed = seed;
    if (n_trees)
        p.n_trees = *n_trees;
    if (max_depth)
        p.max_depth = *max_depth;
    if (max_features)
        p.max_features = *max_features;
    if (min_samples_leaf)
        p.min_samples_leaf = *min_samples_leaf;
    if (learning_rate)
        p.learning_rate = *learning_rate;
    if (neighbors)
        p.k = *neighbors;
    if (l2)
        p.l2 = *l2;
    if (max_iter)
        p.max_iter = *max_iter;
    if (no_bootstrap)
        p.bootstrap = false;
    return p;
}

std::vector<ModelSpec> model_specs(const std::vector<std::string>& names, const HyperFlags& flags,
                                   std::uint64_t seed)
{
    std::vector<std::string> expanded;
    for (const auto& n : names)
    {
        if (n == "all")
            for (const auto* f : {"rf", "gbdt", "logreg", "svm", "knn"})
                expanded.emplace_back(f);
        else
            expanded.push_back(n);
    }
    std::vector<ModelSpec> out;
    for (const auto& n : expanded)
    {
        const auto family = parse_family(n);
        out.push_back({n, flags.resolve(family, seed)});
    }
    return out;
}

std::vector<std::uint64_t> run_seeds(std::uint64_t first, int runs)
{
    if (runs < 1)
        throw ValidationError("--runs must be at least 1");
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < runs; ++i)
        seeds.push_back(first + static_cast<std::uint64_t>(i));
    return seeds;
}
}  // namespace phishhook::cli
