// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <phishhook/corpus.hpp>
#include <phishhook/experiments.hpp>
#include <phishhook/hyperparams.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace phishhook::cli
{
struct CommonOptions
{
    std::string out = "runs";
    std::string run_name;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string config;
};

/// 0 selects every hardware thread.
inline unsigned resolved_workers(unsigned requested)
{
    return requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
}

void add_common_options(CLI::App& sub, CommonOptions& common);

/// Fills options absent from the command line with values from a JSON
/// object keyed by long option name (without dashes).
void apply_json_config(CLI::App& sub, const std::filesystem::path& path);

/// A run directory with its resolved-config snapshot.
class RunContext
{
public:
    RunContext(const CLI::App& sub, const CommonOptions& common);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path file(const std::string& name) const { return dir_ / name; }
    nlohmann::json& config() noexcept { return config_; }
    /// Rewrites config.json; called at creation and after every note.
    void save() const;
    void note(const std::string& key, nlohmann::json value);

private:
    std::filesystem::path dir_;
    nlohmann::json config_;
};

/// Loads a corpus and records its file digest in the run config.
Corpus load_corpus_noted(const std::filesystem::path& path, RunContext& run, bool dedup);

/// Hyperparameter flags shared by train/evaluate/scalability/timeline.
struct HyperFlags
{
    std::optional<int> n_trees;
    std::optional<int> max_depth;
    std::optional<int> max_features;
    std::optional<int> min_samples_leaf;
    std::optional<double> learning_rate;
    std::optional<int> neighbors;
    std::optional<double> l2;
    std::optional<int> max_iter;
    bool no_bootstrap = false;

    void add_to(CLI::App& sub);
    Hyperparams resolve(Family family, std::uint64_t seed) const;
};

/// Expands "all" and parses family names.
std::vector<ModelSpec> model_specs(const std::vector<std::string>& names, const HyperFlags& flags,
                                   std::uint64_t seed);

std::vector<std::uint64_t> run_seeds(std::uint64_t first, int runs);

/// SHA-256 of a file's bytes, hex encoded.
/// scheme://host[:port] of a URL, dropping credentials, path, and query.
std::string endpoint_host(const std::string& url);

std::string file_digest(const std::filesystem::path& path);

using Command = std::function<void()>;

void register_data_commands(CLI::App& app, std::vector<std::pair<CLI::App*, Command>>& commands);
void register_model_commands(CLI::App& app, std::vector<std::pair<CLI::App*, Command>>& commands);
}  // namespace phishhook::cli
