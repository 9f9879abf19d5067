// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "features.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "stats.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phishhook
{
inline constexpr std::uint64_t kDefaultSeeds[] = {0, 1, 2};

struct ModelSpec
{
    /// Label written to result tables; defaults to the family short name.
    std::string name;
    Hyperparams params;

    static ModelSpec of(Family family);
};

struct MetricsRecord
{
    std::string model;
    int run = 0;
    std::uint64_t seed = 0;
    int fold = 0;
    double fraction = 1.0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    ClassificationMetrics metrics;
    double train_time_s = 0.0;
    double infer_time_s = 0.0;
    /// Rows scored in the timed inference call (the whole test fold).
    std::size_t infer_batch_size = 0;
};

/// Header: model,run,seed,fold,fraction,train_size,test_size,accuracy,
/// precision,recall,f1,macro_precision,macro_recall,macro_f1,train_time_s,
/// infer_time_s,infer_batch_size.
void write_metrics_csv(std::span<const MetricsRecord> records, std::ostream& out);
/// Appends to `path`, writing the header only when the file is new or empty.
void append_metrics_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path);
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

/// Train/test matrices for one split; the vocabulary comes from the
/// training rows alone.
struct SplitData
{
    Vocabulary vocabulary;
    FeatureMatrix train;
    FeatureMatrix test;
};

SplitData split_data(std::span<const OpcodeSample> samples, std::span<const std::size_t> train_indices,
                     std::span<const std::size_t> test_indices);

/// Builds the vocabulary and trains on the given rows only.
ModelBundle fit_on_indices(std::span<const OpcodeSample> samples, std::span<const std::size_t> train_indices,
                           const Hyperparams& params, unsigned workers = 1);

std::vector<Label> labels_of(std::span<const OpcodeSample> samples);

struct CvOptions
{
    int k = 10;
    std::vector<std::uint64_t> seeds{std::begin(kDefaultSeeds), std::end(kDefaultSeeds)};
    bool stratified = true;
    unsigned workers = 1;
};

/// k folds per seed, one record per (run, fold). Each fold trains with the
/// seed mix_seed(run seed, fold). Errors are rethrown with run/fold context.
std::vector<MetricsRecord> run_cv(const ModelSpec& model, std::span<const OpcodeSample> samples,
                                  const CvOptions& options);

/// Stratified nested subset: the first round(fraction * n_c) samples of each
/// class after a seeded shuffle, returned in input order.
std::vector<std::size_t> stratified_subset(std::span<const Label> labels, double fraction, std::uint64_t seed);

struct TimingRow
{
    std::string model;
    double fraction = 1.0;
    std::size_t train_size = 0;
    double mean_train_time_s = 0.0;
    double mean_infer_time_s = 0.0;
    double mean_accuracy = 0.0;
};

struct ScalabilityResult
{
    std::vector<MetricsRecord> records;
    std::vector<TimingRow> timing;
};

/// CV on nested subsets; per seed the subset is drawn with that seed and
/// folded with it.
ScalabilityResult run_scalability(std::span<const ModelSpec> models, std::span<const OpcodeSample> samples,
                                  std::span<const double> fractions, const CvOptions& options);

/// model,fraction,train_size,mean_train_time_s,mean_infer_time_s,mean_accuracy
void write_timing_csv(std::span<const TimingRow> rows, std::ostream& out);

/// Mean of one metric per (model, fraction) for the Friedman/CDD inputs:
/// rows follow `models`, columns follow `fractions`.
stats::BlockMatrix scalability_blocks(const ScalabilityResult& result, std::span<const ModelSpec> models,
                                      std::span<const double> fractions, std::string_view metric);

struct TimeWindowPlan
{
    YearMonth train_from;
    YearMonth train_to;
    std::vector<YearMonth> test_months;

    /// Throws ValidationError unless train_from <= train_to and the test
    /// months are strictly increasing and after train_to.
    void validate() const;
    /// Train window plus `count` consecutive following months.
    static TimeWindowPlan consecutive(YearMonth from, YearMonth to, int count);
};

struct TemporalRow
{
    std::string model;
    YearMonth month;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    /// No test samples that month; metrics are meaningless.
    bool missing = false;
    ClassificationMetrics metrics;
};

struct TimeResistanceResult
{
    std::vector<TemporalRow> rows;
    /// Per model, AUT of the phishing F1 over non-missing months (NaN when
    /// fewer than two remain).
    std::vector<std::pair<std::string, double>> aut;
    std::vector<std::string> warnings;
};

TimeResistanceResult run_time_resistance(std::span<const ModelSpec> models, std::span<const OpcodeSample> samples,
                                         const TimeWindowPlan& plan, unsigned workers = 1);

/// model,month,train_size,test_size,missing,accuracy,precision,recall,f1,macro_f1
void write_temporal_csv(const TimeResistanceResult& result, std::ostream& out);
/// model,aut
void write_aut_csv(const TimeResistanceResult& result, std::ostream& out);

/// Per month, keeps a seeded random choice of at most as many benign
/// samples as there are phishing ones; undated benign samples are dropped.
/// Phishing samples are untouched. Returns indices in input order.
std::vector<std::size_t> match_benign_months(std::span<const OpcodeSample> samples, std::uint64_t seed);

/// Groups records by model (first-seen order) into the post hoc input over
/// accuracy, precision, recall and f1 (macro variants when `macro`).
stats::PosthocInput posthoc_input(std::span<const MetricsRecord> records, bool macro = false);
}  // namespace phishhook
