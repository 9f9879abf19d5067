// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "features.hpp"
#include "tree.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace phishhook
{
/// Attributions are in the model's additive output space: the phishing
/// vote share for bagged forests (equal to the probability) and the
/// log-odds margin for boosted ones.
struct AttributionReport
{
    double base_value = 0.0;
    std::vector<double> shap_values;
    double prediction = 0.0;
};

/// Path-dependent TreeSHAP over a single tree, accumulating scale * phi.
void tree_shap_accumulate(const DecisionTree& tree, std::span<const double> x, double scale,
                          std::span<double> phi);

/// Cover-weighted expectation of the ensemble output; the base value of
/// every attribution report.
double expected_output(const ForestModel& model);

AttributionReport tree_shap(const ForestModel& model, std::span<const double> x);

struct ShapSummaryRow
{
    std::string sample_id;
    std::string feature;
    double value = 0.0;
    /// value / total opcode count of the sample (0 for an empty sample).
    double usage_share = 0.0;
    double shap = 0.0;
};

struct ShapSummary
{
    double base_value = 0.0;
    /// Selected features, most influential first, with their mean |shap|.
    std::vector<std::pair<std::string, double>> ranking;
    std::vector<ShapSummaryRow> rows;
};

/// Ranks features by mean |shap| over `split` and keeps the top_n.
ShapSummary shap_summary(const ForestModel& model, const FeatureMatrix& split, std::size_t top_n = 20,
                         unsigned workers = 1);

void write_shap_summary_csv(const ShapSummary& summary, std::ostream& out);
void write_shap_summary_csv(const ShapSummary& summary, const std::filesystem::path& path);
}  // namespace phishhook
