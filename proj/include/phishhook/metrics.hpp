// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "corpus.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace phishhook
{
struct Confusion
{
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
};

/// Phishing is the positive class.
Confusion confusion(std::span<const Label> predicted, std::span<const Label> actual);

struct ClassificationMetrics
{
    double accuracy = 0.0;
    // Phishing-positive.
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Unweighted mean over the two classes.
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
};

/// Precision with no predicted positives is 0, and so is F1 when
/// precision + recall is 0.
ClassificationMetrics compute_metrics(const Confusion& c);
ClassificationMetrics compute_metrics(std::span<const Label> predicted, std::span<const Label> actual);

struct FoldPlan
{
    int k = 0;
    std::uint64_t seed = 0;
    bool stratified = true;
    /// Fold index per sample, in input order.
    std::vector<int> assignments;

    std::vector<std::size_t> test_indices(int fold) const;
    std::vector<std::size_t> train_indices(int fold) const;
};

/// Shuffles each class (or the whole set) with the seed and deals samples
/// to folds round-robin, so fold sizes and class counts differ by at most 1.
FoldPlan make_folds(std::span<const Label> labels, int k, std::uint64_t seed, bool stratified = true);

/// Trapezoidal area under an ordered series, normalized by its span.
double aut(std::span<const double> series);
}  // namespace phishhook
