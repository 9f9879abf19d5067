// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace phishhook
{
enum class Family : std::uint8_t
{
    random_forest,
    gbdt,
    logistic,
    svm,
    knn,
};

/// Short names: rf, gbdt, logreg, svm, knn.
std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view name);

struct Hyperparams
{
    Family family = Family::random_forest;

    // Tree ensembles.
    int n_trees = 100;
    /// 0 means unlimited.
    int max_depth = 0;
    /// Candidate features per split; 0 selects floor(sqrt(F)) for forests
    /// and all features for boosting.
    int max_features = 0;
    int min_samples_leaf = 1;
    bool bootstrap = true;
    double learning_rate = 0.1;
    /// L2 penalty on boosted leaf weights.
    double leaf_l2 = 1.0;
    double min_child_weight = 1.0;

    // kNN.
    int k = 5;

    // Linear models.
    double l2 = 1e-2;
    int max_iter = 500;
    double tol = 1e-6;
    double step = 1.0;
    bool line_search = true;

    std::uint64_t seed = 0;

    /// Compact key=value rendering of the fields relevant to the family.
    std::string describe() const;
    bool operator==(const Hyperparams&) const = default;
};
}  // namespace phishhook
