// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "features.hpp"
#include "hyperparams.hpp"

#include <span>
#include <vector>

namespace phishhook
{
/// Internal nodes send x[feature] <= threshold left. Leaves have feature -1.
struct TreeNode
{
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    /// Training samples (bootstrap duplicates included) reaching the node.
    double cover = 0.0;
    /// Leaf output: the majority vote (0 or 1) for classification trees,
    /// the raw response for boosted trees.
    double value = 0.0;
    /// Fraction of phishing samples at the node (classification trees).
    double positive_fraction = 0.0;

    bool is_leaf() const noexcept { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree
{
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    const TreeNode& leaf_for(std::span<const double> x) const;
    double predict(std::span<const double> x) const { return leaf_for(x).value; }
    /// Cover-weighted mean leaf value.
    double expected_value() const;
    int depth() const;
    bool operator==(const DecisionTree&) const = default;
};

enum class EnsembleMode : std::uint8_t
{
    bagging,
    boosting,
};

struct ForestModel
{
    std::vector<DecisionTree> trees;
    EnsembleMode mode = EnsembleMode::bagging;
    double learning_rate = 1.0;
    std::size_t feature_count = 0;
    /// Boosting: initial log-odds. Bagging: unused.
    double base_score = 0.0;

    /// Additive output that TreeSHAP explains: the phishing vote share for
    /// bagging, the log-odds margin for boosting.
    double raw_output(std::span<const double> x) const;
    /// Phishing probability in [0, 1].
    double probability(std::span<const double> x) const;
    bool operator==(const ForestModel&) const = default;
};

/// Bagged CART trees with Gini splits. Throws DegenerateError unless both
/// classes are present.
ForestModel train_random_forest(const FeatureMatrix& features, const Hyperparams& params, unsigned workers = 1);

/// Second-order boosted regression trees on the logistic loss.
ForestModel train_gbdt(const FeatureMatrix& features, const Hyperparams& params, unsigned workers = 1);

double sigmoid(double x) noexcept;
}  // namespace phishhook
