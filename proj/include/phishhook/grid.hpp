// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "experiments.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace phishhook
{
/// The default search space: trees {100, 300, 500} x depth {8, 16,
/// unlimited} (x lr {0.05, 0.1, 0.3} for boosting), k {1, 3, 5, 7, 9, 15},
/// linear l2 {1e-4, 1e-2, 1}. Other fields come from `base`.
std::vector<Hyperparams> default_grid(Family family, const Hyperparams& base);
std::vector<Hyperparams> default_grid(Family family);

struct GridPoint
{
    Hyperparams params;
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
};

struct GridResult
{
    Hyperparams best;
    std::vector<GridPoint> points;
};

/// Lower is smaller capacity: fewer trees, shallower depth, smaller
/// learning rate, more neighbors, stronger L2.
bool smaller_capacity(const Hyperparams& a, const Hyperparams& b);

/// Exhaustive CV over `grid`; the best mean accuracy wins, ties go to the
/// smaller capacity and then to the lexicographically smaller description.
/// Grid points run in parallel; the result does not depend on `workers`.
GridResult grid_search(std::span<const Hyperparams> grid, std::span<const OpcodeSample> samples,
                       const FoldPlan& folds, unsigned workers = 1);

/// <hyperparameter columns>,mean_accuracy,fold_accuracies (';'-joined)
void write_grid_csv(const GridResult& result, std::ostream& out);
}  // namespace phishhook
