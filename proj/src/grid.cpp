// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/grid.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"
#include "phishhook/parallel.hpp"
#include "phishhook/rng.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <ostream>
#include <tuple>

namespace phishhook
{
std::vector<Hyperparams> default_grid(Family family, const Hyperparams& base)
{
    std::vector<Hyperparams> grid;
    auto p = base;
    p.family = family;
    switch (family)
    {
    case Family::random_forest:
    case Family::gbdt:
        for (const int trees : {100, 300, 500})
            for (const int depth : {8, 16, 0})
            {
                p.n_trees = trees;
                p.max_depth = depth;
                if (family == Family::gbdt)
                    for (const double lr : {0.05, 0.1, 0.3})
                    {
                        p.learning_rate = lr;
                        grid.push_back(p);
                    }
                else
                    grid.push_back(p);
            }
        break;
    case Family::knn:
        for (const int k : {1, 3, 5, 7, 9, 15})
        {
            p.k = k;
            grid.push_back(p);
        }
        break;
    case Family::logistic:
    case Family::svm:
        for (const double l2 : {1e-4, 1e-2, 1.0})
        {
            p.l2 = l2;
            grid.push_back(p);
        }
        break;
    }
    return grid;
}

std::vector<Hyperparams> default_grid(Family family) { return default_grid(family, default_hyperparams(family)); }

bool smaller_capacity(const Hyperparams& a, const Hyperparams& b)
{
    const auto key = [](const Hyperparams& p) {
        const bool trees = p.family == Family::random_forest || p.family == Family::gbdt;
        const int depth = p.max_depth <= 0 ? INT_MAX : p.max_depth;
        return std::tuple{trees ? p.n_trees : 0, trees ? depth : 0, p.family == Family::gbdt ? p.learning_rate : 0.0,
                          p.family == Family::knn ? -p.k : 0,
                          p.family == Family::logistic || p.family == Family::svm ? -p.l2 : 0.0};
    };
    return key(a) < key(b);
}

GridResult grid_search(std::span<const Hyperparams> grid, std::span<const OpcodeSample> samples,
                       const FoldPlan& folds, unsigned workers)
{
    if (grid.empty())
        throw ValidationError("grid search over an empty grid");
    if (folds.assignments.size() != samples.size())
        throw ShapeError("fold plan does not cover the samples");

    // Fold matrices are shared by every grid point.
    std::vector<SplitData> splits;
    for (int f = 0; f < folds.k; ++f)
        splits.push_back(split_data(samples, folds.train_indices(f), folds.test_indices(f)));

    GridResult result;
    result.points.resize(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t g) {
        auto& point = result.points[g];
        point.params = grid[g];
        for (int f = 0; f < folds.k; ++f)
        {
            const auto& s = splits[static_cast<std::size_t>(f)];
            auto params = grid[g];
            params.seed = mix_seed(grid[g].seed, static_cast<std::uint64_t>(f));
            const auto model = train_model(s.train, params, 1);
            const auto pred = predict(model, s.test);
            point.fold_accuracy.push_back(compute_metrics(pred.labels, s.test.labels()).accuracy);
        }
        point.mean_accuracy = std::accumulate(point.fold_accuracy.begin(), point.fold_accuracy.end(), 0.0) /
                              static_cast<double>(point.fold_accuracy.size());
    });

    const auto better = [](const GridPoint& a, const GridPoint& b) {
        if (a.mean_accuracy != b.mean_accuracy)
            return a.mean_accuracy > b.mean_accuracy;
        if (smaller_capacity(a.params, b.params))
            return true;
        if (smaller_capacity(b.params, a.params))
            return false;
        return a.params.describe() < b.params.describe();
    };
    result.best = std::min_element(result.points.begin(), result.points.end(), better)->params;
    return result;
}

void write_grid_csv(const GridResult& result, std::ostream& out)
{
    out << "family,n_trees,max_depth,learning_rate,k,l2,mean_accuracy,fold_accuracies\n";
    for (const auto& p : result.points)
    {
        out << to_string(p.params.family) << ',' << p.params.n_trees << ',' << p.params.max_depth << ','
            << csv::format_double(p.params.learning_rate) << ',' << p.params.k << ','
            << csv::format_double(p.params.l2) << ',' << csv::format_double(p.mean_accuracy) << ',';
        for (std::size_t i = 0; i < p.fold_accuracy.size(); ++i)
            out << (i ? ";" : "") << csv::format_double(p.fold_accuracy[i]);
        out << '\n';
    }
}
}  // namespace phishhook
