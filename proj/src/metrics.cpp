// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/metrics.hpp"

#include "phishhook/error.hpp"
#include "phishhook/rng.hpp"

#include <string>

namespace phishhook
{
Confusion confusion(std::span<const Label> predicted, std::span<const Label> actual)
{
    if (predicted.size() != actual.size())
        throw ShapeError("prediction count " + std::to_string(predicted.size()) + " != label count " +
                         std::to_string(actual.size()));
    if (predicted.empty())
        throw EmptyInputError("no predictions to score");
    Confusion c;
    for (std::size_t i = 0; i < predicted.size(); ++i)
    {
        const bool p = predicted[i] == Label::phishing;
        const bool a = actual[i] == Label::phishing;
        if (p && a)
            ++c.tp;
        else if (p)
            ++c.fp;
        else if (a)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

namespace
{
double ratio(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }
}  // namespace

ClassificationMetrics compute_metrics(const Confusion& c)
{
    if (c.total() == 0)
        throw EmptyInputError("empty confusion matrix");
    ClassificationMetrics m;
    m.accuracy = ratio(c.tp + c.tn, c.total());
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.f1 = harmonic(m.precision, m.recall);
    const double neg_precision = ratio(c.tn, c.tn + c.fn);
    const double neg_recall = ratio(c.tn, c.tn + c.fp);
    m.macro_precision = (m.precision + neg_precision) / 2.0;
    m.macro_recall = (m.recall + neg_recall) / 2.0;
    m.macro_f1 = (m.f1 + harmonic(neg_precision, neg_recall)) / 2.0;
    return m;
}

ClassificationMetrics compute_metrics(std::span<const Label> predicted, std::span<const Label> actual)
{
    return compute_metrics(confusion(predicted, actual));
}

std::vector<std::size_t> FoldPlan::test_indices(int fold) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold)
            out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold)
            out.push_back(i);
    return out;
}

FoldPlan make_folds(std::span<const Label> labels, int k, std::uint64_t seed, bool stratified)
{
    if (k < 2)
        throw ValidationError("fold count must be at least 2");
    if (labels.size() < static_cast<std::size_t>(k))
        throw ValidationError("fewer samples than folds");
    FoldPlan plan{k, seed, stratified, std::vector<int>(labels.size(), -1)};

    std::vector<std::vector<std::size_t>> groups(stratified ? 2 : 1);
    for (std::size_t i = 0; i < labels.size(); ++i)
        groups[stratified ? static_cast<std::size_t>(labels[i]) : 0].push_back(i);
    if (stratified)
        for (std::size_t g = 0; g < groups.size(); ++g)
            if (groups[g].size() < static_cast<std::size_t>(k))
                throw ValidationError("class " + std::string{to_string(static_cast<Label>(g))} + " has " +
                                      std::to_string(groups[g].size()) + " samples, fewer than k = " +
                                      std::to_string(k));

    // The second class continues dealing where the first stopped so that
    // overall fold sizes also stay within one sample of each other.
    std::size_t next = 0;
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        Rng rng{mix_seed(seed, g)};
        rng.shuffle(std::span{groups[g]});
        for (const auto i : groups[g])
            plan.assignments[i] = static_cast<int>(next++ % static_cast<std::size_t>(k));
    }
    return plan;
}

double aut(std::span<const double> series)
{
    if (series.size() < 2)
        throw ValidationError("AUT needs at least two points");
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i)
        area += (series[i] + series[i + 1]) / 2.0;
    return area / static_cast<double>(series.size() - 1);
}
}  // namespace phishhook
