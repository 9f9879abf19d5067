// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/shap.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"
#include "phishhook/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace phishhook
{
namespace
{
struct PathElement
{
    int feature = -1;
    double zero_fraction = 0.0;
    double one_fraction = 0.0;
    double weight = 0.0;
};

using Path = std::vector<PathElement>;

void extend(Path& path, int depth, double zero_fraction, double one_fraction, int feature)
{
    path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
    for (int i = depth - 1; i >= 0; --i)
    {
        path[i + 1].weight += one_fraction * path[i].weight * (i + 1) / (depth + 1);
        path[i].weight = zero_fraction * path[i].weight * (depth - i) / (depth + 1);
    }
}

void unwind(Path& path, int depth, int index)
{
    const double one = path[index].one_fraction;
    const double zero = path[index].zero_fraction;
    double next = path[depth].weight;
    for (int i = depth - 1; i >= 0; --i)
    {
        if (one != 0.0)
        {
            const double tmp = path[i].weight;
            path[i].weight = next * (depth + 1) / ((i + 1) * one);
            next = tmp - path[i].weight * zero * (depth - i) / (depth + 1);
        }
        else
            path[i].weight = path[i].weight * (depth + 1) / (zero * (depth - i));
    }
    for (int i = index; i < depth; ++i)
    {
        path[i].feature = path[i + 1].feature;
        path[i].zero_fraction = path[i + 1].zero_fraction;
        path[i].one_fraction = path[i + 1].one_fraction;
    }
}

double unwound_sum(const Path& path, int depth, int index)
{
    const double one = path[index].one_fraction;
    const double zero = path[index].zero_fraction;
    double next = path[depth].weight;
    double total = 0.0;
    for (int i = depth - 1; i >= 0; --i)
    {
        if (one != 0.0)
        {
            const double tmp = next * (depth + 1) / ((i + 1) * one);
            total += tmp;
            next = path[i].weight - tmp * zero * (depth - i) / (depth + 1);
        }
        else if (zero != 0.0)
            total += path[i].weight / zero * (depth + 1) / (depth - i);
    }
    return total;
}

struct Walker
{
    const DecisionTree& tree;
    std::span<const double> x;
    double scale;
    std::span<double> phi;

    void recurse(int node, Path path, int depth, double zero_fraction, double one_fraction, int feature)
    {
        path.resize(static_cast<std::size_t>(depth) + 1);
        extend(path, depth, zero_fraction, one_fraction, feature);
        const auto& n = tree.nodes[static_cast<std::size_t>(node)];
        if (n.is_leaf())
        {
            for (int i = 1; i <= depth; ++i)
            {
                const double w = unwound_sum(path, depth, i);
                phi[static_cast<std::size_t>(path[i].feature)] +=
                    scale * w * (path[i].one_fraction - path[i].zero_fraction) * n.value;
            }
            return;
        }
        const bool go_left = x[static_cast<std::size_t>(n.feature)] <= n.threshold;
        const int hot = go_left ? n.left : n.right;
        const int cold = go_left ? n.right : n.left;
        double incoming_zero = 1.0;
        double incoming_one = 1.0;
        for (int i = 1; i <= depth; ++i)
        {
            if (path[i].feature == n.feature)
            {
                incoming_zero = path[i].zero_fraction;
                incoming_one = path[i].one_fraction;
                unwind(path, depth, i);
                --depth;
                break;
            }
        }
        const double hot_cover = tree.nodes[static_cast<std::size_t>(hot)].cover;
        const double cold_cover = tree.nodes[static_cast<std::size_t>(cold)].cover;
        recurse(hot, path, depth + 1, incoming_zero * hot_cover / n.cover, incoming_one, n.feature);
        recurse(cold, path, depth + 1, incoming_zero * cold_cover / n.cover, 0.0, n.feature);
    }
};

double tree_scale(const ForestModel& model)
{
    if (model.mode == EnsembleMode::boosting)
        return model.learning_rate;
    return model.trees.empty() ? 0.0 : 1.0 / static_cast<double>(model.trees.size());
}
}  // namespace

void tree_shap_accumulate(const DecisionTree& tree, std::span<const double> x, double scale,
                          std::span<double> phi)
{
    if (tree.nodes.empty())
        return;
    Walker w{tree, x, scale, phi};
    w.recurse(0, Path{}, 0, 1.0, 1.0, -1);
}

double expected_output(const ForestModel& model)
{
    double base = model.mode == EnsembleMode::boosting ? model.base_score : 0.0;
    const double scale = tree_scale(model);
    for (const auto& t : model.trees)
        base += scale * t.expected_value();
    return base;
}

AttributionReport tree_shap(const ForestModel& model, std::span<const double> x)
{
    if (x.size() != model.feature_count)
        throw ShapeError("sample width " + std::to_string(x.size()) + " != model width " +
                         std::to_string(model.feature_count));
    AttributionReport r;
    r.shap_values.assign(model.feature_count, 0.0);
    const double scale = tree_scale(model);
    for (const auto& t : model.trees)
        tree_shap_accumulate(t, x, scale, r.shap_values);
    r.base_value = expected_output(model);
    r.prediction = model.raw_output(x);
    return r;
}

ShapSummary shap_summary(const ForestModel& model, const FeatureMatrix& split, std::size_t top_n, unsigned workers)
{
    if (split.width() != model.feature_count)
        throw ShapeError("split width " + std::to_string(split.width()) + " != model width " +
                         std::to_string(model.feature_count));
    if (split.rows() == 0)
        throw EmptyInputError("SHAP summary needs a non-empty split");
    std::vector<AttributionReport> reports(split.rows());
    parallel_for(split.rows(), workers, [&](std::size_t i) { reports[i] = tree_shap(model, split.row(i)); });

    const std::size_t f = split.width();
    std::vector<double> mean_abs(f, 0.0);
    for (const auto& r : reports)
        for (std::size_t j = 0; j < f; ++j)
            mean_abs[j] += std::abs(r.shap_values[j]);
    for (auto& v : mean_abs)
        v /= static_cast<double>(reports.size());

    std::vector<std::size_t> order(f);
    std::iota(order.begin(), order.end(), 0);
    // Larger mean |shap| first; equal scores keep column order.
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return mean_abs[a] > mean_abs[b]; });
    order.resize(std::min(top_n, f));

    ShapSummary s;
    s.base_value = reports.front().base_value;
    for (const auto j : order)
        s.ranking.emplace_back(split.columns()[j], mean_abs[j]);
    for (const auto j : order)
        for (std::size_t i = 0; i < split.rows(); ++i)
        {
            const auto row = split.row(i);
            const double total = std::accumulate(row.begin(), row.end(), 0.0);
            s.rows.push_back({split.id(i), split.columns()[j], row[j], total > 0.0 ? row[j] / total : 0.0,
                              reports[i].shap_values[j]});
        }
    return s;
}

void write_shap_summary_csv(const ShapSummary& summary, std::ostream& out)
{
    out << "sample_id,feature,value,usage_share,shap\n";
    for (const auto& r : summary.rows)
        out << csv::escape(r.sample_id) << ',' << r.feature << ',' << csv::format_double(r.value) << ','
            << csv::format_double(r.usage_share) << ',' << csv::format_double(r.shap) << '\n';
}

void write_shap_summary_csv(const ShapSummary& summary, const std::filesystem::path& path)
{
    auto out = csv::open_output(path);
    write_shap_summary_csv(summary, out);
}
}  // namespace phishhook
