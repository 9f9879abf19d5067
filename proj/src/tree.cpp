// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/tree.hpp"

#include "phishhook/error.hpp"
#include "phishhook/parallel.hpp"
#include "phishhook/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace phishhook
{
double sigmoid(double x) noexcept
{
    if (x >= 0)
        return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const
{
    const TreeNode* node = &nodes.front();
    while (!node->is_leaf())
        node = &nodes[static_cast<std::size_t>(
            x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right)];
    return *node;
}

double DecisionTree::expected_value() const
{
    const double root_cover = nodes.front().cover;
    double sum = 0.0;
    for (const auto& n : nodes)
        if (n.is_leaf())
            sum += n.cover * n.value;
    return sum / root_cover;
}

int DecisionTree::depth() const
{
    std::vector<int> d(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        deepest = std::max(deepest, d[i]);
        if (!nodes[i].is_leaf())
        {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

double ForestModel::raw_output(std::span<const double> x) const
{
    if (x.size() != feature_count)
        throw ShapeError("feature width " + std::to_string(x.size()) + " != model width " +
                         std::to_string(feature_count));
    double sum = 0.0;
    for (const auto& t : trees)
        sum += t.predict(x);
    if (mode == EnsembleMode::bagging)
        return trees.empty() ? 0.0 : sum / static_cast<double>(trees.size());
    return base_score + learning_rate * sum;
}

double ForestModel::probability(std::span<const double> x) const
{
    const double raw = raw_output(x);
    return mode == EnsembleMode::bagging ? raw : sigmoid(raw);
}

namespace
{
/// Column-major copy of the training matrix plus each feature's row order.
struct Presorted
{
    std::size_t rows = 0;
    std::size_t features = 0;
    std::vector<double> columns;               // features x rows
    std::vector<std::vector<std::uint32_t>> order;  // per feature, rows by value

    explicit Presorted(const FeatureMatrix& m) : rows(m.rows()), features(m.width())
    {
        columns.resize(rows * features);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < features; ++j)
                columns[j * rows + i] = m.at(i, j);
        order.resize(features);
        for (std::size_t j = 0; j < features; ++j)
        {
            auto& o = order[j];
            o.resize(rows);
            std::iota(o.begin(), o.end(), 0u);
            const double* col = &columns[j * rows];
            std::stable_sort(o.begin(), o.end(), [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
        }
    }

    double value(std::size_t feature, std::size_t row) const { return columns[feature * rows + row]; }
};

struct BuilderConfig
{
    int max_depth = 0;
    std::size_t candidate_features = 0;
    bool randomize_features = true;
    std::size_t min_samples_leaf = 1;
    bool boosting = false;
    double leaf_l2 = 1.0;
    double min_child_weight = 1.0;
};

/// Grows one tree over "positions": each training row appears once per
/// bootstrap draw. Every feature keeps its positions sorted by value; a node
/// owns the same [begin, end) range in all of them.
class TreeBuilder
{
public:
    TreeBuilder(const Presorted& data, const BuilderConfig& config) : data_(data), config_(config) {}

    /// `multiplicity[row]` copies of each row; `target` holds the class
    /// (0/1) for classification or the gradient for boosting, `hessian`
    /// is only read when boosting.
    DecisionTree build(std::span<const std::uint32_t> multiplicity, std::span<const double> target,
                       std::span<const double> hessian, Rng* rng)
    {
        const auto F = data_.features;
        row_of_.clear();
        std::vector<std::uint32_t> first_position(data_.rows, 0);
        for (std::size_t r = 0; r < data_.rows; ++r)
        {
            first_position[r] = static_cast<std::uint32_t>(row_of_.size());
            for (std::uint32_t c = 0; c < multiplicity[r]; ++c)
                row_of_.push_back(static_cast<std::uint32_t>(r));
        }
        const auto m = row_of_.size();
        target_.resize(m);
        hessian_.resize(m);
        for (std::size_t p = 0; p < m; ++p)
        {
            target_[p] = target[row_of_[p]];
            hessian_[p] = config_.boosting ? hessian[row_of_[p]] : 1.0;
        }
        sorted_.resize(F * m);
        for (std::size_t f = 0; f < F; ++f)
        {
            auto* out = &sorted_[f * m];
            for (const auto r : data_.order[f])
                for (std::uint32_t c = 0; c < multiplicity[r]; ++c)
                    *out++ = first_position[r] + c;
        }
        goes_left_.assign(m, 0);
        scratch_.resize(m);
        feature_order_.resize(F);
        std::iota(feature_order_.begin(), feature_order_.end(), 0u);

        DecisionTree tree;
        tree.nodes.emplace_back();
        struct Pending
        {
            std::size_t node, begin, end;
            int depth;
        };
        std::vector<Pending> stack{{0, 0, m, 0}};
        while (!stack.empty())
        {
            const auto job = stack.back();
            stack.pop_back();
            const auto split = grow(tree, job.node, job.begin, job.end, job.depth, rng);
            if (split)
            {
                const auto mid = job.begin + *split;
                const auto left = tree.nodes.size();
                tree.nodes.emplace_back();
                tree.nodes.emplace_back();
                tree.nodes[job.node].left = static_cast<int>(left);
                tree.nodes[job.node].right = static_cast<int>(left + 1);
                stack.push_back({left + 1, mid, job.end, job.depth + 1});
                stack.push_back({left, job.begin, mid, job.depth + 1});
            }
        }
        return tree;
    }

private:
    struct Stats
    {
        double count = 0, sum = 0, hess = 0;
    };

    double leaf_weight(const Stats& s) const { return -s.sum / (s.hess + config_.leaf_l2); }

    /// Gini proxy (higher is purer) or boosting structure score.
    double score(const Stats& s) const
    {
        if (config_.boosting)
            return s.sum * s.sum / (s.hess + config_.leaf_l2);
        const double neg = s.count - s.sum;
        return (s.sum * s.sum + neg * neg) / s.count;
    }

    bool admissible(const Stats& left, const Stats& right) const
    {
        const auto min_leaf = static_cast<double>(config_.min_samples_leaf);
        if (left.count < min_leaf || right.count < min_leaf)
            return false;
        if (config_.boosting && (left.hess < config_.min_child_weight || right.hess < config_.min_child_weight))
            return false;
        return true;
    }

    /// Fills node statistics; returns the left-child size if the node splits.
    std::optional<std::size_t> grow(DecisionTree& tree, std::size_t node_id, std::size_t begin, std::size_t end,
                                    int depth, Rng* rng)
    {
        const auto m = row_of_.size();
        const auto* any = &sorted_[begin];
        Stats total;
        for (std::size_t i = begin; i < end; ++i)
        {
            const auto p = any[i - begin];
            total.count += 1;
            total.sum += target_[p];
            total.hess += hessian_[p];
        }
        {
            auto& node = tree.nodes[node_id];
            node.cover = total.count;
            if (config_.boosting)
                node.value = leaf_weight(total);
            else
            {
                node.positive_fraction = total.sum / total.count;
                node.value = node.positive_fraction > 0.5 ? 1.0 : 0.0;
            }
        }

        if (config_.max_depth > 0 && depth >= config_.max_depth)
            return std::nullopt;
        if (total.count < 2.0 * static_cast<double>(config_.min_samples_leaf))
            return std::nullopt;
        if (!config_.boosting && (total.sum == 0 || total.sum == total.count))
            return std::nullopt;

        const double parent_score = score(total);
        const auto F = data_.features;
        int best_feature = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        double best_threshold = 0;
        std::size_t best_left = 0;
        std::size_t evaluated = 0;

        for (std::size_t j = 0; j < F && evaluated < config_.candidate_features; ++j)
        {
            if (config_.randomize_features)
                std::swap(feature_order_[j], feature_order_[j + rng->below(F - j)]);
            const auto f = feature_order_[j];
            const auto* seg = &sorted_[f * m + begin];
            const auto n = end - begin;
            const double lo = data_.value(f, row_of_[seg[0]]);
            const double hi = data_.value(f, row_of_[seg[n - 1]]);
            if (lo == hi)
                continue;
            ++evaluated;

            Stats left;
            double prev = lo;
            for (std::size_t i = 0; i + 1 < n; ++i)
            {
                const auto p = seg[i];
                left.count += 1;
                left.sum += target_[p];
                left.hess += hessian_[p];
                const double next = data_.value(f, row_of_[seg[i + 1]]);
                prev = data_.value(f, row_of_[p]);
                if (next == prev)
                    continue;
                const Stats right{total.count - left.count, total.sum - left.sum, total.hess - left.hess};
                if (!admissible(left, right))
                    continue;
                const double s = score(left) + score(right);
                if (s > best_score)
                {
                    best_score = s;
                    best_feature = static_cast<int>(f);
                    best_threshold = prev + (next - prev) / 2.0;
                    // Midpoint rounding can land on `next` for adjacent doubles.
                    if (!(best_threshold < next))
                        best_threshold = prev;
                    best_left = i + 1;
                }
            }
        }

        if (best_feature < 0)
            return std::nullopt;
        // Boosted splits must strictly reduce the loss; classification splits
        // only need a valid partition of an impure node.
        if (config_.boosting && !(best_score - parent_score > 1e-12))
            return std::nullopt;

        auto& node = tree.nodes[node_id];
        node.feature = best_feature;
        node.threshold = best_threshold;
        partition(static_cast<std::size_t>(best_feature), best_threshold, begin, end);
        return best_left;
    }

    void partition(std::size_t feature, double threshold, std::size_t begin, std::size_t end)
    {
        const auto m = row_of_.size();
        for (std::size_t i = begin; i < end; ++i)
        {
            const auto p = sorted_[feature * m + i];
            goes_left_[p] = data_.value(feature, row_of_[p]) <= threshold;
        }
        for (std::size_t f = 0; f < data_.features; ++f)
        {
            auto* seg = &sorted_[f * m];
            std::size_t l = begin, r = 0;
            for (std::size_t i = begin; i < end; ++i)
            {
                const auto p = seg[i];
                if (goes_left_[p])
                    seg[l++] = p;
                else
                    scratch_[r++] = p;
            }
            std::copy_n(scratch_.begin(), r, seg + l);
        }
    }

    const Presorted& data_;
    BuilderConfig config_;
    std::vector<std::uint32_t> row_of_;
    std::vector<double> target_, hessian_;
    std::vector<std::uint32_t> sorted_;
    std::vector<std::uint8_t> goes_left_;
    std::vector<std::uint32_t> scratch_;
    std::vector<std::uint32_t> feature_order_;
};

void check_trainable(const FeatureMatrix& features)
{
    if (features.rows() < 2)
        throw DegenerateError("training needs at least 2 samples, got " + std::to_string(features.rows()));
    std::size_t positives = 0;
    for (const auto l : features.labels())
        positives += l == Label::phishing;
    if (positives == 0 || positives == features.rows())
        throw DegenerateError("training data contains a single class");
    if (features.width() == 0)
        throw DegenerateError("training data has no features");
}
}  // namespace

ForestModel train_random_forest(const FeatureMatrix& features, const Hyperparams& params, unsigned workers)
{
    check_trainable(features);
    if (params.n_trees < 1)
        throw ValidationError("random forest needs at least one tree");
    const Presorted data{features};
    const auto F = features.width();
    BuilderConfig config;
    config.max_depth = params.max_depth;
    config.candidate_features = params.max_features > 0
                                    ? std::min<std::size_t>(static_cast<std::size_t>(params.max_features), F)
                                    : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(F))));
    config.randomize_features = true;
    config.min_samples_leaf = static_cast<std::size_t>(std::max(1, params.min_samples_leaf));

    std::vector<double> target(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i)
        target[i] = features.label(i) == Label::phishing ? 1.0 : 0.0;

    ForestModel model;
    model.mode = EnsembleMode::bagging;
    model.feature_count = F;
    model.trees.resize(static_cast<std::size_t>(params.n_trees));
    parallel_for(model.trees.size(), workers, [&](std::size_t t) {
        Rng rng{mix_seed(params.seed, t)};
        std::vector<std::uint32_t> multiplicity(features.rows(), params.bootstrap ? 0 : 1);
        if (params.bootstrap)
            for (std::size_t draw = 0; draw < features.rows(); ++draw)
                ++multiplicity[rng.below(features.rows())];
        TreeBuilder builder{data, config};
        model.trees[t] = builder.build(multiplicity, target, {}, &rng);
    });
    return model;
}

ForestModel train_gbdt(const FeatureMatrix& features, const Hyperparams& params, unsigned workers)
{
    (void)workers;
    check_trainable(features);
    if (params.n_trees < 0)
        throw ValidationError("boosting rounds must be non-negative");
    const auto n = features.rows();
    const Presorted data{features};
    BuilderConfig config;
    config.boosting = true;
    config.max_depth = params.max_depth;
    config.candidate_features =
        params.max_features > 0 ? std::min<std::size_t>(static_cast<std::size_t>(params.max_features), features.width())
                                : features.width();
    config.randomize_features = params.max_features > 0;
    config.min_samples_leaf = static_cast<std::size_t>(std::max(1, params.min_samples_leaf));
    config.leaf_l2 = params.leaf_l2;
    config.min_child_weight = params.min_child_weight;

    std::vector<double> y(n);
    double positives = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        y[i] = features.label(i) == Label::phishing ? 1.0 : 0.0;
        positives += y[i];
    }

    ForestModel model;
    model.mode = EnsembleMode::boosting;
    model.feature_count = features.width();
    model.learning_rate = params.learning_rate;
    model.base_score = std::log(positives / (static_cast<double>(n) - positives));

    std::vector<double> margin(n, model.base_score), grad(n), hess(n);
    const std::vector<std::uint32_t> multiplicity(n, 1);
    Rng rng{mix_seed(params.seed, 0)};
    TreeBuilder builder{data, config};
    for (int round = 0; round < params.n_trees; ++round)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            const double p = sigmoid(margin[i]);
            grad[i] = p - y[i];
            hess[i] = std::max(p * (1.0 - p), 1e-16);
        }
        auto tree = builder.build(multiplicity, grad, hess, &rng);
        for (std::size_t i = 0; i < n; ++i)
            margin[i] += model.learning_rate * tree.predict(features.row(i));
        model.trees.push_back(std::move(tree));
    }
    return model;
}
}  // namespace phishhook
