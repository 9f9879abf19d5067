// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdio>

namespace phishhook::testing
{
double uniform(Rng& rng) { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53; }

namespace
{
struct Weighted
{
    std::uint8_t code;
    double benign;
    double phishing;
};

// Common opcodes with label-dependent weights.
constexpr std::array<Weighted, 24> kMix{{
    {0x60, 10, 10}, {0x80, 6, 6},   {0x52, 3, 3},   {0x51, 3, 3},   {0x01, 3, 2},  {0x03, 2, 1},
    {0x56, 3, 3},   {0x57, 3, 3},   {0x5b, 4, 4},   {0x35, 2, 2},   {0x54, 3, 1},  {0x55, 2, 0.5},
    {0xf1, 0.5, 3}, {0x5a, 0.5, 3}, {0x31, 0.2, 2}, {0xff, 0.05, 1}, {0x33, 1, 2}, {0xa1, 1, 0.2},
    {0x20, 2, 0.5}, {0x14, 2, 2},   {0x90, 3, 3},   {0xf3, 0.5, 0.5}, {0x73, 0.3, 1.5}, {0x5f, 0.5, 0.5},
}};
}  // namespace

Bytes synthetic_bytecode(Label label, Rng& rng, double separation)
{
    std::array<double, kMix.size()> weights{};
    double total = 0.0;
    for (std::size_t i = 0; i < kMix.size(); ++i)
    {
        const double mean = (kMix[i].benign + kMix[i].phishing) / 2.0;
        const double own = label == Label::phishing ? kMix[i].phishing : kMix[i].benign;
        weights[i] = mean + separation * (own - mean);
        total += weights[i];
    }
    const std::size_t length = 40 + rng.below(200);
    Bytes code;
    for (std::size_t n = 0; n < length; ++n)
    {
        double pick = uniform(rng) * total;
        std::size_t i = 0;
        while (i + 1 < kMix.size() && pick >= weights[i])
            pick -= weights[i++];
        const auto op = kMix[i].code;
        code.push_back(op);
        if (op >= 0x60 && op <= 0x7f)
            for (int b = 0; b < op - 0x5f; ++b)
                code.push_back(static_cast<std::uint8_t>(rng.below(256)));
    }
    return code;
}

Corpus synthetic_corpus(const SyntheticOptions& options)
{
    Rng rng{options.seed};
    std::vector<ContractRecord> records;
    std::size_t serial = 0;
    for (std::size_t i = 0; i < options.per_class; ++i)
        for (const auto label : {Label::phishing, Label::benign})
        {
            ContractRecord r;
            char address[43];
            std::snprintf(address, sizeof address, "0x%040zx", ++serial);
            r.address = address;
            r.label = label;
            r.bytecode = synthetic_bytecode(label, rng, options.separation);
            if (options.months > 0)
            {
                auto m = options.first_month;
                for (std::size_t k = 0; k < i % static_cast<std::size_t>(options.months); ++k)
                    m = m.next();
                r.deployed_month = m;
            }
            r.source = "synthetic";
            records.push_back(std::move(r));
        }
    return Corpus{std::move(records)};
}

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, int value_levels)
{
    Rng rng{seed};
    std::vector<std::string> columns;
    for (std::size_t j = 0; j < cols; ++j)
        columns.push_back("f" + std::to_string(j));
    FeatureMatrix m{columns};
    std::vector<double> w(cols);
    for (auto& v : w)
        v = uniform(rng) * 2.0 - 1.0;
    std::vector<double> row(cols);
    for (std::size_t i = 0; i < rows; ++i)
    {
        double score = 0.0;
        for (std::size_t j = 0; j < cols; ++j)
        {
            row[j] = value_levels > 0 ? static_cast<double>(rng.below(static_cast<std::uint64_t>(value_levels)))
                                      : uniform(rng) * 4.0 - 2.0;
            score += w[j] * row[j];
        }
        score += (uniform(rng) - 0.5) * 0.5;
        // Keep both classes present on tiny instances.
        const Label label = i < 2 ? static_cast<Label>(i) : (score > 0 ? Label::phishing : Label::benign);
        m.add_row(row, label, "r" + std::to_string(i));
    }
    return m;
}

namespace
{
int grow(DecisionTree& tree, Rng& rng, std::size_t features, int depth, double cover, bool boosting)
{
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[static_cast<std::size_t>(index)].cover = cover;
    const bool leaf = depth == 0 || cover < 2.0 || (tree.nodes.size() > 1 && rng.below(4) == 0);
    if (leaf)
    {
        auto& n = tree.nodes[static_cast<std::size_t>(index)];
        n.value = boosting ? uniform(rng) * 2.0 - 1.0 : static_cast<double>(rng.below(2));
        n.positive_fraction = n.value;
        return index;
    }
    const auto feature = static_cast<int>(rng.below(features));
    const double threshold = static_cast<double>(rng.below(4)) + 0.5;
    const double left_cover = std::max(1.0, std::floor(cover * (0.2 + 0.6 * uniform(rng))));
    const int left = grow(tree, rng, features, depth - 1, left_cover, boosting);
    const int right = grow(tree, rng, features, depth - 1, cover - left_cover, boosting);
    auto& n = tree.nodes[static_cast<std::size_t>(index)];
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    return index;
}
}  // namespace

DecisionTree random_tree(Rng& rng, std::size_t features, int max_depth, bool boosting)
{
    DecisionTree t;
    grow(t, rng, features, max_depth, 20.0 + static_cast<double>(rng.below(80)), boosting);
    return t;
}

ForestModel random_forest_model(Rng& rng, std::size_t features, std::size_t trees, int max_depth, bool boosting)
{
    ForestModel m;
    m.mode = boosting ? EnsembleMode::boosting : EnsembleMode::bagging;
    m.learning_rate = boosting ? 0.3 : 1.0;
    m.feature_count = features;
    m.base_score = boosting ? uniform(rng) - 0.5 : 0.0;
    for (std::size_t t = 0; t < trees; ++t)
        m.trees.push_back(random_tree(rng, features, max_depth, boosting));
    return m;
}
}  // namespace phishhook::testing
