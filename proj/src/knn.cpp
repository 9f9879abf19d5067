// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/knn.hpp"

#include "phishhook/error.hpp"

#include <algorithm>
#include <cmath>

namespace phishhook
{
KnnResult knn_predict(const FeatureMatrix& train, std::span<const double> query, int k)
{
    if (train.rows() == 0)
        throw EmptyInputError("kNN needs a non-empty training set");
    if (k < 1 || static_cast<std::size_t>(k) > train.rows())
        throw ValidationError("k must be in [1, " + std::to_string(train.rows()) + "], got " + std::to_string(k));
    if (query.size() != train.width())
        throw ShapeError("query width " + std::to_string(query.size()) + " != training width " +
                         std::to_string(train.width()));

    std::vector<std::pair<double, std::size_t>> dist(train.rows());
    for (std::size_t i = 0; i < train.rows(); ++i)
    {
        const auto row = train.row(i);
        double d = 0;
        for (std::size_t j = 0; j < row.size(); ++j)
        {
            const double diff = row[j] - query[j];
            d += diff * diff;
        }
        dist[i] = {d, i};
    }
    const auto kk = static_cast<std::size_t>(k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());

    KnnResult result;
    std::size_t votes = 0;
    for (std::size_t n = 0; n < kk; ++n)
    {
        const auto [d, i] = dist[n];
        result.neighbors.push_back({i, std::sqrt(d), train.label(i)});
        votes += train.label(i) == Label::phishing;
    }
    result.probability = static_cast<double>(votes) / static_cast<double>(kk);
    result.label = 2 * votes > kk ? Label::phishing : Label::benign;
    return result;
}

bool KnnModel::operator==(const KnnModel& o) const
{
    if (k != o.k || train.rows() != o.train.rows() || train.columns() != o.train.columns() ||
        train.labels() != o.train.labels())
        return false;
    for (std::size_t i = 0; i < train.rows(); ++i)
    {
        if (train.id(i) != o.train.id(i))
            return false;
        const auto a = train.row(i), b = o.train.row(i);
        if (!std::equal(a.begin(), a.end(), b.begin()))
            return false;
    }
    return true;
}
}  // namespace phishhook
