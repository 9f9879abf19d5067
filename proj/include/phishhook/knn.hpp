// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "features.hpp"

#include <span>
#include <vector>

namespace phishhook
{
struct Neighbor
{
    std::size_t index = 0;
    double distance = 0.0;
    Label label = Label::benign;
};

struct KnnResult
{
    Label label = Label::benign;
    /// Share of phishing labels among the neighbors.
    double probability = 0.0;
    /// Nearest first; equal distances keep training order.
    std::vector<Neighbor> neighbors;
};

/// Euclidean k-nearest-neighbor vote; a tied vote resolves to benign.
KnnResult knn_predict(const FeatureMatrix& train, std::span<const double> query, int k);

struct KnnModel
{
    FeatureMatrix train;
    int k = 5;
    bool operator==(const KnnModel& o) const;
};
}  // namespace phishhook
