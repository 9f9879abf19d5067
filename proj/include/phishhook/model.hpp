// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "features.hpp"
#include "hyperparams.hpp"
#include "knn.hpp"
#include "linear.hpp"
#include "tree.hpp"

#include <json.hpp>

#include <filesystem>
#include <variant>
#include <vector>

namespace phishhook
{
using Model = std::variant<ForestModel, LinearModel, KnnModel>;

/// Family-specific defaults used by the CLI and the harnesses.
Hyperparams default_hyperparams(Family family);

Model train_model(const FeatureMatrix& features, const Hyperparams& params, unsigned workers = 1);

std::size_t feature_count(const Model& model);

struct Predictions
{
    std::vector<double> probability;
    std::vector<Label> labels;
};

/// Phishing probability per row and a hard label (probability > threshold,
/// so a 0.5 tie at the default threshold is benign). Throws ShapeError on
/// a width mismatch.
Predictions predict(const Model& model, const FeatureMatrix& features, double threshold = 0.5,
                    unsigned workers = 1);

/// A trained model together with the vocabulary its columns follow.
struct ModelBundle
{
    Vocabulary vocabulary;
    Hyperparams params;
    Model model;
};

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& j);

void save_bundle_json(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle_json(const std::filesystem::path& path);

/// Compact little-endian binary form ("PHHK" magic, format version).
void save_bundle_binary(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle_binary(const std::filesystem::path& path);
}  // namespace phishhook
