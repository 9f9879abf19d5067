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
enum class LinearLoss : std::uint8_t
{
    logistic,
    hinge,
};

struct LinearModel
{
    std::vector<double> weights;
    double bias = 0.0;
    LinearLoss loss = LinearLoss::logistic;
    double l2 = 0.0;

    double margin(std::span<const double> x) const;
    /// sigmoid(margin); for the hinge loss this is a monotone score, not a
    /// calibrated probability.
    double probability(std::span<const double> x) const;
    bool operator==(const LinearModel&) const = default;
};

/// Mean per-sample loss plus (l2 / 2) * |w|^2; labels map to -1 / +1.
double linear_objective(const LinearModel& model, const FeatureMatrix& data);

/// (Sub)gradient of linear_objective: weight components then the bias.
std::vector<double> linear_gradient(const LinearModel& model, const FeatureMatrix& data);

/// Full-batch gradient descent from zero weights until the gradient norm
/// drops below params.tol or params.max_iter steps. With line_search,
/// steps backtrack until the objective decreases (Armijo); otherwise the
/// fixed params.step is used. `objective_trace`, when given, receives the
/// objective before the first and after every accepted step.
LinearModel train_linear(const FeatureMatrix& data, LinearLoss loss, const Hyperparams& params,
                         std::vector<double>* objective_trace = nullptr);
}  // namespace phishhook
