// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/linear.hpp"

#include "phishhook/error.hpp"
#include "phishhook/tree.hpp"

#include <cmath>

namespace phishhook
{
namespace
{
double sign_of(Label l) noexcept
{
    return l == Label::phishing ? 1.0 : -1.0;
}

/// log(1 + exp(-z)) without overflow.
double logistic_loss(double z) noexcept
{
    return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

double norm2(const std::vector<double>& v)
{
    double s = 0;
    for (const auto x : v)
        s += x * x;
    return s;
}
}  // namespace

double LinearModel::margin(std::span<const double> x) const
{
    if (x.size() != weights.size())
        throw ShapeError("feature width " + std::to_string(x.size()) + " != model width " +
                         std::to_string(weights.size()));
    double m = bias;
    for (std::size_t j = 0; j < x.size(); ++j)
        m += weights[j] * x[j];
    return m;
}

double LinearModel::probability(std::span<const double> x) const
{
    return sigmoid(margin(x));
}

double linear_objective(const LinearModel& model, const FeatureMatrix& data)
{
    double total = 0;
    for (std::size_t i = 0; i < data.rows(); ++i)
    {
        const double z = sign_of(data.label(i)) * model.margin(data.row(i));
        total += model.loss == LinearLoss::logistic ? logistic_loss(z) : std::max(0.0, 1.0 - z);
    }
    double w2 = 0;
    for (const auto w : model.weights)
        w2 += w * w;
    return total / static_cast<double>(data.rows()) + 0.5 * model.l2 * w2;
}

std::vector<double> linear_gradient(const LinearModel& model, const FeatureMatrix& data)
{
    const auto F = model.weights.size();
    std::vector<double> g(F + 1, 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i)
    {
        const auto x = data.row(i);
        const double y = sign_of(data.label(i));
        const double z = y * model.margin(x);
        double coeff = 0;  // d loss / d margin
        if (model.loss == LinearLoss::logistic)
            coeff = -y * sigmoid(-z);
        else if (z < 1.0)
            coeff = -y;
        if (coeff == 0)
            continue;
        for (std::size_t j = 0; j < F; ++j)
            g[j] += coeff * x[j];
        g[F] += coeff;
    }
    const double inv_n = 1.0 / static_cast<double>(data.rows());
    for (std::size_t j = 0; j < F; ++j)
        g[j] = g[j] * inv_n + model.l2 * model.weights[j];
    g[F] *= inv_n;
    return g;
}

LinearModel train_linear(const FeatureMatrix& data, LinearLoss loss, const Hyperparams& params,
                         std::vector<double>* objective_trace)
{
    if (data.rows() < 2)
        throw DegenerateError("training needs at least 2 samples");
    std::size_t positives = 0;
    for (const auto l : data.labels())
        positives += l == Label::phishing;
    if (positives == 0 || positives == data.rows())
        throw DegenerateError("training data contains a single class");
    if (params.l2 < 0)
        throw ValidationError("l2 must be non-negative");

    LinearModel model;
    model.loss = loss;
    model.l2 = params.l2;
    model.weights.assign(data.width(), 0.0);
    double objective = linear_objective(model, data);
    if (objective_trace)
        objective_trace->push_back(objective);

    double step = params.step;
    for (int iter = 0; iter < params.max_iter; ++iter)
    {
        const auto grad = linear_gradient(model, data);
        const double gnorm2 = norm2(grad);
        if (std::sqrt(gnorm2) < params.tol)
            break;

        auto candidate = model;
        auto apply = [&](double t) {
            for (std::size_t j = 0; j < model.weights.size(); ++j)
                candidate.weights[j] = model.weights[j] - t * grad[j];
            candidate.bias = model.bias - t * grad.back();
        };

        if (!params.line_search)
        {
            apply(step);
            model = candidate;
            objective = linear_objective(model, data);
            if (objective_trace)
                objective_trace->push_back(objective);
            continue;
        }

        bool accepted = false;
        double next_objective = objective;
        for (double t = step; t > 1e-30; t *= 0.5)
        {
            apply(t);
            next_objective = linear_objective(candidate, data);
            if (next_objective <= objective - 0.5 * t * gnorm2 * 1e-4)
            {
                step = t * 2.0;
                accepted = true;
                break;
            }
        }
        if (!accepted || next_objective > objective)
            break;
        model = candidate;
        objective = next_objective;
        if (objective_trace)
            objective_trace->push_back(objective);
    }
    return model;
}
}  // namespace phishhook
