// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace phishhook::special
{
/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly in the tail so small values keep their relative accuracy.
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi2_sf(double x, double df);

double normal_cdf(double z);
double normal_sf(double z);
/// Inverse standard normal CDF (Wichura's AS241), p in (0, 1).
double normal_quantile(double p);
}  // namespace phishhook::special
