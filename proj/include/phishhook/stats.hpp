// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phishhook::stats
{
inline constexpr double kAlpha = 0.05;

enum class TestMethod : std::uint8_t
{
    shapiro_wilk,
    kruskal_wallis,
    dunn,
    friedman,
    wilcoxon,
    cliffs_delta,
};

std::string_view to_string(TestMethod method) noexcept;

struct StatTestResult
{
    TestMethod method = TestMethod::kruskal_wallis;
    /// W, H, Z, chi-square, W (signed-rank) or delta depending on the method.
    double statistic = 0.0;
    double p = 1.0;
    std::optional<double> p_adj;
    std::optional<std::pair<std::size_t, std::size_t>> pair;

    bool significant(double alpha = kAlpha) const { return p_adj.value_or(p) < alpha; }
};

/// Average ranks (1-based) of `values`; ties share the mean of their
/// positions. Appends the length of every tied run (> 1) to `ties`.
std::vector<double> average_ranks(std::span<const double> values, std::vector<std::size_t>* ties = nullptr);

/// sum over tied runs of t^3 - t.
double tie_term(std::span<const std::size_t> ties);

struct RankSummary
{
    std::vector<std::size_t> group_sizes;
    std::vector<double> rank_sums;
    std::vector<double> mean_ranks;
    std::size_t total = 0;
    std::vector<std::size_t> tie_groups;
};

/// Ranks the pooled groups jointly.
RankSummary rank_groups(std::span<const std::vector<double>> groups);

/// Royston's W and p-value; 3 <= n <= 5000. Throws DegenerateError on a
/// constant sample.
StatTestResult shapiro_wilk(std::span<const double> sample);

struct KruskalWallisResult
{
    StatTestResult test;
    RankSummary ranks;
};

/// Tie-corrected H with a chi-square(k - 1) p-value; needs >= 3 non-empty
/// groups and at least two distinct values overall.
KruskalWallisResult kruskal_wallis(std::span<const std::vector<double>> groups);

/// Dunn's z for every unordered pair (i < j), two-sided normal p-values and
/// Holm-adjusted p_adj across the pairs. The default denominator has no
/// tie term; `tie_correction` subtracts sum(t^3 - t) / (12 (N - 1)).
std::vector<StatTestResult> dunn_pairwise(std::span<const std::vector<double>> groups, bool tie_correction = false);

/// Holm's step-down adjustment, returned in input order.
std::vector<double> holm_bonferroni(std::span<const double> p_values);

/// `matrix[t][b]` is treatment t measured on block b.
using BlockMatrix = std::vector<std::vector<double>>;

StatTestResult friedman(const BlockMatrix& matrix);

/// Signed-rank test on paired samples; zero differences are dropped. The
/// statistic is min(W+, W-). For n <= 25 the two-sided p is exact, else a
/// tie-corrected normal approximation with continuity correction.
StatTestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Exact two-sided signed-rank p for the given absolute-difference ranks
/// (any multiples of 0.5) and statistic.
double wilcoxon_exact_p(std::span<const double> ranks, double statistic);

/// delta = (#{x > y} - #{x < y}) / (nx ny). The p-value comes from the
/// tie-corrected Mann-Whitney normal approximation on the same pairs.
StatTestResult cliffs_delta(std::span<const double> x, std::span<const double> y);

struct CddInputs
{
    StatTestResult friedman;
    /// Rank 1 is best (largest value within a block).
    std::vector<double> mean_ranks;
    /// Wilcoxon with Holm across pairs, i < j.
    std::vector<StatTestResult> pairs;
    std::vector<std::vector<bool>> significant;
};

CddInputs cdd_inputs(const BlockMatrix& matrix, double alpha = kAlpha);

// ---------------------------------------------------------------------------
// Post hoc analysis over per-model trial values.

struct PosthocInput
{
    std::vector<std::string> groups;
    std::vector<std::string> metrics;
    /// values[metric][group] = trial values.
    std::vector<std::vector<std::vector<double>>> values;
};

struct TestRow
{
    std::string metric;
    std::string group_a;
    std::string group_b;
    StatTestResult result;
    /// Set when the test could not be computed (e.g. constant sample).
    std::string note;
};

struct PosthocReport
{
    std::vector<TestRow> shapiro;
    /// One row per metric; p_adj is Holm across the metrics.
    std::vector<TestRow> kruskal;
    /// Per metric, Holm across that metric's pairs.
    std::vector<TestRow> dunn;
    std::vector<std::string> groups;
    std::vector<std::string> metrics;
};

PosthocReport posthoc(const PosthocInput& input, bool dunn_tie_correction = false);

/// Share of Dunn pairs for `metric` with p_adj < alpha.
double significant_pair_share(const PosthocReport& report, std::string_view metric, double alpha = kAlpha);

/// method,metric,group_a,group_b,statistic,p,p_adj,significant,note
void write_test_rows_csv(std::span<const TestRow> rows, std::ostream& out);
void write_test_rows_csv(std::span<const TestRow> rows, const std::filesystem::path& path);

/// Square p_adj matrix per metric: metric,group,<group...>; the diagonal is 1.
void write_dunn_matrix_csv(const PosthocReport& report, std::ostream& out);
void write_dunn_matrix_csv(const PosthocReport& report, const std::filesystem::path& path);

/// treatment,mean_rank
void write_cdd_ranks_csv(const CddInputs& cdd, std::span<const std::string> names, std::ostream& out);
/// treatment_a,treatment_b,statistic,p,p_adj,significant
void write_cdd_pairs_csv(const CddInputs& cdd, std::span<const std::string> names, std::ostream& out);
}  // namespace phishhook::stats
