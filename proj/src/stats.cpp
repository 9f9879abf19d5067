// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/stats.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"
#include "phishhook/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

namespace phishhook::stats
{
std::string_view to_string(TestMethod method) noexcept
{
    switch (method)
    {
    case TestMethod::shapiro_wilk:
        return "shapiro_wilk";
    case TestMethod::kruskal_wallis:
        return "kruskal_wallis";
    case TestMethod::dunn:
        return "dunn";
    case TestMethod::friedman:
        return "friedman";
    case TestMethod::wilcoxon:
        return "wilcoxon";
    case TestMethod::cliffs_delta:
        return "cliffs_delta";
    }
    return "?";
}

std::vector<double> average_ranks(std::span<const double> values, std::vector<std::size_t>* ties)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;)
    {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]])
            ++j;
        // Positions i..j-1 (0-based) share rank mean(i+1..j).
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            ranks[order[t]] = rank;
        if (ties && j - i > 1)
            ties->push_back(j - i);
        i = j;
    }
    return ranks;
}

double tie_term(std::span<const std::size_t> ties)
{
    double sum = 0.0;
    for (const auto t : ties)
    {
        const double d = static_cast<double>(t);
        sum += d * d * d - d;
    }
    return sum;
}

RankSummary rank_groups(std::span<const std::vector<double>> groups)
{
    RankSummary s;
    std::vector<double> pooled;
    for (const auto& g : groups)
    {
        s.group_sizes.push_back(g.size());
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    s.total = pooled.size();
    const auto ranks = average_ranks(pooled, &s.tie_groups);
    std::size_t offset = 0;
    for (const auto n : s.group_sizes)
    {
        const double sum = std::accumulate(ranks.begin() + static_cast<std::ptrdiff_t>(offset),
                                           ranks.begin() + static_cast<std::ptrdiff_t>(offset + n), 0.0);
        s.rank_sums.push_back(sum);
        s.mean_ranks.push_back(n == 0 ? 0.0 : sum / static_cast<double>(n));
        offset += n;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk (Royston 1995, algorithm AS R94)

namespace
{
template <std::size_t N>
double poly(const std::array<double, N>& c, double x)
{
    double v = 0.0;
    for (std::size_t i = N; i-- > 0;)
        v = v * x + c[i];
    return v;
}
}  // namespace

StatTestResult shapiro_wilk(std::span<const double> sample)
{
    const std::size_t n = sample.size();
    if (n < 3 || n > 5000)
        throw ValidationError("Shapiro-Wilk needs 3 to 5000 observations, got " + std::to_string(n));
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 0.0))
        throw DegenerateError("Shapiro-Wilk on a constant sample");

    static constexpr std::array<double, 6> c1{0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    static constexpr std::array<double, 6> c2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    static constexpr std::array<double, 4> c3{0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr std::array<double, 4> c4{1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr std::array<double, 4> c5{-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr std::array<double, 3> c6{-0.4803, -0.082676, 0.0030302};

    const std::size_t half = n / 2;
    const double an = static_cast<double>(n);
    // |a[i]| for the i-th smallest order statistic, i < half; m holds the
    // (negative) lower-tail normal scores.
    std::vector<double> a(half);
    if (n == 3)
        a[0] = std::numbers::sqrt2 / 2.0;
    else
    {
        std::vector<double> m(half);
        double summ2 = 0.0;
        for (std::size_t i = 0; i < half; ++i)
        {
            m[i] = special::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
            summ2 += m[i] * m[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        const double a1 = poly(c1, rsn) - m[0] / ssumm2;
        std::size_t first;
        double fac;
        if (n > 5)
        {
            first = 2;
            const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[1] = a2;
        }
        else
        {
            first = 1;
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        for (std::size_t i = first; i < half; ++i)
            a[i] = -m[i] / fac;
    }

    // Work on x / range for conditioning, as the reference does.
    double sx = 0.0;
    for (auto& v : x)
    {
        v /= range;
        sx += v;
    }
    const double mean = sx / an;
    double ssx = 0.0;
    for (const auto v : x)
        ssx += (v - mean) * (v - mean);
    double asa = 0.0;
    double ssa = 0.0;
    for (std::size_t i = 0; i < half; ++i)
    {
        asa += a[i] * (x[i] - x[n - 1 - i]);
        ssa += 2.0 * a[i] * a[i];
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - std::abs(asa)) * (ssassx + std::abs(asa)) / (ssa * ssx);
    const double w = 1.0 - w1;

    StatTestResult r;
    r.method = TestMethod::shapiro_wilk;
    r.statistic = w;
    if (n == 3)
    {
        const double p = 6.0 / std::numbers::pi * (std::asin(std::sqrt(std::min(w, 1.0))) - std::numbers::pi / 3.0);
        r.p = std::clamp(p, 0.0, 1.0);
        return r;
    }
    double y = std::log(w1);
    const double lxx = std::log(an);
    double m;
    double s;
    if (n <= 11)
    {
        const double gamma = -2.273 + 0.459 * an;
        if (y >= gamma)
        {
            r.p = 1e-99;
            return r;
        }
        y = -std::log(gamma - y);
        m = poly(c3, an);
        s = std::exp(poly(c4, an));
    }
    else
    {
        m = poly(c5, lxx);
        s = std::exp(poly(c6, lxx));
    }
    r.p = special::normal_sf((y - m) / s);
    return r;
}

// ---------------------------------------------------------------------------
// Rank tests

KruskalWallisResult kruskal_wallis(std::span<const std::vector<double>> groups)
{
    if (groups.size() < 3)
        throw ValidationError("Kruskal-Wallis needs at least 3 groups");
    for (const auto& g : groups)
        if (g.empty())
            throw EmptyInputError("Kruskal-Wallis group is empty");
    KruskalWallisResult out;
    out.ranks = rank_groups(groups);
    const double n = static_cast<double>(out.ranks.total);
    const double correction = 1.0 - tie_term(out.ranks.tie_groups) / (n * n * n - n);
    if (!(correction > 0.0))
        throw DegenerateError("Kruskal-Wallis: all values are identical");
    double sum = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i)
        sum += out.ranks.rank_sums[i] * out.ranks.rank_sums[i] / static_cast<double>(out.ranks.group_sizes[i]);
    const double h = std::max(0.0, (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction);
    out.test.method = TestMethod::kruskal_wallis;
    out.test.statistic = h;
    out.test.p = special::chi2_sf(h, static_cast<double>(groups.size() - 1));
    return out;
}

std::vector<double> holm_bonferroni(std::span<const double> p_values)
{
    const std::size_t m = p_values.size();
    for (const auto p : p_values)
        if (!(p >= 0.0 && p <= 1.0))
            throw ValidationError("p-values must lie in [0, 1]");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t j = 0; j < m; ++j)
    {
        running = std::max(running, std::min(1.0, static_cast<double>(m - j) * p_values[order[j]]));
        adjusted[order[j]] = running;
    }
    return adjusted;
}

std::vector<StatTestResult> dunn_pairwise(std::span<const std::vector<double>> groups, bool tie_correction)
{
    for (const auto& g : groups)
        if (g.empty())
            throw EmptyInputError("Dunn's test group is empty");
    const auto ranks = rank_groups(groups);
    const double n = static_cast<double>(ranks.total);
    double variance = n * (n + 1.0) / 12.0;
    if (tie_correction && n > 1.0)
        variance -= tie_term(ranks.tie_groups) / (12.0 * (n - 1.0));
    std::vector<StatTestResult> out;
    std::vector<double> ps;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j)
        {
            const double se = std::sqrt(variance * (1.0 / static_cast<double>(ranks.group_sizes[i]) +
                                                    1.0 / static_cast<double>(ranks.group_sizes[j])));
            const double diff = ranks.mean_ranks[i] - ranks.mean_ranks[j];
            StatTestResult r;
            r.method = TestMethod::dunn;
            r.statistic = se > 0.0 ? diff / se : 0.0;
            r.p = std::min(1.0, 2.0 * special::normal_sf(std::abs(r.statistic)));
            r.pair = std::pair{i, j};
            out.push_back(r);
            ps.push_back(r.p);
        }
    const auto adj = holm_bonferroni(ps);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].p_adj = adj[i];
    return out;
}

namespace
{
void check_matrix(const BlockMatrix& matrix)
{
    if (matrix.size() < 2)
        throw DegenerateError("need at least 2 treatments");
    const std::size_t blocks = matrix.front().size();
    if (blocks < 2)
        throw DegenerateError("need at least 2 blocks");
    for (const auto& row : matrix)
        if (row.size() != blocks)
            throw ShapeError("treatments have different block counts");
}

// Within-block ranks; rank 1 goes to the largest value.
std::vector<std::vector<double>> block_ranks(const BlockMatrix& matrix)
{
    const std::size_t k = matrix.size();
    const std::size_t blocks = matrix.front().size();
    std::vector<std::vector<double>> ranks(k, std::vector<double>(blocks));
    std::vector<double> column(k);
    for (std::size_t b = 0; b < blocks; ++b)
    {
        for (std::size_t t = 0; t < k; ++t)
            column[t] = -matrix[t][b];
        const auto r = average_ranks(column);
        for (std::size_t t = 0; t < k; ++t)
            ranks[t][b] = r[t];
    }
    return ranks;
}
}  // namespace

StatTestResult friedman(const BlockMatrix& matrix)
{
    check_matrix(matrix);
    const auto ranks = block_ranks(matrix);
    const double k = static_cast<double>(matrix.size());
    const double n = static_cast<double>(matrix.front().size());
    double sum_sq = 0.0;
    for (const auto& row : ranks)
    {
        const double mean = std::accumulate(row.begin(), row.end(), 0.0) / n;
        sum_sq += mean * mean;
    }
    StatTestResult r;
    r.method = TestMethod::friedman;
    r.statistic = std::max(0.0, 12.0 * n / (k * (k + 1.0)) * sum_sq - 3.0 * n * (k + 1.0));
    // Rounding can leave a tiny positive residue when every block ties.
    if (r.statistic < 1e-9)
        r.statistic = 0.0;
    r.p = special::chi2_sf(r.statistic, k - 1.0);
    return r;
}

double wilcoxon_exact_p(std::span<const double> ranks, double statistic)
{
    // Doubled ranks are integers even with average-rank ties.
    std::vector<std::size_t> doubled;
    std::size_t total = 0;
    for (const auto r : ranks)
    {
        doubled.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
        total += doubled.back();
    }
    std::vector<double> counts(total + 1, 0.0);
    counts[0] = 1.0;
    std::size_t reach = 0;
    for (const auto d : doubled)
    {
        for (std::size_t s = reach + 1; s-- > 0;)
            if (counts[s] != 0.0)
                counts[s + d] += counts[s];
        reach += d;
    }
    const auto limit = static_cast<std::size_t>(std::llround(2.0 * statistic));
    double below = 0.0;
    for (std::size_t s = 0; s <= std::min(limit, total); ++s)
        below += counts[s];
    return std::min(1.0, 2.0 * below / std::ldexp(1.0, static_cast<int>(ranks.size())));
}

StatTestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw ShapeError("Wilcoxon needs paired samples of equal length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] - b[i] != 0.0)
            diffs.push_back(a[i] - b[i]);
    if (diffs.empty())
        throw DegenerateError("Wilcoxon: all paired differences are zero");
    std::vector<double> magnitude(diffs.size());
    std::transform(diffs.begin(), diffs.end(), magnitude.begin(), [](double d) { return std::abs(d); });
    std::vector<std::size_t> ties;
    const auto ranks = average_ranks(magnitude, &ties);
    double w_plus = 0.0;
    double w_minus = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i)
        (diffs[i] > 0.0 ? w_plus : w_minus) += ranks[i];

    StatTestResult r;
    r.method = TestMethod::wilcoxon;
    r.statistic = std::min(w_plus, w_minus);
    const double n = static_cast<double>(diffs.size());
    if (diffs.size() <= 25)
        r.p = wilcoxon_exact_p(ranks, r.statistic);
    else
    {
        const double mean = n * (n + 1.0) / 4.0;
        const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term(ties) / 48.0;
        const double z = std::max(0.0, std::abs(r.statistic - mean) - 0.5) / std::sqrt(var);
        r.p = std::min(1.0, 2.0 * special::normal_sf(z));
    }
    return r;
}

StatTestResult cliffs_delta(std::span<const double> x, std::span<const double> y)
{
    if (x.empty() || y.empty())
        throw EmptyInputError("Cliff's delta needs two non-empty samples");
    double greater = 0.0;
    double less = 0.0;
    for (const auto xi : x)
        for (const auto yj : y)
        {
            if (xi > yj)
                greater += 1.0;
            else if (xi < yj)
                less += 1.0;
        }
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    StatTestResult r;
    r.method = TestMethod::cliffs_delta;
    r.statistic = (greater - less) / (nx * ny);

    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    std::vector<std::size_t> ties;
    average_ranks(pooled, &ties);
    const double n = nx + ny;
    const double u = greater + (nx * ny - greater - less) / 2.0;
    const double var = nx * ny / 12.0 * ((n + 1.0) - (n > 1.0 ? tie_term(ties) / (n * (n - 1.0)) : 0.0));
    if (var > 0.0)
        r.p = std::min(1.0, 2.0 * special::normal_sf(std::abs(u - nx * ny / 2.0) / std::sqrt(var)));
    return r;
}

CddInputs cdd_inputs(const BlockMatrix& matrix, double alpha)
{
    CddInputs out;
    out.friedman = friedman(matrix);
    const auto ranks = block_ranks(matrix);
    for (const auto& row : ranks)
        out.mean_ranks.push_back(std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size()));
    const std::size_t k = matrix.size();
    std::vector<double> ps;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
        {
            StatTestResult r;
            try
            {
                r = wilcoxon_signed_rank(matrix[i], matrix[j]);
            }
            catch (const DegenerateError&)
            {
                // Identical treatments: nothing to distinguish.
                r.method = TestMethod::wilcoxon;
                r.statistic = 0.0;
                r.p = 1.0;
            }
            r.pair = std::pair{i, j};
            out.pairs.push_back(r);
            ps.push_back(r.p);
        }
    const auto adj = holm_bonferroni(ps);
    out.significant.assign(k, std::vector<bool>(k, false));
    for (std::size_t p = 0; p < out.pairs.size(); ++p)
    {
        auto& r = out.pairs[p];
        r.p_adj = adj[p];
        const bool sig = *r.p_adj < alpha;
        out.significant[r.pair->first][r.pair->second] = sig;
        out.significant[r.pair->second][r.pair->first] = sig;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Post hoc pipeline

PosthocReport posthoc(const PosthocInput& input, bool dunn_tie_correction)
{
    if (input.values.size() != input.metrics.size())
        throw ShapeError("post hoc input: metric count mismatch");
    PosthocReport rep;
    rep.groups = input.groups;
    rep.metrics = input.metrics;
    std::vector<double> kw_p;
    for (std::size_t m = 0; m < input.metrics.size(); ++m)
    {
        const auto& per_group = input.values[m];
        if (per_group.size() != input.groups.size())
            throw ShapeError("post hoc input: group count mismatch for " + input.metrics[m]);
        const auto& metric = input.metrics[m];
        for (std::size_t g = 0; g < per_group.size(); ++g)
        {
            TestRow row{metric, input.groups[g], "", {}, ""};
            row.result.method = TestMethod::shapiro_wilk;
            try
            {
                row.result = shapiro_wilk(per_group[g]);
            }
            catch (const Error& e)
            {
                row.result.statistic = std::nan("");
                row.result.p = std::nan("");
                row.note = e.kind();
            }
            rep.shapiro.push_back(std::move(row));
        }
        auto kw = kruskal_wallis(per_group);
        kw_p.push_back(kw.test.p);
        rep.kruskal.push_back({metric, "all", "", kw.test, ""});
        for (auto& d : dunn_pairwise(per_group, dunn_tie_correction))
            rep.dunn.push_back({metric, input.groups[d.pair->first], input.groups[d.pair->second], d, ""});
    }
    const auto adj = holm_bonferroni(kw_p);
    for (std::size_t m = 0; m < rep.kruskal.size(); ++m)
        rep.kruskal[m].result.p_adj = adj[m];
    return rep;
}

double significant_pair_share(const PosthocReport& report, std::string_view metric, double alpha)
{
    std::size_t total = 0;
    std::size_t hits = 0;
    for (const auto& row : report.dunn)
        if (row.metric == metric)
        {
            ++total;
            hits += row.result.significant(alpha) ? 1 : 0;
        }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

void write_test_rows_csv(std::span<const TestRow> rows, std::ostream& out)
{
    out << "method,metric,group_a,group_b,statistic,p,p_adj,significant,note\n";
    for (const auto& r : rows)
    {
        const bool valid = !std::isnan(r.result.p);
        out << to_string(r.result.method) << ',' << csv::escape(r.metric) << ',' << csv::escape(r.group_a) << ','
            << csv::escape(r.group_b) << ',' << csv::format_double(r.result.statistic) << ','
            << csv::format_double(r.result.p) << ','
            << (r.result.p_adj ? csv::format_double(*r.result.p_adj) : std::string{}) << ','
            << (valid && r.result.significant() ? "true" : "false") << ',' << csv::escape(r.note) << '\n';
    }
}

void write_test_rows_csv(std::span<const TestRow> rows, const std::filesystem::path& path)
{
    auto out = csv::open_output(path);
    write_test_rows_csv(rows, out);
}

void write_dunn_matrix_csv(const PosthocReport& report, std::ostream& out)
{
    out << "metric,group";
    for (const auto& g : report.groups)
        out << ',' << csv::escape(g);
    out << '\n';
    const std::size_t k = report.groups.size();
    for (const auto& metric : report.metrics)
    {
        std::vector<std::vector<double>> m(k, std::vector<double>(k, 1.0));
        for (const auto& row : report.dunn)
            if (row.metric == metric)
            {
                const auto [i, j] = *row.result.pair;
                m[i][j] = m[j][i] = row.result.p_adj.value_or(row.result.p);
            }
        for (std::size_t i = 0; i < k; ++i)
        {
            out << csv::escape(metric) << ',' << csv::escape(report.groups[i]);
            for (std::size_t j = 0; j < k; ++j)
                out << ',' << csv::format_double(m[i][j]);
            out << '\n';
        }
    }
}

void write_dunn_matrix_csv(const PosthocReport& report, const std::filesystem::path& path)
{
    auto out = csv::open_output(path);
    write_dunn_matrix_csv(report, out);
}

void write_cdd_ranks_csv(const CddInputs& cdd, std::span<const std::string> names, std::ostream& out)
{
    out << "treatment,mean_rank\n";
    for (std::size_t i = 0; i < cdd.mean_ranks.size(); ++i)
        out << csv::escape(names[i]) << ',' << csv::format_double(cdd.mean_ranks[i]) << '\n';
}

void write_cdd_pairs_csv(const CddInputs& cdd, std::span<const std::string> names, std::ostream& out)
{
    out << "treatment_a,treatment_b,statistic,p,p_adj,significant\n";
    for (const auto& r : cdd.pairs)
        out << csv::escape(names[r.pair->first]) << ',' << csv::escape(names[r.pair->second]) << ','
            << csv::format_double(r.statistic) << ',' << csv::format_double(r.p) << ','
            << csv::format_double(r.p_adj.value_or(r.p)) << ',' << (r.significant() ? "true" : "false") << '\n';
}
}  // namespace phishhook::stats
