// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks that need no external dataset.

#include "criteria.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

#include <phishhook/csv.hpp>
#include <phishhook/disasm.hpp>
#include <phishhook/experiments.hpp>
#include <phishhook/hex.hpp>
#include <phishhook/metrics.hpp>
#include <phishhook/opcodes.hpp>
#include <phishhook/shap.hpp>
#include <phishhook/special.hpp>
#include <phishhook/stats.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

using namespace phishhook;
using acceptance::Findings;
using acceptance::num;

namespace
{
void disassembler(Findings& f)
{
    const auto ins = disassemble(std::string_view{"0x6080604052"});
    f.expect(ins.size() == 3, "expected 3 instructions, got " + std::to_string(ins.size()));
    if (ins.size() == 3)
    {
        const char* names[] = {"PUSH1", "PUSH1", "MSTORE"};
        const char* operands[] = {"0x80", "0x40", ""};
        for (std::size_t i = 0; i < 3; ++i)
        {
            f.expect(ins[i].mnemonic == names[i], "mnemonic " + ins[i].mnemonic);
            const auto op = ins[i].operand ? to_hex_prefixed(*ins[i].operand) : std::string{};
            f.expect(op == operands[i], "operand " + op);
            f.expect(ins[i].gas == 3u, "gas of " + ins[i].mnemonic);
        }
    }
    Rng rng{20240601};
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 10000; ++trial)
    {
        Bytes code(rng.below(128));
        for (auto& b : code)
            b = static_cast<std::uint8_t>(rng.below(256));
        mismatches += reassemble(disassemble(BytesView{code})) != code;
    }
    f.expect(mismatches == 0, std::to_string(mismatches) + " reconstruction mismatches");
}

void opcode_table(Findings& f)
{
    const auto& t = OpcodeTable::shanghai();
    f.expect(t.size() == 144, "table has " + std::to_string(t.size()) + " entries");
    const std::pair<const char*, std::optional<std::uint32_t>> spots[] = {
        {"STOP", 0u}, {"ADD", 3u}, {"MUL", 5u}, {"REVERT", 0u}, {"INVALID", std::nullopt}, {"SELFDESTRUCT", 5000u}};
    for (const auto& [name, gas] : spots)
    {
        const auto code = t.code_of(name);
        f.expect(code.has_value(), std::string{name} + " missing");
        if (code)
            f.expect(t[*code].static_gas == gas, std::string{name} + " gas mismatch");
    }
}

// Path-conditional expectation with the features in `mask` fixed to x.
double conditional(const DecisionTree& tree, int node, std::span<const double> x, unsigned mask)
{
    const auto& n = tree.nodes[static_cast<std::size_t>(node)];
    if (n.is_leaf())
        return n.value;
    if (mask & (1u << n.feature))
        return conditional(tree, x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right, x, mask);
    const auto& l = tree.nodes[static_cast<std::size_t>(n.left)];
    const auto& r = tree.nodes[static_cast<std::size_t>(n.right)];
    return (l.cover * conditional(tree, n.left, x, mask) + r.cover * conditional(tree, n.right, x, mask)) / n.cover;
}

double coalition_value(const ForestModel& m, std::span<const double> x, unsigned mask)
{
    const double scale = m.mode == EnsembleMode::bagging ? 1.0 / static_cast<double>(m.trees.size()) : m.learning_rate;
    double sum = 0.0;
    for (const auto& t : m.trees)
        sum += conditional(t, 0, x, mask);
    return (m.mode == EnsembleMode::boosting ? m.base_score : 0.0) + scale * sum;
}

void tree_shap_oracle(Findings& f)
{
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        Rng rng{seed * 7919 + 1};
        const std::size_t features = 1 + rng.below(10);
        const std::size_t trees = 1 + rng.below(5);
        const int depth = 1 + static_cast<int>(rng.below(3));
        const auto m = testing::random_forest_model(rng, features, trees, depth, seed % 2 == 1);
        std::vector<double> x(features);
        for (auto& v : x)
            v = std::floor(testing::uniform(rng) * 8.0);
        const auto report = tree_shap(m, x);

        std::vector<double> values(1u << features);
        for (unsigned mask = 0; mask < values.size(); ++mask)
            values[mask] = coalition_value(m, x, mask);
        std::vector<double> fact(features + 1, 1.0);
        for (std::size_t i = 1; i <= features; ++i)
            fact[i] = fact[i - 1] * static_cast<double>(i);
        for (std::size_t i = 0; i < features; ++i)
        {
            double phi = 0.0;
            for (unsigned mask = 0; mask < values.size(); ++mask)
                if (!(mask & (1u << i)))
                {
                    const auto s = static_cast<std::size_t>(__builtin_popcount(mask));
                    phi += fact[s] * fact[features - s - 1] / fact[features] * (values[mask | (1u << i)] - values[mask]);
                }
            worst = std::max(worst, std::abs(phi - report.shap_values[i]));
        }
        const double total = std::accumulate(report.shap_values.begin(), report.shap_values.end(), report.base_value);
        f.expect(std::abs(total - m.raw_output(x)) < 1e-9, "local accuracy on random forest " + std::to_string(seed));
    }
    f.expect(worst < 1e-9, "max |TreeSHAP - brute force| = " + num(worst));

    // Local accuracy on trained models over a synthetic split.
    const auto samples = opcode_samples(testing::synthetic_corpus({.per_class = 40}));
    const auto plan = make_folds(labels_of(samples), 4, 0);
    const auto test_idx = plan.test_indices(0);
    for (const auto family : {Family::random_forest, Family::gbdt})
    {
        auto params = default_hyperparams(family);
        params.n_trees = 25;
        const auto data = split_data(samples, plan.train_indices(0), test_idx);
        const auto forest = std::get<ForestModel>(train_model(data.train, params));
        for (std::size_t i = 0; i < data.test.rows(); ++i)
        {
            const auto r = tree_shap(forest, data.test.row(i));
            const double total = std::accumulate(r.shap_values.begin(), r.shap_values.end(), r.base_value);
            f.expect(std::abs(total - forest.raw_output(data.test.row(i))) < 1e-9,
                     std::string{to_string(family)} + " local accuracy on row " + std::to_string(i));
        }
    }
}

void statistics(Findings& f)
{
    const std::vector<std::vector<double>> g{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
    const double h = stats::kruskal_wallis(g).test.statistic;
    f.expect(std::abs(h - 7.2) < 1e-9, "H = " + num(h));

    const std::vector<double> line{1, 2, 3};
    const double w = stats::shapiro_wilk(line).statistic;
    f.expect(std::abs(w - 1.0) < 1e-6, "W = " + num(w));

    const std::vector<double> p{0.01, 0.04};
    const auto adj = stats::holm_bonferroni(p);
    f.expect(std::abs(adj[0] - 0.02) < 1e-15 && std::abs(adj[1] - 0.04) < 1e-15, "Holm adjusted values");

    for (std::size_t n = 1; n <= 10; ++n)
    {
        std::vector<double> ranks(n);
        std::iota(ranks.begin(), ranks.end(), 1.0);
        if (n >= 4)
            ranks[1] = ranks[2] = 2.5;  // one tied pair
        const double total = std::accumulate(ranks.begin(), ranks.end(), 0.0);
        for (double stat = 0.0; stat <= total / 2.0; stat += 0.5)
        {
            std::size_t below = 0;
            for (unsigned mask = 0; mask < (1u << n); ++mask)
            {
                double t = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (1u << i))
                        t += ranks[i];
                below += t <= stat;
            }
            const double expected = std::min(1.0, 2.0 * static_cast<double>(below) / std::ldexp(1.0, static_cast<int>(n)));
            const double got = stats::wilcoxon_exact_p(ranks, stat);
            f.expect(std::abs(got - expected) < 1e-14,
                     "Wilcoxon n=" + std::to_string(n) + " T=" + num(stat) + ": " + num(got) + " vs " + num(expected));
        }
    }

    const std::vector<double> lo{1, 2, 3}, hi{4, 5, 6};
    f.expect(stats::cliffs_delta(hi, lo).statistic == 1.0, "delta(hi, lo)");
    f.expect(stats::cliffs_delta(lo, hi).statistic == -1.0, "delta(lo, hi)");
    f.expect(stats::cliffs_delta(lo, lo).statistic == 0.0, "delta(lo, lo)");

    // Reference values from mpmath (50 digits).
    struct Probe
    {
        const char* name;
        double got, expected;
    };
    const Probe probes[] = {
        {"chi2_sf(3.84,1)", special::chi2_sf(3.84, 1), 0.050043521248705103},
        {"chi2_sf(10,3)", special::chi2_sf(10, 3), 0.018566135463043233},
        {"chi2_sf(360.81,12)", special::chi2_sf(360.81, 12), 7.3333504202242547e-70},
        {"chi2_sf(50,10)", special::chi2_sf(50, 10), 2.6690834249044956e-7},
        {"chi2_sf(0.001,2)", special::chi2_sf(0.001, 2), 0.99950012497916927},
        {"chi2_sf(1500,1000)", special::chi2_sf(1500, 1000), 1.0454640385979657e-22},
        {"normal_sf(1.96)", special::normal_sf(1.96), 0.024997895148220436},
        {"normal_sf(5)", special::normal_sf(5), 2.8665157187919391e-7},
        {"normal_sf(8)", special::normal_sf(8), 6.2209605742717841e-16},
        {"normal_sf(-2)", special::normal_sf(-2), 0.97724986805182079},
        {"normal_sf(12)", special::normal_sf(12), 1.776482112077679e-33},
    };
    for (const auto& pr : probes)
        f.expect(std::abs(pr.got - pr.expected) <= 5e-9 * std::abs(pr.expected),
                 std::string{pr.name} + " = " + num(pr.got));
}

void area_under_time(Findings& f)
{
    const std::vector<double> constant{1.0, 1.0, 1.0, 1.0};
    const std::vector<double> drop{1.0, 0.0};
    const std::vector<double> series{0.9, 0.8, 1.0};
    f.expect(std::abs(aut(constant) - 1.0) < 1e-12, "constant series: " + num(aut(constant)));
    f.expect(std::abs(aut(drop) - 0.5) < 1e-12, "[1,0]: " + num(aut(drop)));
    f.expect(std::abs(aut(series) - 0.875) < 1e-12, "[0.9,0.8,1.0]: " + num(aut(series)));
}

std::string strip_columns(const std::filesystem::path& path, std::initializer_list<std::string_view> drop)
{
    if (!std::filesystem::exists(path))
        return {};
    const auto table = csv::read_table(path);
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < table.header.size(); ++c)
        if (std::find(drop.begin(), drop.end(), table.header[c]) == drop.end())
            keep.push_back(c);
    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < keep.size(); ++i)
            out += (i ? "," : "") + row[keep[i]];
        out += '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows)
        emit(row);
    return out;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string{PHISHHOOK_CLI_PATH} + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

void leakage_and_determinism(Findings& f)
{
    // Vocabulary perturbation: rewriting the held-out fold changes nothing
    // learned from the training fold, at every worker count.
    auto samples = opcode_samples(testing::synthetic_corpus({.per_class = 40, .seed = 5}));
    const auto plan = make_folds(labels_of(samples), 5, 11);
    const auto train = plan.train_indices(2);
    const auto test = plan.test_indices(2);
    auto params = default_hyperparams(Family::random_forest);
    params.n_trees = 20;
    const auto reference = fit_on_indices(samples, train, params, 1);
    auto perturbed = samples;
    for (const auto i : test)
    {
        perturbed[i].counts.fill(0);
        perturbed[i].counts[0x0c] = 1000;
        perturbed[i].counts[0xfe] = 7;
        perturbed[i].label = perturbed[i].label == Label::phishing ? Label::benign : Label::phishing;
    }
    for (const unsigned workers : {1u, 2u, 8u})
    {
        const auto again = fit_on_indices(perturbed, train, params, workers);
        f.expect(again.vocabulary == reference.vocabulary, "vocabulary changed at " + std::to_string(workers) + " workers");
        f.expect(again.model == reference.model, "model changed at " + std::to_string(workers) + " workers");
    }

    // Byte-identical CLI outputs across repeats and worker counts.
    testing::TempDir dir;
    save_corpus(testing::synthetic_corpus({.per_class = 50, .seed = 9, .months = 6}), dir / "corpus.jsonl");
    const auto corpus = (dir / "corpus.jsonl").string();
    const auto out = dir.path().string();
    std::vector<std::string> metrics, models, scal;
    for (const auto& [name, workers] : std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 1}, {"c", 2}, {"d", 8}})
    {
        const auto w = " --workers " + std::to_string(workers) + " --out " + out;
        const int rc1 = run_cli("evaluate --corpus " + corpus + " --model rf --model gbdt --model knn --k 5 --runs 2" + w +
                                " --run-name eval_" + name);
        const int rc2 = run_cli("train --corpus " + corpus + " --model rf --n-trees 30" + w + " --run-name train_" + name);
        const int rc3 = run_cli("scalability --corpus " + corpus + " --model rf --model logreg --k 3 --runs 1" + w +
                                " --run-name scal_" + name);
        f.expect(rc1 == 0 && rc2 == 0 && rc3 == 0, "CLI run " + name + " failed");
        if (rc1 || rc2 || rc3)
            return;
        metrics.push_back(strip_columns(dir / ("eval_" + name + "/metrics.csv"),
                                        {"train_time_s", "infer_time_s"}));
        models.push_back(testing::read_file(dir / ("train_" + name + "/model.json")));
        scal.push_back(strip_columns(dir / ("scal_" + name + "/metrics.csv"),
                                     {"train_time_s", "infer_time_s"}));
    }
    for (std::size_t i = 1; i < metrics.size(); ++i)
    {
        f.expect(!metrics[0].empty() && metrics[i] == metrics[0], "evaluate metrics.csv differs for run " + std::to_string(i));
        f.expect(!models[0].empty() && models[i] == models[0], "train model.json differs for run " + std::to_string(i));
        f.expect(!scal[0].empty() && scal[i] == scal[0], "scalability metrics.csv differs for run " + std::to_string(i));
    }
}
}  // namespace

int main()
{
    const std::vector<acceptance::Criterion> criteria{
        {6, "disassembler golden example and 10,000-string reconstruction identity", disassembler},
        {7, "opcode table size and spot values", opcode_table},
        {8, "TreeSHAP equals brute-force Shapley on 100 random forests; local accuracy", tree_shap_oracle},
        {9, "statistics oracles and special-function probes", statistics},
        {10, "AUT reference values", area_under_time},
        {11, "vocabulary leakage and byte-identical runs across 1, 2, 8 workers", leakage_and_determinism},
    };
    return acceptance::run_criteria(criteria) == 0 ? 0 : 1;
}
