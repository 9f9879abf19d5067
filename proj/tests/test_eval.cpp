// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

#include <phishhook/error.hpp>
#include <phishhook/experiments.hpp>
#include <phishhook/grid.hpp>
#include <phishhook/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace phishhook;

namespace
{
std::vector<Label> make_labels(std::size_t pos, std::size_t neg)
{
    std::vector<Label> v(pos, Label::phishing);
    v.insert(v.end(), neg, Label::benign);
    return v;
}

std::vector<OpcodeSample> samples_of(const testing::SyntheticOptions& o)
{
    return opcode_samples(testing::synthetic_corpus(o));
}

ModelSpec small_forest()
{
    auto spec = ModelSpec::of(Family::random_forest);
    spec.params.n_trees = 10;
    return spec;
}
}  // namespace

TEST_SUITE("metrics")
{
    TEST_CASE("worked confusion example")
    {
        const auto m = compute_metrics(Confusion{6, 2, 4, 8});
        CHECK(m.accuracy == doctest::Approx(0.7));
        CHECK(m.precision == doctest::Approx(0.75));
        CHECK(m.recall == doctest::Approx(0.6));
        CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
        CHECK(m.macro_precision == doctest::Approx((0.75 + 8.0 / 12.0) / 2));
        CHECK(m.macro_recall == doctest::Approx(0.7));
        CHECK(m.macro_f1 == doctest::Approx((2.0 / 3.0 + 8.0 / 11.0) / 2));
    }

    TEST_CASE("zero-division conventions")
    {
        const auto none = compute_metrics(Confusion{0, 0, 5, 5});
        CHECK(none.precision == 0.0);
        CHECK(none.recall == 0.0);
        CHECK(none.f1 == 0.0);
        CHECK(none.accuracy == 0.5);
        const auto perfect = compute_metrics(Confusion{3, 0, 0, 0});
        CHECK(perfect.f1 == 1.0);
        CHECK(perfect.macro_precision == 0.5);
    }

    TEST_CASE("confusion counts and validation")
    {
        const std::vector<Label> pred{Label::phishing, Label::phishing, Label::benign, Label::benign};
        const std::vector<Label> act{Label::phishing, Label::benign, Label::phishing, Label::benign};
        const auto c = confusion(pred, act);
        CHECK(c.tp == 1);
        CHECK(c.fp == 1);
        CHECK(c.fn == 1);
        CHECK(c.tn == 1);
        CHECK_THROWS_AS(confusion(std::span{pred}.first(3), act), ShapeError);
        CHECK_THROWS_AS(confusion({}, {}), EmptyInputError);
    }

    TEST_CASE("AUT")
    {
        const std::vector<double> flat{0.8, 0.8, 0.8};
        CHECK(aut(flat) == doctest::Approx(0.8));
        const std::vector<double> ramp{1.0, 0.0};
        CHECK(aut(ramp) == doctest::Approx(0.5));
        const std::vector<double> series{0.9, 0.7, 0.8, 0.6};
        CHECK(aut(series) == doctest::Approx((0.8 + 0.75 + 0.7) / 3));
        const std::vector<double> one{0.5};
        CHECK_THROWS_AS(aut(one), ValidationError);
        Rng rng{4};
        for (int trial = 0; trial < 200; ++trial)
        {
            std::vector<double> s(2 + trial % 10);
            for (auto& v : s)
                v = testing::uniform(rng);
            const double a = aut(s);
            CHECK(a >= *std::min_element(s.begin(), s.end()));
            CHECK(a <= *std::max_element(s.begin(), s.end()));
        }
    }
}

TEST_SUITE("folds")
{
    TEST_CASE("partition and stratification")
    {
        const auto labels = make_labels(37, 63);
        const auto plan = make_folds(labels, 10, 7);
        std::vector<std::size_t> seen;
        for (int f = 0; f < 10; ++f)
        {
            const auto test = plan.test_indices(f);
            const auto train = plan.train_indices(f);
            CHECK(test.size() + train.size() == labels.size());
            const auto pos = std::count_if(test.begin(), test.end(), [&](auto i) { return labels[i] == Label::phishing; });
            CHECK((pos == 3 || pos == 4));
            CHECK((test.size() == 10));
            seen.insert(seen.end(), test.begin(), test.end());
        }
        std::sort(seen.begin(), seen.end());
        for (std::size_t i = 0; i < seen.size(); ++i)
            CHECK(seen[i] == i);
    }

    TEST_CASE("singleton folds and determinism")
    {
        const auto labels = make_labels(5, 5);
        const auto plan = make_folds(labels, 5, 1);
        for (int f = 0; f < 5; ++f)
            CHECK(plan.test_indices(f).size() == 2);
        CHECK(make_folds(labels, 5, 1).assignments == plan.assignments);
        CHECK(make_folds(labels, 5, 2).assignments != plan.assignments);
        const auto flat = make_folds(make_labels(5, 5), 10, 3, false);
        for (int f = 0; f < 10; ++f)
            CHECK(flat.test_indices(f).size() == 1);
    }

    TEST_CASE("invalid plans")
    {
        const auto labels = make_labels(3, 20);
        CHECK_THROWS_AS(make_folds(labels, 1, 0), ValidationError);
        CHECK_THROWS_AS(make_folds(labels, 4, 0), ValidationError);
    }
}

TEST_SUITE("experiments")
{
    TEST_CASE("cross-validation produces one record per run and fold")
    {
        const auto samples = samples_of({.per_class = 30});
        CvOptions o;
        const auto records = run_cv(small_forest(), samples, o);
        REQUIRE(records.size() == 30);
        double mean = 0.0;
        for (const auto& r : records)
        {
            CHECK(r.train_size + r.test_size == 60);
            CHECK(r.infer_batch_size == r.test_size);
            mean += r.metrics.accuracy / 30.0;
        }
        CHECK(mean > 0.7);
        CHECK(records[10].seed == 1);
        CHECK(records[10].run == 1);
        CHECK(records[10].fold == 0);
    }

    TEST_CASE("cross-validation is worker independent")
    {
        const auto samples = samples_of({.per_class = 25, .seed = 3});
        CvOptions a;
        a.k = 5;
        a.seeds = {4};
        auto b = a;
        b.workers = 4;
        const auto ra = run_cv(small_forest(), samples, a);
        const auto rb = run_cv(small_forest(), samples, b);
        REQUIRE(ra.size() == rb.size());
        for (std::size_t i = 0; i < ra.size(); ++i)
            CHECK(ra[i].metrics.f1 == rb[i].metrics.f1);
    }

    TEST_CASE("vocabulary comes from the training split only")
    {
        std::vector<OpcodeSample> s(4);
        s[0].label = Label::phishing;
        s[0].counts[0x01] = 3;
        s[1].counts[0x02] = 1;
        s[2].label = Label::phishing;
        s[2].counts[0x5a] = 9;  // GAS, test only
        s[3].counts[0x01] = 1;
        const std::vector<std::size_t> train{0, 1}, test{2, 3};
        const auto data = split_data(s, train, test);
        CHECK(data.vocabulary.mnemonics == std::vector<std::string>{"ADD", "MUL"});
        CHECK(data.test.width() == 2);
        CHECK(data.test.at(0, 0) == 0.0);
        CHECK(data.test.at(1, 0) == 1.0);
    }

    TEST_CASE("errors carry the run and fold")
    {
        const auto samples = samples_of({.per_class = 12});
        auto spec = ModelSpec::of(Family::knn);
        spec.params.k = 500;
        CvOptions o;
        o.k = 3;
        try
        {
            run_cv(spec, samples, o);
            FAIL("expected a validation error");
        }
        catch (const ValidationError& e)
        {
            CHECK(std::string{e.what()}.find("knn run 0 fold 0: ") == 0);
        }
    }

    TEST_CASE("stratified subsets nest and keep class ratios")
    {
        const auto labels = make_labels(30, 90);
        const auto third = stratified_subset(labels, 1.0 / 3, 5);
        const auto two = stratified_subset(labels, 2.0 / 3, 5);
        const auto all = stratified_subset(labels, 1.0, 5);
        CHECK(third.size() == 40);
        CHECK(two.size() == 80);
        CHECK(all.size() == 120);
        CHECK(std::is_sorted(third.begin(), third.end()));
        CHECK(std::includes(two.begin(), two.end(), third.begin(), third.end()));
        const auto pos = std::count_if(third.begin(), third.end(), [&](auto i) { return labels[i] == Label::phishing; });
        CHECK(pos == 10);
    }

    TEST_CASE("scalability at fraction one equals cross-validation")
    {
        const auto samples = samples_of({.per_class = 20, .seed = 9});
        const std::vector<ModelSpec> models{small_forest()};
        const std::vector<double> fractions{0.5, 1.0};
        CvOptions o;
        o.k = 4;
        o.seeds = {0, 1};
        const auto result = run_scalability(models, samples, fractions, o);
        CHECK(result.timing.size() == 2);
        CHECK(result.records.size() == 16);
        const auto cv = run_cv(models[0], samples, o);
        std::vector<double> full;
        for (const auto& r : result.records)
            if (r.fraction == 1.0)
                full.push_back(r.metrics.accuracy);
        REQUIRE(full.size() == cv.size());
        for (std::size_t i = 0; i < cv.size(); ++i)
            CHECK(full[i] == cv[i].metrics.accuracy);
        const auto blocks = scalability_blocks(result, models, fractions, "accuracy");
        CHECK(blocks.size() == 1);
        CHECK(blocks[0].size() == 2);
        const std::vector<double> tiny{0.05};
        CHECK_THROWS_AS(run_scalability(models, samples, tiny, o), ValidationError);
    }

    TEST_CASE("time resistance with a missing month")
    {
        auto corpus = testing::synthetic_corpus({.per_class = 40, .months = 13});
        // 2023-10 .. 2024-10. Drop 2024-05 entirely.
        std::vector<ContractRecord> kept;
        for (const auto& r : corpus.records())
            if (*r.deployed_month != YearMonth{2024, 5})
                kept.push_back(r);
        const auto samples = opcode_samples(Corpus{kept});
        const auto plan = TimeWindowPlan::consecutive({2023, 10}, {2024, 1}, 9);
        CHECK(plan.test_months.front() == YearMonth{2024, 2});
        CHECK(plan.test_months.back() == YearMonth{2024, 10});
        const std::vector<ModelSpec> models{small_forest()};
        const auto result = run_time_resistance(models, samples, plan);
        REQUIRE(result.rows.size() == 9);
        CHECK(result.rows[3].missing);
        CHECK(result.warnings.size() == 1);
        std::vector<double> f1;
        for (const auto& r : result.rows)
            if (!r.missing)
                f1.push_back(r.metrics.f1);
        CHECK(result.aut[0].second == doctest::Approx(aut(f1)));

        TimeWindowPlan bad{{2024, 1}, {2023, 10}, {{2024, 2}}};
        CHECK_THROWS_AS(bad.validate(), ValidationError);
        TimeWindowPlan overlap{{2023, 10}, {2024, 1}, {{2024, 1}}};
        CHECK_THROWS_AS(overlap.validate(), ValidationError);
    }

    TEST_CASE("benign matching equalizes monthly counts")
    {
        std::vector<OpcodeSample> s;
        for (int i = 0; i < 30; ++i)
        {
            OpcodeSample x;
            x.label = i < 5 ? Label::phishing : Label::benign;
            x.month = YearMonth{2024, 1 + i % 2};
            s.push_back(x);
        }
        const auto keep = match_benign_months(s, 1);
        std::map<std::pair<int, int>, int> balance;
        for (const auto i : keep)
            balance[{s[i].month->month, static_cast<int>(s[i].label)}]++;
        CHECK(balance[{1, static_cast<int>(Label::phishing)}] == balance[{1, static_cast<int>(Label::benign)}]);
        CHECK(balance[{2, static_cast<int>(Label::phishing)}] == balance[{2, static_cast<int>(Label::benign)}]);
        CHECK(match_benign_months(s, 1) == keep);
    }

    TEST_CASE("metrics CSV round trip")
    {
        MetricsRecord r;
        r.model = "rf";
        r.run = 2;
        r.seed = 2;
        r.fold = 7;
        r.fraction = 1.0 / 3;
        r.train_size = 90;
        r.test_size = 10;
        r.metrics = compute_metrics(Confusion{6, 2, 4, 8});
        r.train_time_s = 0.125;
        r.infer_time_s = 0.001;
        r.infer_batch_size = 10;
        testing::TempDir dir;
        const std::vector<MetricsRecord> rows{r, r};
        append_metrics_csv(std::span{rows}.first(1), dir / "m.csv");
        append_metrics_csv(std::span{rows}.subspan(1), dir / "m.csv");
        const auto back = read_metrics_csv(dir / "m.csv");
        REQUIRE(back.size() == 2);
        CHECK(back[1].model == "rf");
        CHECK(back[1].fold == 7);
        CHECK(back[1].fraction == r.fraction);
        CHECK(back[1].metrics.macro_f1 == r.metrics.macro_f1);
        CHECK(back[1].train_time_s == 0.125);
        std::ostringstream out;
        write_metrics_csv(rows, out);
        CHECK(out.str().rfind("model,run,seed,fold,fraction,train_size,test_size,accuracy,", 0) == 0);
    }

    TEST_CASE("posthoc input groups metrics by model")
    {
        std::vector<MetricsRecord> recs(4);
        recs[0].model = recs[1].model = "rf";
        recs[2].model = recs[3].model = "knn";
        recs[3].metrics.macro_f1 = 0.5;
        const auto in = posthoc_input(recs, true);
        CHECK(in.groups == std::vector<std::string>{"rf", "knn"});
        CHECK(in.metrics.back() == "macro_f1");
        CHECK(in.values[3][1][1] == 0.5);
    }
}

TEST_SUITE("grid")
{
    TEST_CASE("default grids")
    {
        CHECK(default_grid(Family::random_forest).size() > 1);
        for (const auto f : {Family::random_forest, Family::gbdt, Family::logistic, Family::svm, Family::knn})
            for (const auto& p : default_grid(f))
                CHECK(p.family == f);
    }

    TEST_CASE("capacity order")
    {
        auto a = default_hyperparams(Family::random_forest);
        auto b = a;
        a.n_trees = 50;
        b.n_trees = 100;
        CHECK(smaller_capacity(a, b));
        CHECK_FALSE(smaller_capacity(b, a));
        a.n_trees = b.n_trees;
        a.max_depth = 10;
        b.max_depth = 0;
        CHECK(smaller_capacity(a, b));
        auto k1 = default_hyperparams(Family::knn), k2 = k1;
        k1.k = 9;
        k2.k = 3;
        CHECK(smaller_capacity(k1, k2));
    }

    TEST_CASE("ties resolve to the smaller model and results are worker independent")
    {
        const auto samples = samples_of({.per_class = 20, .separation = 1.0});
        const auto folds = make_folds(labels_of(samples), 3, 0);
        auto base = default_hyperparams(Family::random_forest);
        std::vector<Hyperparams> grid;
        for (const int trees : {40, 10, 20})
        {
            base.n_trees = trees;
            grid.push_back(base);
        }
        const auto r1 = grid_search(grid, samples, folds, 1);
        const auto r4 = grid_search(grid, samples, folds, 4);
        REQUIRE(r1.points.size() == 3);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(r1.points[i].mean_accuracy == r4.points[i].mean_accuracy);
        CHECK(r1.best == r4.best);
        double top = 0.0;
        for (const auto& p : r1.points)
            top = std::max(top, p.mean_accuracy);
        int smallest_top = 1000;
        for (const auto& p : r1.points)
            if (p.mean_accuracy == top)
                smallest_top = std::min(smallest_top, p.params.n_trees);
        CHECK(r1.best.n_trees == smallest_top);
        std::ostringstream out;
        write_grid_csv(r1, out);
        CHECK(!out.str().empty());
    }
}
