// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli_common.hpp"

#include <phishhook/csv.hpp>
#include <phishhook/error.hpp>
#include <phishhook/features.hpp>
#include <phishhook/grid.hpp>
#include <phishhook/shap.hpp>
#include <phishhook/stats.hpp>

#include <cmath>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <memory>

namespace phishhook::cli
{
namespace
{
ModelBundle load_bundle(const std::filesystem::path& path)
{
    auto in = csv::open_input(path);
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() == 4 && std::memcmp(magic, "PHHK", 4) == 0)
        return load_bundle_binary(path);
    return load_bundle_json(path);
}

struct MeanSd
{
    double mean = 0.0;
    double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v)
{
    MeanSd r;
    if (v.empty())
        return r;
    for (const auto x : v)
        r.mean += x;
    r.mean /= static_cast<double>(v.size());
    if (v.size() > 1)
    {
        for (const auto x : v)
            r.sd += (x - r.mean) * (x - r.mean);
        r.sd = std::sqrt(r.sd / static_cast<double>(v.size() - 1));
    }
    return r;
}

/// model,metric,mean,sd,n, printed as a short table as well.
void write_summary(std::span<const MetricsRecord> records, const std::filesystem::path& path)
{
    const auto in = posthoc_input(records, false);
    auto out = csv::open_output(path);
    out << "model,metric,mean,sd,n\n";
    std::cout << std::left << std::setw(10) << "model" << std::right;
    for (const auto& m : in.metrics)
        std::cout << std::setw(12) << m;
    std::cout << '\n';
    for (std::size_t g = 0; g < in.groups.size(); ++g)
    {
        std::cout << std::left << std::setw(10) << in.groups[g] << std::right << std::fixed << std::setprecision(4);
        for (std::size_t m = 0; m < in.metrics.size(); ++m)
        {
            const auto s = mean_sd(in.values[m][g]);
            out << csv::escape(in.groups[g]) << ',' << in.metrics[m] << ',' << csv::format_double(s.mean) << ','
                << csv::format_double(s.sd) << ',' << in.values[m][g].size() << '\n';
            std::cout << std::setw(12) << s.mean;
        }
        std::cout << '\n';
    }
    std::cout.unsetf(std::ios::floatfield);
}

void write_records(std::span<const MetricsRecord> records, const std::filesystem::path& path)
{
    auto out = csv::open_output(path);
    write_metrics_csv(records, out);
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions
{
    CommonOptions common;
    std::string corpus;
    std::string model = "rf";
    HyperFlags flags;
    std::string format = "json";
    bool grid = false;
    int k = 10;
    bool dedup = false;
};

void run_train(CLI::App& sub, TrainOptions& o)
{
    RunContext run{sub, o.common};
    const auto workers = resolved_workers(o.common.workers);
    const auto corpus = load_corpus_noted(o.corpus, run, o.dedup);
    const auto samples = opcode_samples(corpus, workers);
    auto spec = model_specs({o.model}, o.flags, o.common.seed).front();
    if (o.grid)
    {
        const auto folds = make_folds(labels_of(samples), o.k, o.common.seed, true);
        auto grid = default_grid(spec.params.family, spec.params);
        const auto result = grid_search(grid, samples, folds, workers);
        auto out = csv::open_output(run.file("grid.csv"));
        write_grid_csv(result, out);
        spec.params = result.best;
        spec.params.seed = o.common.seed;
        run.note("grid_best", spec.params.describe());
    }
    std::vector<std::size_t> all(samples.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    const auto bundle = fit_on_indices(samples, all, spec.params, workers);
    run.note("hyperparams", spec.params.describe());
    if (o.format == "json" || o.format == "both")
        save_bundle_json(bundle, run.file("model.json"));
    if (o.format == "binary" || o.format == "both")
        save_bundle_binary(bundle, run.file("model.bin"));
    if (o.format != "json" && o.format != "binary" && o.format != "both")
        throw ValidationError("--format must be json, binary, or both");
    std::cout << "trained " << spec.params.describe() << " on " << samples.size() << " samples -> "
              << run.dir().string() << '\n';
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions
{
    CommonOptions common;
    std::string corpus;
    std::vector<std::string> models{"rf"};
    HyperFlags flags;
    int k = 10;
    int runs = 3;
    bool dedup = false;
    std::string model_file;
};

void run_evaluate(CLI::App& sub, EvaluateOptions& o)
{
    RunContext run{sub, o.common};
    const auto workers = resolved_workers(o.common.workers);
    const auto corpus = load_corpus_noted(o.corpus, run, o.dedup);
    const auto samples = opcode_samples(corpus, workers);

    if (!o.model_file.empty())
    {
        const auto bundle = load_bundle(o.model_file);
        const auto matrix = histogram_matrix(samples, bundle.vocabulary);
        const auto pred = predict(bundle.model, matrix, 0.5, workers);
        auto out = csv::open_output(run.file("predictions.csv"));
        out << "sample_id,label,probability,predicted\n";
        for (std::size_t i = 0; i < matrix.rows(); ++i)
            out << matrix.id(i) << ',' << to_string(matrix.label(i)) << ','
                << csv::format_double(pred.probability[i]) << ',' << to_string(pred.labels[i]) << '\n';
        const auto m = compute_metrics(pred.labels, matrix.labels());
        run.note("holdout", {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
                             {"f1", m.f1}, {"macro_f1", m.macro_f1}});
        std::cout << "accuracy " << m.accuracy << " precision " << m.precision << " recall " << m.recall << " f1 "
                  << m.f1 << '\n';
        return;
    }

    CvOptions cv;
    cv.k = o.k;
    cv.seeds = run_seeds(o.common.seed, o.runs);
    cv.workers = workers;
    run.note("seeds", cv.seeds);
    std::vector<MetricsRecord> records;
    for (const auto& spec : model_specs(o.models, o.flags, o.common.seed))
    {
        auto r = run_cv(spec, samples, cv);
        records.insert(records.end(), r.begin(), r.end());
    }
    write_records(records, run.file("metrics.csv"));
    write_summary(records, run.file("summary.csv"));
    std::cout << records.size() << " records -> " << run.file("metrics.csv").string() << '\n';
}

// ---------------------------------------------------------------------------
// scalability

struct ScalabilityOptions
{
    CommonOptions common;
    std::string corpus;
    std::vector<std::string> models{"rf", "knn", "logreg"};
    HyperFlags flags;
    std::vector<double> fractions{1.0 / 3.0, 2.0 / 3.0, 1.0};
    int k = 10;
    int runs = 3;
    bool dedup = false;
};

void run_scalability_cmd(CLI::App& sub, ScalabilityOptions& o)
{
    RunContext run{sub, o.common};
    const auto workers = resolved_workers(o.common.workers);
    const auto corpus = load_corpus_noted(o.corpus, run, o.dedup);
    const auto samples = opcode_samples(corpus, workers);
    CvOptions cv;
    cv.k = o.k;
    cv.seeds = run_seeds(o.common.seed, o.runs);
    cv.workers = workers;
    const auto specs = model_specs(o.models, o.flags, o.common.seed);
    const auto result = run_scalability(specs, samples, o.fractions, cv);
    write_records(result.records, run.file("metrics.csv"));
    {
        auto out = csv::open_output(run.file("timing.csv"));
        write_timing_csv(result.timing, out);
    }
    if (specs.size() >= 2 && o.fractions.size() >= 2)
    {
        std::vector<std::string> names;
        for (const auto& s : specs)
            names.push_back(s.name);
        auto friedman_out = csv::open_output(run.file("friedman.csv"));
        friedman_out << "metric,statistic,p\n";
        for (const auto* metric : {"accuracy", "precision", "recall", "f1"})
        {
            const auto blocks = scalability_blocks(result, specs, o.fractions, metric);
            const auto cdd = stats::cdd_inputs(blocks);
            friedman_out << metric << ',' << csv::format_double(cdd.friedman.statistic) << ','
                         << csv::format_double(cdd.friedman.p) << '\n';
            auto ranks = csv::open_output(run.file(std::string{"cdd_"} + metric + "_ranks.csv"));
            stats::write_cdd_ranks_csv(cdd, names, ranks);
            auto pairs = csv::open_output(run.file(std::string{"cdd_"} + metric + "_pairs.csv"));
            stats::write_cdd_pairs_csv(cdd, names, pairs);
        }
    }
    else
        std::cerr << "warning: Friedman/CDD inputs need at least 2 models and 2 fractions; skipped\n";
    write_timing_csv(result.timing, std::cout);
}

// ---------------------------------------------------------------------------
// timeline

struct TimelineOptions
{
    CommonOptions common;
    std::string corpus;
    std::vector<std::string> models{"rf"};
    HyperFlags flags;
    std::string train_from = "2023-10";
    std::string train_to = "2024-01";
    int test_months = 9;
    std::vector<std::string> months;
    bool match_benign = false;
    bool dedup = false;
};

void run_timeline(CLI::App& sub, TimelineOptions& o)
{
    RunContext run{sub, o.common};
    const auto workers = resolved_workers(o.common.workers);
    const auto corpus = load_corpus_noted(o.corpus, run, o.dedup);
    auto samples = opcode_samples(corpus, workers);
    if (o.match_benign)
    {
        const auto keep = match_benign_months(samples, o.common.seed);
        std::vector<OpcodeSample> kept;
        for (const auto i : keep)
            kept.push_back(std::move(samples[i]));
        samples = std::move(kept);
        run.note("matched_samples", samples.size());
    }
    TimeWindowPlan plan;
    if (o.months.empty())
        plan = TimeWindowPlan::consecutive(YearMonth::parse(o.train_from), YearMonth::parse(o.train_to),
                                           o.test_months);
    else
    {
        plan.train_from = YearMonth::parse(o.train_from);
        plan.train_to = YearMonth::parse(o.train_to);
        for (const auto& m : o.months)
            plan.test_months.push_back(YearMonth::parse(m));
    }
    const auto result = run_time_resistance(model_specs(o.models, o.flags, o.common.seed), samples, plan, workers);
    for (const auto& w : result.warnings)
        std::cerr << "warning: " << w << '\n';
    {
        auto out = csv::open_output(run.file("temporal.csv"));
        write_temporal_csv(result, out);
    }
    auto out = csv::open_output(run.file("aut.csv"));
    write_aut_csv(result, out);
    write_aut_csv(result, std::cout);
}

// ---------------------------------------------------------------------------
// posthoc

struct PosthocOptions
{
    CommonOptions common;
    std::vector<std::string> metrics_files;
    bool macro = false;
    bool dunn_ties = false;
};

void run_posthoc(CLI::App& sub, PosthocOptions& o)
{
    RunContext run{sub, o.common};
    std::vector<MetricsRecord> records;
    nlohmann::json digests = nlohmann::json::object();
    for (const auto& f : o.metrics_files)
    {
        auto r = read_metrics_csv(f);
        records.insert(records.end(), r.begin(), r.end());
        digests[f] = file_digest(f);
    }
    run.note("metrics_files", digests);
    const auto input = posthoc_input(records, o.macro);
    const auto report = stats::posthoc(input, o.dunn_ties);
    stats::write_test_rows_csv(report.shapiro, run.file("shapiro.csv"));
    stats::write_test_rows_csv(report.kruskal, run.file("kruskal.csv"));
    stats::write_test_rows_csv(report.dunn, run.file("dunn.csv"));
    stats::write_dunn_matrix_csv(report, run.file("dunn_matrix.csv"));
    for (const auto& row : report.kruskal)
        std::cout << row.metric << ": H=" << row.result.statistic << " p=" << row.result.p
                  << " p_adj=" << row.result.p_adj.value_or(row.result.p)
                  << (row.result.significant() ? " significant" : " not significant")
                  << "; significant Dunn pairs " << std::fixed << std::setprecision(2)
                  << 100.0 * stats::significant_pair_share(report, row.metric) << "%\n"
                  << std::defaultfloat;
}

// ---------------------------------------------------------------------------
// explain

struct ExplainOptions
{
    CommonOptions common;
    std::string model_file;
    std::string corpus;
    std::size_t top = 20;
};

void run_explain(CLI::App& sub, ExplainOptions& o)
{
    RunContext run{sub, o.common};
    const auto workers = resolved_workers(o.common.workers);
    const auto bundle = load_bundle(o.model_file);
    const auto* forest = std::get_if<ForestModel>(&bundle.model);
    if (!forest)
        throw ValidationError("explain needs a tree-ensemble model (rf or gbdt)");
    const auto corpus = load_corpus_noted(o.corpus, run, false);
    const auto samples = opcode_samples(corpus, workers);
    const auto matrix = histogram_matrix(samples, bundle.vocabulary);
    const auto summary = shap_summary(*forest, matrix, o.top, workers);
    write_shap_summary_csv(summary, run.file("shap_summary.csv"));
    auto out = csv::open_output(run.file("shap_ranking.csv"));
    out << "rank,feature,mean_abs_shap\n";
    for (std::size_t i = 0; i < summary.ranking.size(); ++i)
        out << i + 1 << ',' << summary.ranking[i].first << ',' << csv::format_double(summary.ranking[i].second)
            << '\n';
    run.note("base_value", summary.base_value);
    std::cout << "base value " << summary.base_value << "; top features:";
    for (const auto& [name, score] : summary.ranking)
        std::cout << ' ' << name;
    std::cout << '\n';
}

void add_model_selection(CLI::App& sub, std::vector<std::string>& models, HyperFlags& flags)
{
    sub.add_option("--model", models, "Model families: rf, gbdt, logreg, svm, knn, all")->capture_default_str();
    flags.add_to(sub);
}
}  // namespace

void register_model_commands(CLI::App& app, std::vector<std::pair<CLI::App*, Command>>& commands)
{
    {
        auto o = std::make_shared<TrainOptions>();
        auto* sub = app.add_subcommand("train", "Train one model on a corpus and save it");
        add_common_options(*sub, o->common);
        sub->add_option("--corpus", o->corpus, "Training corpus")->required()->check(CLI::ExistingFile);
        sub->add_option("--model", o->model, "rf, gbdt, logreg, svm, knn")->capture_default_str();
        o->flags.add_to(*sub);
        sub->add_option("--format", o->format, "json, binary, or both")->capture_default_str();
        sub->add_flag("--grid", o->grid, "Pick hyperparameters by grid search first");
        sub->add_option("--k", o->k, "Folds for the grid search")->capture_default_str();
        sub->add_flag("--dedup", o->dedup, "Drop bit-identical bytecode first");
        commands.emplace_back(sub, [sub, o] { run_train(*sub, *o); });
    }
    {
        auto o = std::make_shared<EvaluateOptions>();
        auto* sub = app.add_subcommand("evaluate", "Cross-validate models, or score a saved model");
        add_common_options(*sub, o->common);
        sub->add_option("--corpus", o->corpus, "Corpus")->required()->check(CLI::ExistingFile);
        add_model_selection(*sub, o->models, o->flags);
        sub->add_option("--k", o->k, "Folds")->capture_default_str();
        sub->add_option("--runs", o->runs, "Repetitions; seeds are seed..seed+runs-1")->capture_default_str();
        sub->add_flag("--dedup", o->dedup, "Drop bit-identical bytecode first");
        sub->add_option("--model-file", o->model_file, "Score this saved model instead of cross-validating")
            ->check(CLI::ExistingFile);
        commands.emplace_back(sub, [sub, o] { run_evaluate(*sub, *o); });
    }
    {
        auto o = std::make_shared<ScalabilityOptions>();
        auto* sub = app.add_subcommand("scalability", "CV on nested stratified subsets with timing");
        add_common_options(*sub, o->common);
        sub->add_option("--corpus", o->corpus, "Corpus")->required()->check(CLI::ExistingFile);
        add_model_selection(*sub, o->models, o->flags);
        sub->add_option("--fractions", o->fractions, "Subset fractions in (0, 1]")->capture_default_str();
        sub->add_option("--k", o->k, "Folds")->capture_default_str();
        sub->add_option("--runs", o->runs, "Repetitions")->capture_default_str();
        sub->add_flag("--dedup", o->dedup, "Drop bit-identical bytecode first");
        commands.emplace_back(sub, [sub, o] { run_scalability_cmd(*sub, *o); });
    }
    {
        auto o = std::make_shared<TimelineOptions>();
        auto* sub = app.add_subcommand("timeline", "Train on a month window, test on later months, report AUT");
        add_common_options(*sub, o->common);
        sub->add_option("--corpus", o->corpus, "Dated corpus")->required()->check(CLI::ExistingFile);
        add_model_selection(*sub, o->models, o->flags);
        sub->add_option("--train-from", o->train_from, "First training month (YYYY-MM)")->capture_default_str();
        sub->add_option("--train-to", o->train_to, "Last training month (YYYY-MM)")->capture_default_str();
        sub->add_option("--test-months", o->test_months, "Consecutive test months after --train-to")
            ->capture_default_str();
        sub->add_option("--months", o->months, "Explicit test months (overrides --test-months)");
        sub->add_flag("--match-benign", o->match_benign, "Subsample benign to the phishing monthly counts");
        sub->add_flag("--dedup", o->dedup, "Drop bit-identical bytecode first");
        commands.emplace_back(sub, [sub, o] { run_timeline(*sub, *o); });
    }
    {
        auto o = std::make_shared<PosthocOptions>();
        auto* sub = app.add_subcommand("posthoc", "Shapiro-Wilk, Kruskal-Wallis, and Dunn tests on metrics CSVs");
        add_common_options(*sub, o->common);
        sub->add_option("--metrics", o->metrics_files, "metrics.csv files from evaluate")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_flag("--macro", o->macro, "Use macro-averaged precision/recall/F1");
        sub->add_flag("--dunn-ties", o->dunn_ties, "Tie-corrected Dunn denominator");
        commands.emplace_back(sub, [sub, o] { run_posthoc(*sub, *o); });
    }
    {
        auto o = std::make_shared<ExplainOptions>();
        auto* sub = app.add_subcommand("explain", "TreeSHAP attributions for a saved tree ensemble");
        add_common_options(*sub, o->common);
        sub->add_option("--model-file", o->model_file, "model.json or model.bin")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--corpus", o->corpus, "Samples to explain")->required()->check(CLI::ExistingFile);
        sub->add_option("--top", o->top, "Features kept in the summary")->capture_default_str();
        commands.emplace_back(sub, [sub, o] { run_explain(*sub, *o); });
    }
}
}  // namespace phishhook::cli
