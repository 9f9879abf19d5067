// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/experiments.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"
#include "phishhook/rng.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <ostream>

namespace phishhook
{
ModelSpec ModelSpec::of(Family family)
{
    return {std::string{to_string(family)}, default_hyperparams(family)};
}

// ---------------------------------------------------------------------------
// Metrics CSV

namespace
{
constexpr const char* kMetricsHeader =
    "model,run,seed,fold,fraction,train_size,test_size,accuracy,precision,recall,f1,macro_precision,"
    "macro_recall,macro_f1,train_time_s,infer_time_s,infer_batch_size";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
T parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line)
{
    T value{};
    if constexpr (std::is_floating_point_v<T>)
    {
        if (text == "NaN" || text == "nan")
            return std::numeric_limits<T>::quiet_NaN();
    }
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(path.string() + ":" + std::to_string(line) + ": bad number '" + text + "'");
    return value;
}
}  // namespace

void write_metrics_csv(std::span<const MetricsRecord> records, std::ostream& out)
{
    out << kMetricsHeader << '\n';
    for (const auto& r : records)
    {
        const auto& m = r.metrics;
        out << csv::escape(r.model) << ',' << r.run << ',' << r.seed << ',' << r.fold << ','
            << csv::format_double(r.fraction) << ',' << r.train_size << ',' << r.test_size << ','
            << csv::format_double(m.accuracy) << ',' << csv::format_double(m.precision) << ','
            << csv::format_double(m.recall) << ',' << csv::format_double(m.f1) << ','
            << csv::format_double(m.macro_precision) << ',' << csv::format_double(m.macro_recall) << ','
            << csv::format_double(m.macro_f1) << ',' << csv::format_double(r.train_time_s) << ','
            << csv::format_double(r.infer_time_s) << ',' << r.infer_batch_size << '\n';
    }
}

void append_metrics_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path)
{
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path, ec) == 0;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out{path, std::ios::app | std::ios::binary};
    if (!out)
        throw IoError("cannot open " + path.string() + " for appending");
    std::ostringstream body;
    write_metrics_csv(records, body);
    auto text = body.str();
    if (!fresh)
        text.erase(0, text.find('\n') + 1);
    out << text;
    if (!out.flush())
        throw IoError("write failed: " + path.string());
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path)
{
    const auto table = csv::read_table(path);
    const auto col = [&](std::string_view name) { return table.column(name); };
    const auto c_model = col("model"), c_run = col("run"), c_seed = col("seed"), c_fold = col("fold"),
               c_fraction = col("fraction"), c_train = col("train_size"), c_test = col("test_size"),
               c_acc = col("accuracy"), c_prec = col("precision"), c_rec = col("recall"), c_f1 = col("f1"),
               c_mprec = col("macro_precision"), c_mrec = col("macro_recall"), c_mf1 = col("macro_f1"),
               c_tt = col("train_time_s"), c_it = col("infer_time_s"), c_batch = col("infer_batch_size");
    std::vector<MetricsRecord> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i)
    {
        const auto& row = table.rows[i];
        const auto line = table.line_numbers[i];
        if (row.size() != table.header.size())
            throw ParseError(path.string() + ":" + std::to_string(line) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " + std::to_string(row.size()));
        const auto num = [&](std::size_t c) { return parse_number<double>(row[c], path, line); };
        MetricsRecord r;
        r.model = row[c_model];
        r.run = parse_number<int>(row[c_run], path, line);
        r.seed = parse_number<std::uint64_t>(row[c_seed], path, line);
        r.fold = parse_number<int>(row[c_fold], path, line);
        r.fraction = num(c_fraction);
        r.train_size = parse_number<std::size_t>(row[c_train], path, line);
        r.test_size = parse_number<std::size_t>(row[c_test], path, line);
        r.metrics = {num(c_acc), num(c_prec), num(c_rec), num(c_f1), num(c_mprec), num(c_mrec), num(c_mf1)};
        r.train_time_s = num(c_tt);
        r.infer_time_s = num(c_it);
        r.infer_batch_size = parse_number<std::size_t>(row[c_batch], path, line);
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Splits

std::vector<Label> labels_of(std::span<const OpcodeSample> samples)
{
    std::vector<Label> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.label);
    return out;
}

namespace
{
std::vector<OpcodeSample> gather(std::span<const OpcodeSample> samples, std::span<const std::size_t> indices)
{
    std::vector<OpcodeSample> out;
    out.reserve(indices.size());
    for (const auto i : indices)
        out.push_back(samples[i]);
    return out;
}
}  // namespace

SplitData split_data(std::span<const OpcodeSample> samples, std::span<const std::size_t> train_indices,
                     std::span<const std::size_t> test_indices)
{
    const auto train = gather(samples, train_indices);
    const auto test = gather(samples, test_indices);
    SplitData d;
    d.vocabulary = build_histogram_vocab(std::span<const OpcodeSample>{train});
    d.train = histogram_matrix(train, d.vocabulary);
    d.test = histogram_matrix(test, d.vocabulary);
    return d;
}

ModelBundle fit_on_indices(std::span<const OpcodeSample> samples, std::span<const std::size_t> train_indices,
                           const Hyperparams& params, unsigned workers)
{
    const auto train = gather(samples, train_indices);
    ModelBundle b;
    b.vocabulary = build_histogram_vocab(std::span<const OpcodeSample>{train});
    b.params = params;
    b.model = train_model(histogram_matrix(train, b.vocabulary), params, workers);
    return b;
}

std::vector<MetricsRecord> run_cv(const ModelSpec& model, std::span<const OpcodeSample> samples,
                                  const CvOptions& options)
{
    if (samples.empty())
        throw EmptyInputError("cross-validation on an empty corpus");
    const auto labels = labels_of(samples);
    std::vector<MetricsRecord> out;
    for (std::size_t run = 0; run < options.seeds.size(); ++run)
    {
        const auto seed = options.seeds[run];
        const auto plan = make_folds(labels, options.k, seed, options.stratified);
        for (int fold = 0; fold < options.k; ++fold)
        {
            try
            {
                const auto train_idx = plan.train_indices(fold);
                const auto test_idx = plan.test_indices(fold);
                const auto data = split_data(samples, train_idx, test_idx);
                auto params = model.params;
                params.seed = mix_seed(seed, static_cast<std::uint64_t>(fold));

                const auto t0 = Clock::now();
                const auto trained = train_model(data.train, params, options.workers);
                const double train_time = seconds_since(t0);
                const auto t1 = Clock::now();
                const auto pred = predict(trained, data.test, 0.5, options.workers);
                const double infer_time = seconds_since(t1);

                MetricsRecord r;
                r.model = model.name;
                r.run = static_cast<int>(run);
                r.seed = seed;
                r.fold = fold;
                r.train_size = data.train.rows();
                r.test_size = data.test.rows();
                r.metrics = compute_metrics(pred.labels, data.test.labels());
                r.train_time_s = train_time;
                r.infer_time_s = infer_time;
                r.infer_batch_size = data.test.rows();
                out.push_back(std::move(r));
            }
            catch (const Error& e)
            {
                e.rethrow_with_context(model.name + " run " + std::to_string(run) + " fold " +
                                       std::to_string(fold) + ": ");
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scalability

std::vector<std::size_t> stratified_subset(std::span<const Label> labels, double fraction, std::uint64_t seed)
{
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw ValidationError("subset fraction must lie in (0, 1]");
    std::vector<std::size_t> keep;
    for (const auto cls : {Label::benign, Label::phishing})
    {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls)
                members.push_back(i);
        Rng rng{mix_seed(seed, 0x5ca1e000ULL + static_cast<std::uint64_t>(cls))};
        rng.shuffle(std::span{members});
        const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(members.size())));
        keep.insert(keep.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(count));
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

ScalabilityResult run_scalability(std::span<const ModelSpec> models, std::span<const OpcodeSample> samples,
                                  std::span<const double> fractions, const CvOptions& options)
{
    const auto labels = labels_of(samples);
    ScalabilityResult result;
    for (const auto& model : models)
        for (const double fraction : fractions)
        {
            std::vector<MetricsRecord> cell;
            for (std::size_t run = 0; run < options.seeds.size(); ++run)
            {
                const auto seed = options.seeds[run];
                const auto idx = stratified_subset(labels, fraction, seed);
                const auto subset = gather(samples, idx);
                for (const auto cls : {Label::benign, Label::phishing})
                {
                    const auto n = static_cast<std::size_t>(
                        std::count_if(subset.begin(), subset.end(), [&](const auto& s) { return s.label == cls; }));
                    if (n < static_cast<std::size_t>(options.k))
                        throw ValidationError("fraction " + csv::format_double(fraction) + " leaves " +
                                              std::to_string(n) + " " + std::string{to_string(cls)} +
                                              " samples, fewer than k");
                }
                auto single = options;
                single.seeds = {seed};
                auto records = run_cv(model, subset, single);
                for (auto& r : records)
                {
                    r.run = static_cast<int>(run);
                    r.fraction = fraction;
                }
                cell.insert(cell.end(), records.begin(), records.end());
            }
            TimingRow t;
            t.model = model.name;
            t.fraction = fraction;
            for (const auto& r : cell)
            {
                t.train_size = std::max(t.train_size, r.train_size);
                t.mean_train_time_s += r.train_time_s;
                t.mean_infer_time_s += r.infer_time_s;
                t.mean_accuracy += r.metrics.accuracy;
            }
            const double n = static_cast<double>(cell.size());
            t.mean_train_time_s /= n;
            t.mean_infer_time_s /= n;
            t.mean_accuracy /= n;
            result.timing.push_back(t);
            result.records.insert(result.records.end(), cell.begin(), cell.end());
        }
    return result;
}

void write_timing_csv(std::span<const TimingRow> rows, std::ostream& out)
{
    out << "model,fraction,train_size,mean_train_time_s,mean_infer_time_s,mean_accuracy\n";
    for (const auto& r : rows)
        out << csv::escape(r.model) << ',' << csv::format_double(r.fraction) << ',' << r.train_size << ','
            << csv::format_double(r.mean_train_time_s) << ',' << csv::format_double(r.mean_infer_time_s) << ','
            << csv::format_double(r.mean_accuracy) << '\n';
}

namespace
{
double metric_value(const ClassificationMetrics& m, std::string_view metric)
{
    if (metric == "accuracy")
        return m.accuracy;
    if (metric == "precision")
        return m.precision;
    if (metric == "recall")
        return m.recall;
    if (metric == "f1")
        return m.f1;
    if (metric == "macro_precision")
        return m.macro_precision;
    if (metric == "macro_recall")
        return m.macro_recall;
    if (metric == "macro_f1")
        return m.macro_f1;
    throw ValidationError("unknown metric '" + std::string{metric} + "'");
}
}  // namespace

stats::BlockMatrix scalability_blocks(const ScalabilityResult& result, std::span<const ModelSpec> models,
                                      std::span<const double> fractions, std::string_view metric)
{
    stats::BlockMatrix m(models.size(), std::vector<double>(fractions.size(), 0.0));
    for (std::size_t i = 0; i < models.size(); ++i)
        for (std::size_t j = 0; j < fractions.size(); ++j)
        {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& r : result.records)
                if (r.model == models[i].name && r.fraction == fractions[j])
                {
                    sum += metric_value(r.metrics, metric);
                    ++n;
                }
            m[i][j] = n == 0 ? std::nan("") : sum / static_cast<double>(n);
        }
    return m;
}

// ---------------------------------------------------------------------------
// Time resistance

void TimeWindowPlan::validate() const
{
    if (train_to < train_from)
        throw ValidationError("training window ends before it starts");
    if (test_months.empty())
        throw ValidationError("time plan has no test months");
    YearMonth prev = train_to;
    for (const auto& m : test_months)
    {
        if (!(prev < m))
            throw ValidationError("test month " + m.str() + " is not after " + prev.str());
        prev = m;
    }
}

TimeWindowPlan TimeWindowPlan::consecutive(YearMonth from, YearMonth to, int count)
{
    TimeWindowPlan plan{from, to, {}};
    auto m = to;
    for (int i = 0; i < count; ++i)
    {
        m = m.next();
        plan.test_months.push_back(m);
    }
    return plan;
}

TimeResistanceResult run_time_resistance(std::span<const ModelSpec> models, std::span<const OpcodeSample> samples,
                                         const TimeWindowPlan& plan, unsigned workers)
{
    plan.validate();
    std::vector<std::size_t> train_idx;
    std::vector<std::vector<std::size_t>> test_idx(plan.test_months.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        const auto& month = samples[i].month;
        if (!month)
            continue;
        if (plan.train_from <= *month && *month <= plan.train_to)
            train_idx.push_back(i);
        for (std::size_t t = 0; t < plan.test_months.size(); ++t)
            if (*month == plan.test_months[t])
                test_idx[t].push_back(i);
    }
    if (train_idx.empty())
        throw EmptyInputError("no dated samples in the training window " + plan.train_from.str() + ".." +
                              plan.train_to.str());

    TimeResistanceResult result;
    for (std::size_t t = 0; t < plan.test_months.size(); ++t)
        if (test_idx[t].empty())
            result.warnings.push_back("test month " + plan.test_months[t].str() +
                                      " has no samples; excluded from AUT");

    for (const auto& model : models)
    {
        ModelBundle bundle;
        try
        {
            bundle = fit_on_indices(samples, train_idx, model.params, workers);
        }
        catch (const Error& e)
        {
            e.rethrow_with_context(model.name + " temporal training: ");
        }
        std::vector<double> f1;
        for (std::size_t t = 0; t < plan.test_months.size(); ++t)
        {
            TemporalRow row;
            row.model = model.name;
            row.month = plan.test_months[t];
            row.train_size = train_idx.size();
            row.test_size = test_idx[t].size();
            if (test_idx[t].empty())
                row.missing = true;
            else
            {
                const auto test = gather(samples, test_idx[t]);
                const auto matrix = histogram_matrix(test, bundle.vocabulary);
                const auto pred = predict(bundle.model, matrix, 0.5, workers);
                row.metrics = compute_metrics(pred.labels, matrix.labels());
                f1.push_back(row.metrics.f1);
            }
            result.rows.push_back(row);
        }
        result.aut.emplace_back(model.name, f1.size() >= 2 ? aut(f1) : std::nan(""));
    }
    return result;
}

void write_temporal_csv(const TimeResistanceResult& result, std::ostream& out)
{
    out << "model,month,train_size,test_size,missing,accuracy,precision,recall,f1,macro_f1\n";
    for (const auto& r : result.rows)
    {
        out << csv::escape(r.model) << ',' << r.month.str() << ',' << r.train_size << ',' << r.test_size << ','
            << (r.missing ? "true" : "false");
        if (r.missing)
            out << ",,,,,\n";
        else
            out << ',' << csv::format_double(r.metrics.accuracy) << ',' << csv::format_double(r.metrics.precision)
                << ',' << csv::format_double(r.metrics.recall) << ',' << csv::format_double(r.metrics.f1) << ','
                << csv::format_double(r.metrics.macro_f1) << '\n';
    }
}

void write_aut_csv(const TimeResistanceResult& result, std::ostream& out)
{
    out << "model,aut\n";
    for (const auto& [model, value] : result.aut)
        out << csv::escape(model) << ',' << csv::format_double(value) << '\n';
}

std::vector<std::size_t> match_benign_months(std::span<const OpcodeSample> samples, std::uint64_t seed)
{
    std::map<YearMonth, std::size_t> phishing;
    std::map<YearMonth, std::vector<std::size_t>> benign;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        const auto& s = samples[i];
        if (s.label == Label::phishing)
        {
            keep.push_back(i);
            if (s.month)
                ++phishing[*s.month];
        }
        else if (s.month)
            benign[*s.month].push_back(i);
    }
    for (auto& [month, pool] : benign)
    {
        const auto it = phishing.find(month);
        const std::size_t want = it == phishing.end() ? 0 : it->second;
        Rng rng{mix_seed(seed, static_cast<std::uint64_t>(month.index()))};
        rng.shuffle(std::span{pool});
        pool.resize(std::min(want, pool.size()));
        keep.insert(keep.end(), pool.begin(), pool.end());
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

stats::PosthocInput posthoc_input(std::span<const MetricsRecord> records, bool macro)
{
    stats::PosthocInput in;
    in.metrics = macro ? std::vector<std::string>{"accuracy", "macro_precision", "macro_recall", "macro_f1"}
                       : std::vector<std::string>{"accuracy", "precision", "recall", "f1"};
    std::map<std::string, std::size_t> index;
    for (const auto& r : records)
        if (index.emplace(r.model, in.groups.size()).second)
            in.groups.push_back(r.model);
    in.values.assign(4, std::vector<std::vector<double>>(in.groups.size()));
    for (const auto& r : records)
    {
        const auto g = index.at(r.model);
        const auto& m = r.metrics;
        in.values[0][g].push_back(m.accuracy);
        in.values[1][g].push_back(macro ? m.macro_precision : m.precision);
        in.values[2][g].push_back(macro ? m.macro_recall : m.recall);
        in.values[3][g].push_back(macro ? m.macro_f1 : m.f1);
    }
    return in;
}
}  // namespace phishhook
