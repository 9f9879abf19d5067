// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include <phishhook/corpus.hpp>
#include <phishhook/disasm.hpp>
#include <phishhook/error.hpp>
#include <phishhook/experiments.hpp>
#include <phishhook/hex.hpp>
#include <phishhook/metrics.hpp>
#include <phishhook/model.hpp>
#include <phishhook/shap.hpp>
#include <phishhook/stats.hpp>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

namespace py = pybind11;
using namespace phishhook;

namespace
{
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Bytes to_bytes(const py::object& code)
{
    if (py::isinstance<py::bytes>(code))
    {
        const auto s = code.cast<std::string>();
        return Bytes(s.begin(), s.end());
    }
    return from_hex(code.cast<std::string>());
}

FeatureMatrix to_matrix(const Array& x, const std::vector<Label>& labels, std::vector<std::string> columns)
{
    if (x.ndim() != 2)
        throw ShapeError("features must be a 2-D array");
    const auto rows = static_cast<std::size_t>(x.shape(0));
    const auto cols = static_cast<std::size_t>(x.shape(1));
    if (columns.empty())
        for (std::size_t j = 0; j < cols; ++j)
            columns.push_back("f" + std::to_string(j));
    if (columns.size() != cols)
        throw ShapeError("got " + std::to_string(columns.size()) + " column names for " + std::to_string(cols) + " columns");
    FeatureMatrix m{std::move(columns)};
    const double* data = x.data();
    for (std::size_t i = 0; i < rows; ++i)
        m.add_row({data + i * cols, cols}, labels.empty() ? Label::benign : labels[i], std::to_string(i));
    return m;
}

std::vector<Label> to_labels(const py::array_t<int, py::array::forcecast>& y)
{
    std::vector<Label> out;
    const auto view = y.unchecked<1>();
    for (py::ssize_t i = 0; i < view.shape(0); ++i)
    {
        if (view(i) != 0 && view(i) != 1)
            throw ValidationError("labels must be 0 (benign) or 1 (phishing)");
        out.push_back(view(i) == 1 ? Label::phishing : Label::benign);
    }
    return out;
}

Hyperparams hyperparams(const std::string& family, std::uint64_t seed, const py::kwargs& overrides)
{
    auto p = default_hyperparams(parse_family(family));
    p.seed = seed;
    for (const auto& [key, value] : overrides)
    {
        const auto name = key.cast<std::string>();
        if (name == "n_trees")
            p.n_trees = value.cast<int>();
        else if (name == "max_depth")
            p.max_depth = value.cast<int>();
        else if (name == "max_features")
            p.max_features = value.cast<int>();
        else if (name == "min_samples_leaf")
            p.min_samples_leaf = value.cast<int>();
        else if (name == "bootstrap")
            p.bootstrap = value.cast<bool>();
        else if (name == "learning_rate")
            p.learning_rate = value.cast<double>();
        else if (name == "k")
            p.k = value.cast<int>();
        else if (name == "l2")
            p.l2 = value.cast<double>();
        else if (name == "max_iter")
            p.max_iter = value.cast<int>();
        else
            throw ValidationError("unknown hyperparameter: " + name);
    }
    return p;
}

py::dict metrics_dict(const ClassificationMetrics& m)
{
    py::dict d;
    d["accuracy"] = m.accuracy;
    d["precision"] = m.precision;
    d["recall"] = m.recall;
    d["f1"] = m.f1;
    d["macro_precision"] = m.macro_precision;
    d["macro_recall"] = m.macro_recall;
    d["macro_f1"] = m.macro_f1;
    return d;
}

py::tuple stat_pair(const stats::StatTestResult& r)
{
    return py::make_tuple(r.statistic, r.p);
}

class PyModel
{
public:
    explicit PyModel(ModelBundle bundle) : bundle_(std::move(bundle)) {}

    py::array_t<double> predict_proba(const Array& x, unsigned workers) const
    {
        const auto m = to_matrix(x, {}, columns());
        const auto p = predict(bundle_.model, m, 0.5, workers);
        return py::array_t<double>(static_cast<py::ssize_t>(p.probability.size()), p.probability.data());
    }

    py::array_t<int> predict_labels(const Array& x, double threshold, unsigned workers) const
    {
        const auto m = to_matrix(x, {}, columns());
        const auto p = predict(bundle_.model, m, threshold, workers);
        std::vector<int> out;
        for (const auto l : p.labels)
            out.push_back(l == Label::phishing ? 1 : 0);
        return py::array_t<int>(static_cast<py::ssize_t>(out.size()), out.data());
    }

    py::tuple shap(const Array& x) const
    {
        const auto* forest = std::get_if<ForestModel>(&bundle_.model);
        if (!forest)
            throw ValidationError("SHAP values need a tree ensemble (rf or gbdt)");
        if (x.ndim() != 1)
            throw ShapeError("shap expects a single 1-D feature vector");
        const auto r = tree_shap(*forest, {x.data(), static_cast<std::size_t>(x.shape(0))});
        return py::make_tuple(r.base_value, r.shap_values, r.prediction);
    }

    void save(const std::filesystem::path& path, bool binary) const
    {
        if (bundle_.vocabulary.size() != n_features())
            throw ValidationError("saving needs opcode column names; pass columns= to train");
        binary ? save_bundle_binary(bundle_, path) : save_bundle_json(bundle_, path);
    }

    std::string family() const { return std::string{to_string(bundle_.params.family)}; }
    std::string describe() const { return bundle_.params.describe(); }
    std::size_t n_features() const { return feature_count(bundle_.model); }

private:
    std::vector<std::string> columns() const
    {
        if (bundle_.vocabulary.size() == n_features())
            return bundle_.vocabulary.mnemonics;
        return {};
    }

    ModelBundle bundle_;
};

PyModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() == 4 && std::string_view{magic, 4} == "PHHK")
        return PyModel{load_bundle_binary(path)};
    return PyModel{load_bundle_json(path)};
}
}  // namespace

PYBIND11_MODULE(_phishhook, m)
{
    m.doc() = "Phishing smart-contract detection from EVM bytecode";

    static py::exception<Error> error(m, "PhishhookError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const Error& e)
        {
            py::set_error(error, (std::string{e.kind()} + ": " + e.what()).c_str());
        }
    });

    m.def(
        "disassemble",
        [](const py::object& code) {
            py::list out;
            for (const auto& i : disassemble(BytesView{to_bytes(code)}))
                out.append(py::make_tuple(i.offset, i.mnemonic,
                                          i.operand ? py::object(py::str(to_hex_prefixed(*i.operand))) : py::none(),
                                          i.gas ? py::object(py::int_(*i.gas)) : py::none(), i.truncated));
            return out;
        },
        py::arg("code"), "(offset, mnemonic, operand, gas, truncated) per instruction; code is hex text or bytes.");

    m.def(
        "opcode_counts",
        [](const py::object& code) {
            const auto ins = disassemble(BytesView{to_bytes(code)});
            std::map<std::string, std::uint32_t> counts;
            for (const auto& i : ins)
                ++counts[i.mnemonic];
            return counts;
        },
        py::arg("code"));

    m.def(
        "histogram_features",
        [](const std::filesystem::path& corpus_path, bool dedup, unsigned workers) {
            auto corpus = load_corpus(corpus_path);
            if (dedup)
                corpus = dedup_exact(corpus).corpus;
            const auto samples = opcode_samples(corpus, workers);
            const auto vocab = build_histogram_vocab(std::span<const OpcodeSample>{samples});
            const auto matrix = histogram_matrix(samples, vocab);
            py::array_t<double> x({static_cast<py::ssize_t>(matrix.rows()), static_cast<py::ssize_t>(matrix.width())});
            auto view = x.mutable_unchecked<2>();
            std::vector<int> y;
            std::vector<std::string> ids;
            for (std::size_t i = 0; i < matrix.rows(); ++i)
            {
                for (std::size_t j = 0; j < matrix.width(); ++j)
                    view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = matrix.at(i, j);
                y.push_back(matrix.label(i) == Label::phishing ? 1 : 0);
                ids.push_back(samples[i].id);
            }
            return py::make_tuple(x, py::array_t<int>(static_cast<py::ssize_t>(y.size()), y.data()), ids,
                                  vocab.mnemonics);
        },
        py::arg("corpus"), py::arg("dedup") = false, py::arg("workers") = 1,
        "Opcode histograms over the whole corpus: (X, y, ids, columns). Use cross_validate for leakage-free evaluation.");

    py::class_<PyModel>(m, "Model")
        .def("predict_proba", &PyModel::predict_proba, py::arg("x"), py::arg("workers") = 1)
        .def("predict", &PyModel::predict_labels, py::arg("x"), py::arg("threshold") = 0.5, py::arg("workers") = 1)
        .def("shap", &PyModel::shap, py::arg("x"), "(base_value, shap_values, raw_output) for one feature vector.")
        .def("save", &PyModel::save, py::arg("path"), py::arg("binary") = false)
        .def_property_readonly("family", &PyModel::family)
        .def_property_readonly("n_features", &PyModel::n_features)
        .def("__repr__", [](const PyModel& self) { return "<phishhook.Model " + self.describe() + ">"; });

    m.def(
        "train",
        [](const Array& x, const py::array_t<int, py::array::forcecast>& y, const std::string& family,
           std::vector<std::string> columns, std::uint64_t seed, unsigned workers, const py::kwargs& kwargs) {
            const auto labels = to_labels(y);
            if (x.ndim() != 2 || static_cast<std::size_t>(x.shape(0)) != labels.size())
                throw ShapeError("X must be 2-D with one row per label");
            ModelBundle bundle;
            if (!columns.empty())
                bundle.vocabulary = Vocabulary::from_mnemonics(columns);
            bundle.params = hyperparams(family, seed, kwargs);
            const auto matrix = to_matrix(x, labels, columns);
            bundle.model = train_model(matrix, bundle.params, workers);
            return PyModel{std::move(bundle)};
        },
        py::arg("x"), py::arg("y"), py::arg("family") = "rf", py::arg("columns") = std::vector<std::string>{},
        py::arg("seed") = 0, py::arg("workers") = 1,
        "Train rf, gbdt, logreg, svm, or knn. Extra keyword arguments override hyperparameters.");

    m.def("load_model", &load_model, py::arg("path"));

    m.def(
        "cross_validate",
        [](const std::filesystem::path& corpus_path, const std::string& family, int k, std::vector<std::uint64_t> seeds,
           unsigned workers, const py::kwargs& kwargs) {
            const auto samples = opcode_samples(load_corpus(corpus_path), workers);
            ModelSpec spec = ModelSpec::of(parse_family(family));
            spec.params = hyperparams(family, 0, kwargs);
            CvOptions o;
            o.k = k;
            o.seeds = std::move(seeds);
            o.workers = workers;
            py::list out;
            for (const auto& r : run_cv(spec, samples, o))
            {
                auto d = metrics_dict(r.metrics);
                d["model"] = r.model;
                d["run"] = r.run;
                d["seed"] = r.seed;
                d["fold"] = r.fold;
                d["train_size"] = r.train_size;
                d["test_size"] = r.test_size;
                out.append(d);
            }
            return out;
        },
        py::arg("corpus"), py::arg("family") = "rf", py::arg("k") = 10,
        py::arg("seeds") = std::vector<std::uint64_t>{0, 1, 2}, py::arg("workers") = 1);

    m.def(
        "metrics",
        [](const py::array_t<int, py::array::forcecast>& predicted, const py::array_t<int, py::array::forcecast>& actual) {
            return metrics_dict(compute_metrics(to_labels(predicted), to_labels(actual)));
        },
        py::arg("predicted"), py::arg("actual"));

    m.def("aut", [](const std::vector<double>& series) { return aut(series); }, py::arg("series"));

    m.def("shapiro_wilk", [](const std::vector<double>& x) { return stat_pair(stats::shapiro_wilk(x)); }, py::arg("x"));
    m.def(
        "kruskal_wallis",
        [](const std::vector<std::vector<double>>& groups) { return stat_pair(stats::kruskal_wallis(groups).test); },
        py::arg("groups"));
    m.def(
        "dunn",
        [](const std::vector<std::vector<double>>& groups, bool tie_correction) {
            py::list out;
            for (const auto& r : stats::dunn_pairwise(groups, tie_correction))
                out.append(py::make_tuple(r.pair->first, r.pair->second, r.statistic, r.p, *r.p_adj));
            return out;
        },
        py::arg("groups"), py::arg("tie_correction") = false, "(i, j, z, p, p_adj) per pair.");
    m.def("holm", [](const std::vector<double>& p) { return stats::holm_bonferroni(p); }, py::arg("p"));
    m.def("friedman", [](const stats::BlockMatrix& mat) { return stat_pair(stats::friedman(mat)); }, py::arg("matrix"),
          "matrix[treatment][block].");
    m.def(
        "wilcoxon",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return stat_pair(stats::wilcoxon_signed_rank(a, b));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "cliffs_delta",
        [](const std::vector<double>& x, const std::vector<double>& y) { return stat_pair(stats::cliffs_delta(x, y)); },
        py::arg("x"), py::arg("y"));
}
