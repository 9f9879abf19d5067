// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/model.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"
#include "phishhook/parallel.hpp"

#include <bit>
#include <cstring>
#include <sstream>

namespace phishhook
{
std::string_view to_string(Family family) noexcept
{
    switch (family)
    {
    case Family::random_forest:
        return "rf";
    case Family::gbdt:
        return "gbdt";
    case Family::logistic:
        return "logreg";
    case Family::svm:
        return "svm";
    case Family::knn:
        return "knn";
    }
    return "?";
}

Family parse_family(std::string_view name)
{
    for (const auto f : {Family::random_forest, Family::gbdt, Family::logistic, Family::svm, Family::knn})
        if (to_string(f) == name)
            return f;
    throw ValidationError("unknown model family '" + std::string{name} + "' (expected rf, gbdt, logreg, svm, knn)");
}

std::string Hyperparams::describe() const
{
    std::ostringstream s;
    s << "family=" << to_string(family);
    switch (family)
    {
    case Family::random_forest:
        s << " n_trees=" << n_trees << " max_depth=" << max_depth << " max_features=" << max_features
          << " bootstrap=" << bootstrap;
        break;
    case Family::gbdt:
        s << " n_trees=" << n_trees << " max_depth=" << max_depth << " learning_rate=" << learning_rate
          << " leaf_l2=" << leaf_l2;
        break;
    case Family::logistic:
    case Family::svm:
        s << " l2=" << l2 << " max_iter=" << max_iter;
        break;
    case Family::knn:
        s << " k=" << k;
        break;
    }
    s << " seed=" << seed;
    return s.str();
}

Hyperparams default_hyperparams(Family family)
{
    Hyperparams p;
    p.family = family;
    if (family == Family::gbdt)
    {
        p.n_trees = 100;
        p.max_depth = 6;
        p.learning_rate = 0.1;
    }
    return p;
}

Model train_model(const FeatureMatrix& features, const Hyperparams& params, unsigned workers)
{
    switch (params.family)
    {
    case Family::random_forest:
        return train_random_forest(features, params, workers);
    case Family::gbdt:
        return train_gbdt(features, params, workers);
    case Family::logistic:
        return train_linear(features, LinearLoss::logistic, params);
    case Family::svm:
        return train_linear(features, LinearLoss::hinge, params);
    case Family::knn:
        if (features.rows() == 0)
            throw EmptyInputError("kNN needs a non-empty training set");
        if (params.k < 1 || static_cast<std::size_t>(params.k) > features.rows())
            throw ValidationError("k must be in [1, training size]");
        return KnnModel{features, params.k};
    }
    throw ValidationError("unsupported model family");
}

std::size_t feature_count(const Model& model)
{
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ForestModel>)
                return m.feature_count;
            else if constexpr (std::is_same_v<T, LinearModel>)
                return m.weights.size();
            else
                return m.train.width();
        },
        model);
}

Predictions predict(const Model& model, const FeatureMatrix& features, double threshold, unsigned workers)
{
    if (features.width() != feature_count(model))
        throw ShapeError("feature width " + std::to_string(features.width()) + " != model width " +
                         std::to_string(feature_count(model)));
    Predictions out;
    out.probability.resize(features.rows());
    out.labels.resize(features.rows());
    parallel_for(features.rows(), workers, [&](std::size_t i) {
        const auto x = features.row(i);
        const double p = std::visit(
            [&](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, KnnModel>)
                    return knn_predict(m.train, x, m.k).probability;
                else
                    return m.probability(x);
            },
            model);
        out.probability[i] = p;
        out.labels[i] = p > threshold ? Label::phishing : Label::benign;
    });
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace
{
using json = nlohmann::json;

json params_to_json(const Hyperparams& p)
{
    return json{{"family", to_string(p.family)},
                {"n_trees", p.n_trees},
                {"max_depth", p.max_depth},
                {"max_features", p.max_features},
                {"min_samples_leaf", p.min_samples_leaf},
                {"bootstrap", p.bootstrap},
                {"learning_rate", p.learning_rate},
                {"leaf_l2", p.leaf_l2},
                {"min_child_weight", p.min_child_weight},
                {"k", p.k},
                {"l2", p.l2},
                {"max_iter", p.max_iter},
                {"tol", p.tol},
                {"step", p.step},
                {"line_search", p.line_search},
                {"seed", p.seed}};
}

Hyperparams params_from_json(const json& j)
{
    Hyperparams p;
    p.family = parse_family(j.at("family").get<std::string>());
    p.n_trees = j.value("n_trees", p.n_trees);
    p.max_depth = j.value("max_depth", p.max_depth);
    p.max_features = j.value("max_features", p.max_features);
    p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
    p.bootstrap = j.value("bootstrap", p.bootstrap);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.leaf_l2 = j.value("leaf_l2", p.leaf_l2);
    p.min_child_weight = j.value("min_child_weight", p.min_child_weight);
    p.k = j.value("k", p.k);
    p.l2 = j.value("l2", p.l2);
    p.max_iter = j.value("max_iter", p.max_iter);
    p.tol = j.value("tol", p.tol);
    p.step = j.value("step", p.step);
    p.line_search = j.value("line_search", p.line_search);
    p.seed = j.value("seed", p.seed);
    return p;
}

json tree_to_json(const DecisionTree& t)
{
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         cover = json::array(), value = json::array(), positive = json::array();
    for (const auto& n : t.nodes)
    {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        cover.push_back(n.cover);
        value.push_back(n.value);
        positive.push_back(n.positive_fraction);
    }
    return json{{"feature", feature}, {"threshold", threshold},       {"left", left}, {"right", right},
                {"cover", cover},     {"value", value}, {"positive_fraction", positive}};
}

DecisionTree tree_from_json(const json& j, std::size_t feature_count)
{
    DecisionTree t;
    const auto& feature = j.at("feature");
    t.nodes.resize(feature.size());
    for (std::size_t i = 0; i < t.nodes.size(); ++i)
    {
        auto& n = t.nodes[i];
        n.feature = feature.at(i).get<int>();
        n.threshold = j.at("threshold").at(i).get<double>();
        n.left = j.at("left").at(i).get<int>();
        n.right = j.at("right").at(i).get<int>();
        n.cover = j.at("cover").at(i).get<double>();
        n.value = j.at("value").at(i).get<double>();
        n.positive_fraction = j.at("positive_fraction").at(i).get<double>();
    }
    for (const auto& n : t.nodes)
    {
        if (n.is_leaf())
            continue;
        const auto size = static_cast<int>(t.nodes.size());
        if (static_cast<std::size_t>(n.feature) >= feature_count || n.left <= 0 || n.right <= 0 || n.left >= size ||
            n.right >= size)
            throw IntegrityError("tree node references an invalid feature or child");
    }
    if (t.nodes.empty())
        throw IntegrityError("tree without nodes");
    return t;
}

json matrix_to_json(const FeatureMatrix& m)
{
    json rows = json::array(), labels = json::array(), ids = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
    {
        const auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
        labels.push_back(to_string(m.label(i)));
        ids.push_back(m.id(i));
    }
    return json{{"columns", m.columns()}, {"rows", rows}, {"labels", labels}, {"ids", ids}};
}

FeatureMatrix matrix_from_json(const json& j)
{
    FeatureMatrix m{j.at("columns").get<std::vector<std::string>>()};
    const auto& rows = j.at("rows");
    for (std::size_t i = 0; i < rows.size(); ++i)
        m.add_row(rows[i].get<std::vector<double>>(), parse_label(j.at("labels").at(i).get<std::string>()),
                  j.at("ids").at(i).get<std::string>());
    return m;
}
}  // namespace

json to_json(const ModelBundle& bundle)
{
    json j;
    j["format"] = "phishhook-model";
    j["format_version"] = kModelFormatVersion;
    j["vocabulary"] = bundle.vocabulary.mnemonics;
    j["params"] = params_to_json(bundle.params);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ForestModel>)
            {
                json trees = json::array();
                for (const auto& t : m.trees)
                    trees.push_back(tree_to_json(t));
                j["model"] = json{{"kind", "forest"},
                                  {"mode", m.mode == EnsembleMode::bagging ? "bagging" : "boosting"},
                                  {"learning_rate", m.learning_rate},
                                  {"feature_count", m.feature_count},
                                  {"base_score", m.base_score},
                                  {"trees", trees}};
            }
            else if constexpr (std::is_same_v<T, LinearModel>)
                j["model"] = json{{"kind", "linear"},
                                  {"loss", m.loss == LinearLoss::logistic ? "logistic" : "hinge"},
                                  {"l2", m.l2},
                                  {"bias", m.bias},
                                  {"weights", m.weights}};
            else
                j["model"] = json{{"kind", "knn"}, {"k", m.k}, {"train", matrix_to_json(m.train)}};
        },
        bundle.model);
    return j;
}

ModelBundle bundle_from_json(const json& j)
{
    try
    {
        if (j.at("format").get<std::string>() != "phishhook-model")
            throw ParseError("not a phishhook model file");
        const auto version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw ParseError("unsupported model format version " + std::to_string(version));
        ModelBundle b;
        b.vocabulary = Vocabulary::from_mnemonics(j.at("vocabulary").get<std::vector<std::string>>());
        b.params = params_from_json(j.at("params"));
        const auto& m = j.at("model");
        const auto kind = m.at("kind").get<std::string>();
        if (kind == "forest")
        {
            ForestModel f;
            const auto mode = m.at("mode").get<std::string>();
            if (mode != "bagging" && mode != "boosting")
                throw ParseError("unknown ensemble mode '" + mode + "'");
            f.mode = mode == "bagging" ? EnsembleMode::bagging : EnsembleMode::boosting;
            f.learning_rate = m.at("learning_rate").get<double>();
            f.feature_count = m.at("feature_count").get<std::size_t>();
            f.base_score = m.at("base_score").get<double>();
            for (const auto& t : m.at("trees"))
                f.trees.push_back(tree_from_json(t, f.feature_count));
            b.model = std::move(f);
        }
        else if (kind == "linear")
        {
            LinearModel l;
            l.loss = m.at("loss").get<std::string>() == "hinge" ? LinearLoss::hinge : LinearLoss::logistic;
            l.l2 = m.at("l2").get<double>();
            l.bias = m.at("bias").get<double>();
            l.weights = m.at("weights").get<std::vector<double>>();
            b.model = std::move(l);
        }
        else if (kind == "knn")
            b.model = KnnModel{matrix_from_json(m.at("train")), m.at("k").get<int>()};
        else
            throw ParseError("unknown model kind '" + kind + "'");
        if (feature_count(b.model) != b.vocabulary.size())
            throw IntegrityError("model width does not match its vocabulary");
        return b;
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string{"malformed model JSON: "} + e.what());
    }
}

void save_bundle_json(const ModelBundle& bundle, const std::filesystem::path& path)
{
    auto out = csv::open_output(path);
    out << to_json(bundle).dump() << '\n';
    if (!out.flush())
        throw IoError("write failed: " + path.string());
}

ModelBundle load_bundle_json(const std::filesystem::path& path)
{
    auto in = csv::open_input(path);
    try
    {
        return bundle_from_json(json::parse(in));
    }
    catch (const json::exception& e)
    {
        throw ParseError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Binary

namespace
{
class Writer
{
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    template <typename T>
    void pod(T v)
    {
        static_assert(std::is_trivially_copyable_v<T>);
        unsigned char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        if constexpr (std::endian::native == std::endian::big)
            std::reverse(buf, buf + sizeof(T));
        out_.write(reinterpret_cast<const char*>(buf), sizeof(T));
    }
    void u64(std::uint64_t v) { pod(v); }
    void str(const std::string& s)
    {
        u64(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

private:
    std::ostream& out_;
};

class Reader
{
public:
    explicit Reader(std::istream& in) : in_(in) {}

    template <typename T>
    T pod()
    {
        unsigned char buf[sizeof(T)];
        if (!in_.read(reinterpret_cast<char*>(buf), sizeof(T)))
            throw ParseError("truncated binary model");
        if constexpr (std::endian::native == std::endian::big)
            std::reverse(buf, buf + sizeof(T));
        T v;
        std::memcpy(&v, buf, sizeof(T));
        return v;
    }
    std::uint64_t u64() { return pod<std::uint64_t>(); }
    std::uint64_t count(std::uint64_t limit = 1ULL << 32)
    {
        const auto n = u64();
        if (n > limit)
            throw ParseError("implausible length in binary model");
        return n;
    }
    std::string str()
    {
        std::string s(count(1 << 24), '\0');
        if (!in_.read(s.data(), static_cast<std::streamsize>(s.size())))
            throw ParseError("truncated binary model");
        return s;
    }

private:
    std::istream& in_;
};

constexpr char kMagic[4] = {'P', 'H', 'H', 'K'};
}  // namespace

void save_bundle_binary(const ModelBundle& bundle, const std::filesystem::path& path)
{
    auto out = csv::open_output(path);
    out.write(kMagic, 4);
    Writer w{out};
    w.pod<std::uint32_t>(kModelFormatVersion);
    // Hyperparameters travel as JSON text; they are small and rarely read.
    w.str(params_to_json(bundle.params).dump());
    w.u64(bundle.vocabulary.size());
    for (const auto& m : bundle.vocabulary.mnemonics)
        w.str(m);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ForestModel>)
            {
                w.pod<std::uint8_t>(0);
                w.pod<std::uint8_t>(static_cast<std::uint8_t>(m.mode));
                w.pod(m.learning_rate);
                w.u64(m.feature_count);
                w.pod(m.base_score);
                w.u64(m.trees.size());
                for (const auto& t : m.trees)
                {
                    w.u64(t.nodes.size());
                    for (const auto& n : t.nodes)
                    {
                        w.pod<std::int32_t>(n.feature);
                        w.pod(n.threshold);
                        w.pod<std::int32_t>(n.left);
                        w.pod<std::int32_t>(n.right);
                        w.pod(n.cover);
                        w.pod(n.value);
                        w.pod(n.positive_fraction);
                    }
                }
            }
            else if constexpr (std::is_same_v<T, LinearModel>)
            {
                w.pod<std::uint8_t>(1);
                w.pod<std::uint8_t>(static_cast<std::uint8_t>(m.loss));
                w.pod(m.l2);
                w.pod(m.bias);
                w.u64(m.weights.size());
                for (const auto v : m.weights)
                    w.pod(v);
            }
            else
            {
                w.pod<std::uint8_t>(2);
                w.pod<std::int32_t>(m.k);
                w.u64(m.train.width());
                for (const auto& c : m.train.columns())
                    w.str(c);
                w.u64(m.train.rows());
                for (std::size_t i = 0; i < m.train.rows(); ++i)
                {
                    w.str(m.train.id(i));
                    w.pod<std::uint8_t>(static_cast<std::uint8_t>(m.train.label(i)));
                    for (const auto v : m.train.row(i))
                        w.pod(v);
                }
            }
        },
        bundle.model);
    if (!out.flush())
        throw IoError("write failed: " + path.string());
}

ModelBundle load_bundle_binary(const std::filesystem::path& path)
{
    auto in = csv::open_input(path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw ParseError(path.string() + ": not a phishhook binary model");
    Reader r{in};
    const auto version = r.pod<std::uint32_t>();
    if (version != kModelFormatVersion)
        throw ParseError("unsupported model format version " + std::to_string(version));
    ModelBundle b;
    try
    {
        b.params = params_from_json(json::parse(r.str()));
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string{"binary model hyperparameters: "} + e.what());
    }
    std::vector<std::string> vocab(r.count(256));
    for (auto& m : vocab)
        m = r.str();
    b.vocabulary = Vocabulary::from_mnemonics(std::move(vocab));
    const auto kind = r.pod<std::uint8_t>();
    if (kind == 0)
    {
        ForestModel f;
        const auto mode = r.pod<std::uint8_t>();
        if (mode > 1)
            throw ParseError("unknown ensemble mode");
        f.mode = static_cast<EnsembleMode>(mode);
        f.learning_rate = r.pod<double>();
        f.feature_count = r.count();
        f.base_score = r.pod<double>();
        f.trees.resize(r.count());
        for (auto& t : f.trees)
        {
            t.nodes.resize(r.count());
            if (t.nodes.empty())
                throw IntegrityError("tree without nodes");
            for (auto& n : t.nodes)
            {
                n.feature = r.pod<std::int32_t>();
                n.threshold = r.pod<double>();
                n.left = r.pod<std::int32_t>();
                n.right = r.pod<std::int32_t>();
                n.cover = r.pod<double>();
                n.value = r.pod<double>();
                n.positive_fraction = r.pod<double>();
            }
            const auto size = static_cast<int>(t.nodes.size());
            for (const auto& n : t.nodes)
                if (!n.is_leaf() && (static_cast<std::size_t>(n.feature) >= f.feature_count || n.left <= 0 ||
                                     n.right <= 0 || n.left >= size || n.right >= size))
                    throw IntegrityError("tree node references an invalid feature or child");
        }
        b.model = std::move(f);
    }
    else if (kind == 1)
    {
        LinearModel l;
        const auto loss = r.pod<std::uint8_t>();
        if (loss > 1)
            throw ParseError("unknown linear loss");
        l.loss = static_cast<LinearLoss>(loss);
        l.l2 = r.pod<double>();
        l.bias = r.pod<double>();
        l.weights.resize(r.count());
        for (auto& v : l.weights)
            v = r.pod<double>();
        b.model = std::move(l);
    }
    else if (kind == 2)
    {
        const auto k = r.pod<std::int32_t>();
        std::vector<std::string> columns(r.count(256));
        for (auto& c : columns)
            c = r.str();
        FeatureMatrix m{columns};
        const auto rows = r.count();
        std::vector<double> row(columns.size());
        for (std::uint64_t i = 0; i < rows; ++i)
        {
            auto id = r.str();
            const auto label = r.pod<std::uint8_t>();
            if (label > 1)
                throw ParseError("bad label in binary model");
            for (auto& v : row)
                v = r.pod<double>();
            m.add_row(row, static_cast<Label>(label), std::move(id));
        }
        b.model = KnnModel{std::move(m), k};
    }
    else
        throw ParseError("unknown model kind in binary model");
    if (feature_count(b.model) != b.vocabulary.size())
        throw IntegrityError("model width does not match its vocabulary");
    return b;
}
}  // namespace phishhook
