// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

#include <phishhook/error.hpp>
#include <phishhook/experiments.hpp>
#include <phishhook/features.hpp>
#include <phishhook/hex.hpp>

#include <json.hpp>

#include <cmath>

using namespace phishhook;

namespace
{
OpcodeSample sample(const std::string& hex, Label label = Label::benign, std::string id = "s")
{
    return {std::move(id), label, std::nullopt, count_opcodes(BytesView{from_hex(hex)})};
}
}  // namespace

TEST_SUITE("features")
{
    TEST_CASE("vocabulary is the sorted set of observed mnemonics")
    {
        const std::vector<OpcodeSample> train{sample("6080604052"), sample("5a00")};
        const auto v = build_histogram_vocab(std::span<const OpcodeSample>{train});
        CHECK(v.mnemonics == std::vector<std::string>{"GAS", "MSTORE", "PUSH1", "STOP"});
        CHECK(v.index_of("PUSH1") == 2u);
        CHECK_FALSE(v.index_of("CALL").has_value());
        CHECK_THROWS_AS(build_histogram_vocab(std::span<const OpcodeSample>{}), EmptyInputError);
    }

    TEST_CASE("histograms are raw counts aligned to the vocabulary")
    {
        const std::vector<OpcodeSample> train{sample("6080604052")};
        const auto v = build_histogram_vocab(std::span<const OpcodeSample>{train});
        CHECK(histogram_featurize(train[0].counts, v) == OpcodeHistogram{1, 2});
        // Unseen mnemonics are dropped.
        const auto h = histogram_featurize(count_opcodes(BytesView{from_hex("5a5a52")}), v);
        CHECK(h == OpcodeHistogram{1, 0});
        const auto m = histogram_matrix(train, v);
        CHECK(m.rows() == 1);
        CHECK(m.columns() == v.mnemonics);
        CHECK(m.at(0, 1) == 2.0);
    }

    TEST_CASE("vocabulary perturbation: test rows never reach the vocabulary or the model")
    {
        testing::SyntheticOptions o;
        o.per_class = 30;
        auto samples = opcode_samples(testing::synthetic_corpus(o));
        const auto plan = make_folds(labels_of(samples), 5, 3);
        const auto train = plan.train_indices(0);
        const auto test = plan.test_indices(0);
        auto params = default_hyperparams(Family::random_forest);
        params.n_trees = 10;
        const auto before = fit_on_indices(samples, train, params);
        for (const auto i : test)
        {
            samples[i].counts.fill(0);
            samples[i].counts[0x0c] = 99;  // an undefined opcode nobody trains on
            samples[i].label = samples[i].label == Label::phishing ? Label::benign : Label::phishing;
        }
        const auto after = fit_on_indices(samples, train, params);
        CHECK(before.vocabulary == after.vocabulary);
        CHECK(std::get<ForestModel>(before.model) == std::get<ForestModel>(after.model));
    }

    TEST_CASE("RGB image layout and truncation")
    {
        Bytes code{1, 2, 3, 4, 5};
        const auto enc = encode_rgb_image(BytesView{code});
        CHECK_FALSE(enc.truncated);
        CHECK(enc.image.at(0, 0, 0) == 1);
        CHECK(enc.image.at(0, 0, 2) == 3);
        CHECK(enc.image.at(0, 1, 1) == 5);
        CHECK(enc.image.at(0, 1, 2) == 0);
        Bytes big(kImageCells + 1, 7);
        big[672] = 9;
        const auto full = encode_rgb_image(BytesView{big});
        CHECK(full.truncated);
        CHECK(full.image.at(1, 0, 0) == 9);
        CHECK(full.image.at(223, 223, 2) == 7);
    }

    TEST_CASE("frequency image intensities")
    {
        const std::vector<std::vector<Instruction>> train{disassemble(std::string_view{"600160015200"}),
                                                          disassemble(std::string_view{"6002"})};
        const auto lookup = FrequencyLookup::build(train);
        // PUSH1 appears 3 times: the maximum.
        CHECK(lookup.mnemonic_intensity("PUSH1") == 255);
        const auto mstore = static_cast<int>(std::lround(255.0 * std::log1p(1.0) / std::log1p(3.0)));
        CHECK(lookup.mnemonic_intensity("MSTORE") == mstore);
        CHECK(lookup.mnemonic_intensity("CALL") == 0);
        CHECK(lookup.operand_intensity(std::nullopt) == 0);
        CHECK(lookup.operand_intensity(Bytes{0x01}) == 255);
        const auto img = encode_frequency_image(disassemble(std::string_view{"600152"}), lookup);
        CHECK(img.image.at(0, 0, 0) == 255);
        CHECK(img.image.at(0, 1, 0) == mstore);
        CHECK(img.image.at(0, 1, 1) == 0);
        CHECK(img.image.at(0, 2, 0) == 0);
        CHECK_FALSE(img.truncated);
    }

    TEST_CASE("bigram windows, ids, and OOV")
    {
        const std::vector<Bytes> train{from_hex("6080604052"), from_hex("608060")};
        const auto vocab = BigramVocab::build(train);
        CHECK(vocab.windows("6080604052") == std::vector<std::string>{"608060", "405200"});
        CHECK(vocab.lookup("608060") == 2);
        CHECK(vocab.lookup("405200") == 3);
        CHECK(vocab.lookup("ffffff") == TokenSequence::oov_id);
        CHECK(vocab.size() == 4);
        CHECK(vocab.text(3) == "405200");
        const auto seq = tokenize_bigrams(BytesView{from_hex("608060ffffff")}, vocab);
        CHECK(seq.ids == std::vector<std::uint32_t>{2, 1});
        std::vector<TokenSequence> batch{seq, {{2}}};
        CHECK(pad_batch(batch) == 2);
        CHECK(batch[1].ids == std::vector<std::uint32_t>{2, TokenSequence::pad_id});
    }

    TEST_CASE("exports and manifest")
    {
        testing::TempDir dir;
        std::vector<ImageTensor> images(2);
        images[1].at(0, 0, 0) = 42;
        const std::vector<std::string> ids{"a", "b"};
        const auto e = export_images(images, ids, dir / "img");
        CHECK(std::filesystem::file_size(e.payload) == 2 * kImageCells);
        const auto side = nlohmann::json::parse(testing::read_file(e.sidecar));
        CHECK(side["shape"] == nlohmann::json::array({2, 224, 224, 3}));

        const std::vector<Bytes> train{from_hex("6080604052")};
        const auto vocab = BigramVocab::build(train);
        std::vector<TokenSequence> seqs{tokenize_bigrams(BytesView{train[0]}, vocab), {{3}}};
        const auto t = export_tokens(seqs, ids, vocab, dir / "tok");
        CHECK(std::filesystem::file_size(t.payload) == 2 * 2 * 4);
        FeatureManifest manifest{{e, t}};
        manifest.write(dir / "manifest.json");
        CHECK(nlohmann::json::parse(testing::read_file(dir / "manifest.json"))["files"].size() == 2);
    }

    TEST_CASE("parallel sample extraction matches serial")
    {
        testing::SyntheticOptions o;
        o.per_class = 20;
        const auto c = testing::synthetic_corpus(o);
        const auto a = opcode_samples(c, 1);
        const auto b = opcode_samples(c, 8);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i].counts == b[i].counts);
    }
}
