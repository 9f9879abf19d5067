// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/features.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"
#include "phishhook/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>

namespace phishhook
{
std::vector<OpcodeSample> opcode_samples(const Corpus& corpus, unsigned workers, const OpcodeTable& table)
{
    std::vector<OpcodeSample> out(corpus.size());
    parallel_for(corpus.size(), workers, [&](std::size_t i) {
        const auto& r = corpus[i];
        out[i].id = r.address;
        out[i].label = r.label;
        out[i].month = r.deployed_month;
        out[i].counts = count_opcodes(r.bytecode, table);
    });
    return out;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view mnemonic) const
{
    const auto it = std::lower_bound(mnemonics.begin(), mnemonics.end(), mnemonic);
    if (it == mnemonics.end() || *it != mnemonic)
        return std::nullopt;
    return static_cast<std::size_t>(it - mnemonics.begin());
}

Vocabulary Vocabulary::from_mnemonics(std::vector<std::string> mnemonics, const OpcodeTable& table)
{
    std::sort(mnemonics.begin(), mnemonics.end());
    mnemonics.erase(std::unique(mnemonics.begin(), mnemonics.end()), mnemonics.end());
    Vocabulary v;
    for (auto& m : mnemonics)
    {
        const auto code = table.code_of(m);
        if (!code)
            throw ValidationError("vocabulary mnemonic '" + m + "' is not in the opcode table");
        v.codes.push_back(*code);
        v.mnemonics.push_back(std::move(m));
    }
    return v;
}

Vocabulary build_histogram_vocab(std::span<const OpcodeCounts> training, const OpcodeTable& table)
{
    if (training.empty())
        throw EmptyInputError("vocabulary needs a non-empty training split");
    std::array<bool, 256> seen{};
    for (const auto& counts : training)
        for (unsigned c = 0; c < 256; ++c)
            seen[c] = seen[c] || counts[c] > 0;
    std::vector<std::string> names;
    for (unsigned c = 0; c < 256; ++c)
        if (seen[c])
            names.push_back(table[static_cast<std::uint8_t>(c)].mnemonic);
    return Vocabulary::from_mnemonics(std::move(names), table);
}

Vocabulary build_histogram_vocab(std::span<const OpcodeSample> training, const OpcodeTable& table)
{
    std::vector<OpcodeCounts> counts;
    counts.reserve(training.size());
    for (const auto& s : training)
        counts.push_back(s.counts);
    return build_histogram_vocab(std::span<const OpcodeCounts>{counts}, table);
}

Vocabulary build_histogram_vocab(const Corpus& training, const OpcodeTable& table)
{
    const auto samples = opcode_samples(training, 1, table);
    return build_histogram_vocab(std::span<const OpcodeSample>{samples}, table);
}

OpcodeHistogram histogram_featurize(const std::vector<Instruction>& contract, const Vocabulary& vocab)
{
    return histogram_featurize(count_opcodes(contract), vocab);
}

OpcodeHistogram histogram_featurize(const OpcodeCounts& counts, const Vocabulary& vocab)
{
    OpcodeHistogram h(vocab.size());
    for (std::size_t j = 0; j < vocab.size(); ++j)
        h[j] = counts[vocab.codes[j]];
    return h;
}

void FeatureMatrix::add_row(std::span<const double> values, Label label, std::string id)
{
    if (values.size() != width())
        throw ShapeError("row width " + std::to_string(values.size()) + " != matrix width " +
                         std::to_string(width()));
    data_.insert(data_.end(), values.begin(), values.end());
    labels_.push_back(label);
    ids_.push_back(std::move(id));
}

FeatureMatrix FeatureMatrix::subset(std::span<const std::size_t> indices) const
{
    FeatureMatrix out{columns_};
    out.data_.reserve(indices.size() * width());
    for (const auto i : indices)
        out.add_row(row(i), labels_[i], ids_[i]);
    return out;
}

void FeatureMatrix::write_csv(const std::filesystem::path& path) const
{
    auto out = csv::open_output(path);
    out << "sample_id,label";
    for (const auto& c : columns_)
        out << ',' << csv::escape(c);
    out << '\n';
    for (std::size_t i = 0; i < rows(); ++i)
    {
        out << csv::escape(ids_[i]) << ',' << to_string(labels_[i]);
        for (const auto v : row(i))
            out << ',' << csv::format_double(v);
        out << '\n';
    }
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

FeatureMatrix histogram_matrix(std::span<const OpcodeSample> samples, const Vocabulary& vocab)
{
    FeatureMatrix m{vocab.mnemonics};
    std::vector<double> row(vocab.size());
    for (const auto& s : samples)
    {
        for (std::size_t j = 0; j < vocab.size(); ++j)
            row[j] = s.counts[vocab.codes[j]];
        m.add_row(row, s.label, s.id);
    }
    return m;
}

ImageEncoding encode_rgb_image(BytesView bytecode)
{
    ImageEncoding enc;
    const auto n = std::min(bytecode.size(), kImageCells);
    std::copy_n(bytecode.begin(), n, enc.image.cells.begin());
    enc.truncated = bytecode.size() > kImageCells;
    return enc;
}

namespace
{
std::uint8_t scale_frequency(std::uint64_t count, std::uint64_t max_count)
{
    if (count == 0 || max_count == 0)
        return 0;
    const double v = 255.0 * std::log1p(static_cast<double>(count)) / std::log1p(static_cast<double>(max_count));
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

template <typename Map, typename Key>
std::uint64_t lookup_count(const Map& map, const Key& key)
{
    const auto it = map.find(key);
    return it == map.end() ? 0 : it->second;
}
}  // namespace

FrequencyLookup FrequencyLookup::build(std::span<const std::vector<Instruction>> training)
{
    FrequencyLookup f;
    for (const auto& contract : training)
        for (const auto& ins : contract)
        {
            ++f.mnemonic_[ins.mnemonic];
            if (ins.operand)
                ++f.operand_[to_hex(*ins.operand)];
            if (ins.gas)
                ++f.gas_[*ins.gas];
        }
    for (const auto& [k, v] : f.mnemonic_)
        f.max_mnemonic_ = std::max(f.max_mnemonic_, v);
    for (const auto& [k, v] : f.operand_)
        f.max_operand_ = std::max(f.max_operand_, v);
    for (const auto& [k, v] : f.gas_)
        f.max_gas_ = std::max(f.max_gas_, v);
    return f;
}

std::uint8_t FrequencyLookup::mnemonic_intensity(std::string_view mnemonic) const
{
    return scale_frequency(lookup_count(mnemonic_, std::string{mnemonic}), max_mnemonic_);
}

std::uint8_t FrequencyLookup::operand_intensity(const std::optional<Bytes>& operand) const
{
    if (!operand)
        return 0;
    return scale_frequency(lookup_count(operand_, to_hex(*operand)), max_operand_);
}

std::uint8_t FrequencyLookup::gas_intensity(const std::optional<std::uint32_t>& gas) const
{
    if (!gas)
        return 0;
    return scale_frequency(lookup_count(gas_, *gas), max_gas_);
}

ImageEncoding encode_frequency_image(const std::vector<Instruction>& contract, const FrequencyLookup& lookup)
{
    ImageEncoding enc;
    const auto n = std::min(contract.size(), kImagePixels);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto& ins = contract[i];
        auto* px = enc.image.cells.data() + i * kImageChannels;
        px[0] = lookup.mnemonic_intensity(ins.mnemonic);
        px[1] = lookup.operand_intensity(ins.operand);
        px[2] = lookup.gas_intensity(ins.gas);
    }
    enc.truncated = contract.size() > kImagePixels;
    return enc;
}

BigramVocab::BigramVocab(std::size_t window, std::size_t stride) : window_(window), stride_(stride)
{
    if (window == 0 || stride == 0)
        throw ValidationError("bigram window and stride must be positive");
}

std::vector<std::string> BigramVocab::windows(std::string_view hex) const
{
    std::vector<std::string> out;
    for (std::size_t start = 0; start < hex.size(); start += stride_)
    {
        std::string w{hex.substr(start, window_)};
        w.resize(window_, '0');
        out.push_back(std::move(w));
        if (start + window_ >= hex.size())
            break;
    }
    return out;
}

std::uint32_t BigramVocab::add(const std::string& bigram)
{
    const auto [it, inserted] = ids_.try_emplace(bigram, static_cast<std::uint32_t>(by_id_.size() + 2));
    if (inserted)
        by_id_.push_back(bigram);
    return it->second;
}

std::uint32_t BigramVocab::lookup(const std::string& bigram) const
{
    const auto it = ids_.find(bigram);
    return it == ids_.end() ? TokenSequence::oov_id : it->second;
}

BigramVocab BigramVocab::build(std::span<const Bytes> training, std::size_t window, std::size_t stride)
{
    BigramVocab v{window, stride};
    for (const auto& code : training)
        for (const auto& w : v.windows(to_hex(code)))
            v.add(w);
    return v;
}

TokenSequence tokenize_bigrams(BytesView bytecode, const BigramVocab& vocab)
{
    TokenSequence seq;
    for (const auto& w : vocab.windows(to_hex(bytecode)))
        seq.ids.push_back(vocab.lookup(w));
    return seq;
}

std::size_t pad_batch(std::vector<TokenSequence>& batch)
{
    std::size_t longest = 0;
    for (const auto& s : batch)
        longest = std::max(longest, s.ids.size());
    for (auto& s : batch)
        s.ids.resize(longest, TokenSequence::pad_id);
    return longest;
}

void FeatureManifest::write(const std::filesystem::path& path) const
{
    nlohmann::ordered_json j;
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : files)
    {
        nlohmann::ordered_json e;
        e["kind"] = f.kind;
        e["payload"] = f.payload.filename().string();
        e["sidecar"] = f.sidecar.empty() ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(f.sidecar.filename().string());
        e["entries"] = f.entries;
        j["files"].push_back(e);
    }
    auto out = csv::open_output(path);
    out << j.dump(2) << '\n';
}

ManifestEntry export_histograms(const FeatureMatrix& matrix, const std::filesystem::path& csv_path)
{
    matrix.write_csv(csv_path);
    return {"histogram_csv", csv_path, {}, matrix.rows()};
}

namespace
{
void write_sidecar(const std::filesystem::path& path, const nlohmann::ordered_json& j)
{
    auto out = csv::open_output(path);
    out << j.dump(2) << '\n';
    if (!out.flush())
        throw IoError("write failed: " + path.string());
}
}  // namespace

ManifestEntry export_images(std::span<const ImageTensor> images, std::span<const std::string> ids,
                            const std::filesystem::path& stem)
{
    if (images.size() != ids.size())
        throw ShapeError("image count and id count differ");
    auto payload = stem;
    payload += ".u8";
    auto sidecar = stem;
    sidecar += ".json";
    {
        auto out = csv::open_output(payload);
        for (const auto& img : images)
            out.write(reinterpret_cast<const char*>(img.cells.data()), static_cast<std::streamsize>(img.cells.size()));
        if (!out.flush())
            throw IoError("write failed: " + payload.string());
    }
    nlohmann::ordered_json j;
    j["dtype"] = "uint8";
    j["shape"] = {images.size(), kImageSide, kImageSide, kImageChannels};
    j["ordering"] = "NHWC, row-major, channels R,G,B interleaved";
    j["payload"] = payload.filename().string();
    j["sample_ids"] = std::vector<std::string>(ids.begin(), ids.end());
    write_sidecar(sidecar, j);
    return {"image_u8", payload, sidecar, images.size()};
}

ManifestEntry export_tokens(std::vector<TokenSequence> sequences, std::span<const std::string> ids,
                            const BigramVocab& vocab, const std::filesystem::path& stem)
{
    if (sequences.size() != ids.size())
        throw ShapeError("sequence count and id count differ");
    const auto len = pad_batch(sequences);
    auto payload = stem;
    payload += ".u32";
    auto sidecar = stem;
    sidecar += ".json";
    {
        auto out = csv::open_output(payload);
        for (const auto& s : sequences)
            for (auto id : s.ids)
            {
                if constexpr (std::endian::native == std::endian::big)
                    id = (id >> 24) | ((id >> 8) & 0xff00) | ((id << 8) & 0xff0000) | (id << 24);
                out.write(reinterpret_cast<const char*>(&id), sizeof(id));
            }
        if (!out.flush())
            throw IoError("write failed: " + payload.string());
    }
    nlohmann::ordered_json j;
    j["dtype"] = "uint32_le";
    j["shape"] = {sequences.size(), len};
    j["ordering"] = "row-major, one padded sequence per row";
    j["pad_id"] = TokenSequence::pad_id;
    j["oov_id"] = TokenSequence::oov_id;
    j["window"] = vocab.window();
    j["stride"] = vocab.stride();
    j["vocab_size"] = vocab.size();
    j["payload"] = payload.filename().string();
    j["sample_ids"] = std::vector<std::string>(ids.begin(), ids.end());
    write_sidecar(sidecar, j);
    return {"tokens_u32", payload, sidecar, sequences.size()};
}
}  // namespace phishhook
