// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "corpus.hpp"
#include "disasm.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace phishhook
{
/// One contract reduced to what the histogram pipeline needs.
struct OpcodeSample
{
    std::string id;
    Label label = Label::benign;
    std::optional<YearMonth> month;
    OpcodeCounts counts{};
};

/// Disassembles every record (in parallel when workers > 1).
std::vector<OpcodeSample> opcode_samples(const Corpus& corpus, unsigned workers = 1,
                                         const OpcodeTable& table = OpcodeTable::shanghai());

/// Sorted mnemonics observed in a training split, aligned with their byte codes.
struct Vocabulary
{
    std::vector<std::string> mnemonics;
    std::vector<std::uint8_t> codes;

    std::size_t size() const noexcept { return mnemonics.size(); }
    std::optional<std::size_t> index_of(std::string_view mnemonic) const;
    bool operator==(const Vocabulary&) const = default;

    /// Rebuilds codes from mnemonics against a table; throws ValidationError
    /// on an unknown mnemonic.
    static Vocabulary from_mnemonics(std::vector<std::string> mnemonics,
                                     const OpcodeTable& table = OpcodeTable::shanghai());
};

/// Throws EmptyInputError when no training sample is given.
Vocabulary build_histogram_vocab(std::span<const OpcodeCounts> training,
                                 const OpcodeTable& table = OpcodeTable::shanghai());
Vocabulary build_histogram_vocab(std::span<const OpcodeSample> training,
                                 const OpcodeTable& table = OpcodeTable::shanghai());
Vocabulary build_histogram_vocab(const Corpus& training, const OpcodeTable& table = OpcodeTable::shanghai());

/// Raw occurrence counts aligned to the vocabulary, never normalized.
/// Mnemonics outside the vocabulary are dropped.
using OpcodeHistogram = std::vector<std::uint32_t>;
OpcodeHistogram histogram_featurize(const std::vector<Instruction>& contract, const Vocabulary& vocab);
OpcodeHistogram histogram_featurize(const OpcodeCounts& counts, const Vocabulary& vocab);

/// Dense row-major feature rows with labels and sample ids.
class FeatureMatrix
{
public:
    FeatureMatrix() = default;
    explicit FeatureMatrix(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::span<const double> values, Label label, std::string id);

    std::size_t rows() const noexcept { return labels_.size(); }
    std::size_t width() const noexcept { return columns_.size(); }
    std::span<const double> row(std::size_t i) const
    {
        return {data_.data() + i * width(), width()};
    }
    double at(std::size_t i, std::size_t j) const { return data_[i * width() + j]; }
    Label label(std::size_t i) const { return labels_[i]; }
    const std::vector<Label>& labels() const noexcept { return labels_; }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }

    /// Rows at the given indices, in order.
    FeatureMatrix subset(std::span<const std::size_t> indices) const;

    /// CSV with header sample_id,label,<columns...>.
    void write_csv(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<double> data_;
    std::vector<Label> labels_;
    std::vector<std::string> ids_;
};

FeatureMatrix histogram_matrix(std::span<const OpcodeSample> samples, const Vocabulary& vocab);

inline constexpr std::size_t kImageSide = 224;
inline constexpr std::size_t kImageChannels = 3;
inline constexpr std::size_t kImageCells = kImageSide * kImageSide * kImageChannels;  // 150,528
inline constexpr std::size_t kImagePixels = kImageSide * kImageSide;                  // 50,176

/// 224 x 224 x 3 uint8 image, row-major with interleaved channels (HWC).
struct ImageTensor
{
    std::vector<std::uint8_t> cells = std::vector<std::uint8_t>(kImageCells, 0);

    std::uint8_t at(std::size_t row, std::size_t col, std::size_t channel) const
    {
        return cells[(row * kImageSide + col) * kImageChannels + channel];
    }
    std::uint8_t& at(std::size_t row, std::size_t col, std::size_t channel)
    {
        return cells[(row * kImageSide + col) * kImageChannels + channel];
    }
    bool operator==(const ImageTensor&) const = default;
};

struct ImageEncoding
{
    ImageTensor image;
    /// Input exceeded the image capacity and was cut.
    bool truncated = false;
};

/// Raw bytes fill channels sequentially: byte i lands in
/// (i / 672, (i % 672) / 3, i % 3). Longer inputs are truncated.
ImageEncoding encode_rgb_image(BytesView bytecode);

/// Training-split frequency lookup for the mnemonic, operand, and gas fields.
/// Intensity is round(255 * log1p(count) / log1p(max_count)) per field, so
/// the most frequent value maps to 255 and unseen or absent values to 0.
class FrequencyLookup
{
public:
    static FrequencyLookup build(std::span<const std::vector<Instruction>> training);

    std::uint8_t mnemonic_intensity(std::string_view mnemonic) const;
    std::uint8_t operand_intensity(const std::optional<Bytes>& operand) const;
    std::uint8_t gas_intensity(const std::optional<std::uint32_t>& gas) const;

private:
    std::unordered_map<std::string, std::uint64_t> mnemonic_;
    std::unordered_map<std::string, std::uint64_t> operand_;
    std::unordered_map<std::uint32_t, std::uint64_t> gas_;
    std::uint64_t max_mnemonic_ = 0, max_operand_ = 0, max_gas_ = 0;
};

/// One pixel per instruction, row-major: R from the mnemonic, G from the
/// operand, B from the gas. Contracts over 50,176 instructions are truncated.
ImageEncoding encode_frequency_image(const std::vector<Instruction>& contract, const FrequencyLookup& lookup);

struct TokenSequence
{
    static constexpr std::uint32_t pad_id = 0;
    static constexpr std::uint32_t oov_id = 1;
    std::vector<std::uint32_t> ids;
};

/// Bigram vocabulary over fixed-width hex windows. Real windows get ids from
/// 2 in order of first occurrence in the training split.
class BigramVocab
{
public:
    BigramVocab(std::size_t window = 6, std::size_t stride = 6);

    static BigramVocab build(std::span<const Bytes> training, std::size_t window = 6, std::size_t stride = 6);

    /// Windows of the lowercase hex text. The last window is right-padded
    /// with '0'; iteration stops once a window reaches the end.
    std::vector<std::string> windows(std::string_view hex) const;

    std::uint32_t add(const std::string& bigram);
    std::uint32_t lookup(const std::string& bigram) const;
    /// Window text for an id >= 2.
    const std::string& text(std::uint32_t id) const { return by_id_.at(id - 2); }
    /// Including the pad and OOV ids.
    std::size_t size() const noexcept { return by_id_.size() + 2; }
    std::size_t window() const noexcept { return window_; }
    std::size_t stride() const noexcept { return stride_; }

private:
    std::size_t window_, stride_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::string> by_id_;
};

TokenSequence tokenize_bigrams(BytesView bytecode, const BigramVocab& vocab);

/// Right-pads every sequence with pad_id to the longest length in the batch.
std::size_t pad_batch(std::vector<TokenSequence>& batch);

struct ManifestEntry
{
    std::string kind;  // histogram_csv | image_u8 | tokens_u32
    std::filesystem::path payload;
    std::filesystem::path sidecar;  // empty for CSV
    std::size_t entries = 0;
};

struct FeatureManifest
{
    std::vector<ManifestEntry> files;
    void write(const std::filesystem::path& path) const;
};

/// Histogram CSV export.
ManifestEntry export_histograms(const FeatureMatrix& matrix, const std::filesystem::path& csv_path);

/// Images as a flat uint8 payload of shape [n, 224, 224, 3] plus a JSON
/// sidecar naming shape, dtype, ordering and sample ids.
ManifestEntry export_images(std::span<const ImageTensor> images, std::span<const std::string> ids,
                            const std::filesystem::path& stem);

/// Token sequences padded to the batch maximum, written as little-endian
/// uint32 [n, max_len] with a JSON sidecar.
ManifestEntry export_tokens(std::vector<TokenSequence> sequences, std::span<const std::string> ids,
                            const BigramVocab& vocab, const std::filesystem::path& stem);
}  // namespace phishhook
