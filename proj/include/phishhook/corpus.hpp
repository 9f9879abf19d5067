// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "disasm.hpp"
#include "hex.hpp"

#include <array>
#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace phishhook
{
/// Class label. Benign is index 0; every tie in the library resolves to it.
enum class Label : std::uint8_t
{
    benign = 0,
    phishing = 1,
};

std::string_view to_string(Label label) noexcept;
/// Accepts "phishing" or "benign"; throws ValidationError otherwise.
Label parse_label(std::string_view text);

struct YearMonth
{
    int year = 0;
    int month = 1;  // 1..12

    /// Parses "YYYY-MM"; throws ValidationError.
    static YearMonth parse(std::string_view text);
    std::string str() const;
    YearMonth next() const noexcept;
    int index() const noexcept { return year * 12 + (month - 1); }

    auto operator<=>(const YearMonth&) const = default;
};

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 of raw bytecode bytes.
Digest bytecode_digest(BytesView bytecode);
std::string digest_hex(const Digest& digest);

struct ContractRecord
{
    /// Lowercase 0x-prefixed 20-byte address.
    std::string address;
    Bytes bytecode;
    Label label = Label::benign;
    std::optional<YearMonth> deployed_month;
    std::string source;
};

/// Validates and normalizes an address to lowercase 0x + 40 hex digits.
std::string normalize_address(std::string_view address);

class Corpus
{
public:
    Corpus() = default;
    explicit Corpus(std::vector<ContractRecord> records);

    const std::vector<ContractRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const ContractRecord& operator[](std::size_t i) const { return records_[i]; }

    std::size_t count(Label label) const noexcept { return label_counts_[static_cast<int>(label)]; }

    /// Digest of every record's bytecode mapped to the first record index
    /// carrying it.
    const std::map<Digest, std::size_t>& dedup_index() const noexcept { return dedup_index_; }

    /// Records whose index passes the predicate, order preserved.
    template <typename Pred>
    Corpus filter(Pred pred) const
    {
        std::vector<ContractRecord> kept;
        for (std::size_t i = 0; i < records_.size(); ++i)
            if (pred(i, records_[i]))
                kept.push_back(records_[i]);
        return Corpus{std::move(kept)};
    }

private:
    std::vector<ContractRecord> records_;
    std::array<std::size_t, 2> label_counts_{};
    std::map<Digest, std::size_t> dedup_index_;
};

/// Loads JSON-Lines (keys address, bytecode, label, deployed_month, source),
/// or CSV with the same columns when the extension is .csv.
Corpus load_corpus(const std::filesystem::path& path);

/// Writes the JSON-Lines form read by load_corpus.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct DedupResult
{
    Corpus corpus;
    std::size_t removed = 0;
};

/// Keeps one record per bit-identical bytecode: the earliest deployed month
/// wins (records without a month sort last), then the lexicographically
/// smallest address. Kept records stay in input order.
DedupResult dedup_exact(const Corpus& corpus);

struct MonthlyCount
{
    YearMonth month;
    std::size_t phishing = 0;
    std::size_t benign = 0;
};

struct UsageShare
{
    std::string mnemonic;
    Label label;
    std::size_t record_index;
    double share;
};

struct CorpusReport
{
    /// Contiguous months from the earliest to the latest dated record.
    std::vector<MonthlyCount> monthly;
    /// Records without a deployment month.
    std::size_t undated = 0;
    /// Per-contract usage share of each requested mnemonic.
    std::vector<UsageShare> usage;

    void write_monthly_csv(const std::filesystem::path& path) const;
    void write_usage_csv(const std::filesystem::path& path) const;
    /// Binned usage-share histogram per (mnemonic, label), `bins` equal
    /// bins over [0, 1].
    void write_usage_histogram_csv(const std::filesystem::path& path, int bins = 20) const;
};

/// Throws EmptyInputError on an empty corpus.
CorpusReport corpus_report(const Corpus& corpus, const std::vector<std::string>& mnemonics,
                           const OpcodeTable& table = OpcodeTable::shanghai());
}  // namespace phishhook
