// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/corpus.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"

#include <json.hpp>
#include <openssl/sha.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>

namespace phishhook
{
std::string_view to_string(Label label) noexcept
{
    return label == Label::phishing ? "phishing" : "benign";
}

Label parse_label(std::string_view text)
{
    if (text == "phishing")
        return Label::phishing;
    if (text == "benign")
        return Label::benign;
    throw ValidationError("unknown label '" + std::string{text} + "' (expected phishing or benign)");
}

YearMonth YearMonth::parse(std::string_view text)
{
    YearMonth ym;
    if (text.size() != 7 || text[4] != '-')
        throw ValidationError("bad year-month '" + std::string{text} + "' (expected YYYY-MM)");
    const auto y = std::from_chars(text.data(), text.data() + 4, ym.year);
    const auto m = std::from_chars(text.data() + 5, text.data() + 7, ym.month);
    if (y.ec != std::errc{} || y.ptr != text.data() + 4 || m.ec != std::errc{} || m.ptr != text.data() + 7 ||
        ym.month < 1 || ym.month > 12)
        throw ValidationError("bad year-month '" + std::string{text} + "' (expected YYYY-MM)");
    return ym;
}

std::string YearMonth::str() const
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::next() const noexcept
{
    return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
}

Digest bytecode_digest(BytesView bytecode)
{
    Digest d{};
    SHA256(bytecode.data(), bytecode.size(), d.data());
    return d;
}

std::string digest_hex(const Digest& digest)
{
    return to_hex(digest);
}

std::string normalize_address(std::string_view address)
{
    const auto body = strip_hex_prefix(address);
    if (body.size() != 40 || address.size() != 42)
        throw ValidationError("malformed address '" + std::string{address} + "' (expected 0x + 40 hex digits)");
    try
    {
        return to_hex_prefixed(from_hex(body));
    }
    catch (const DecodeError&)
    {
        throw ValidationError("malformed address '" + std::string{address} + "'");
    }
}

Corpus::Corpus(std::vector<ContractRecord> records) : records_(std::move(records))
{
    for (std::size_t i = 0; i < records_.size(); ++i)
    {
        ++label_counts_[static_cast<int>(records_[i].label)];
        dedup_index_.try_emplace(bytecode_digest(records_[i].bytecode), i);
    }
}

namespace
{
ContractRecord make_record(std::string_view address, std::string_view bytecode, std::string_view label,
                           std::string_view month, std::string source)
{
    ContractRecord r;
    r.address = normalize_address(address);
    try
    {
        r.bytecode = from_hex(bytecode);
    }
    catch (const DecodeError& e)
    {
        throw ValidationError(std::string{"bytecode: "} + e.what());
    }
    r.label = parse_label(label);
    if (!month.empty())
        r.deployed_month = YearMonth::parse(month);
    r.source = std::move(source);
    return r;
}

Corpus load_jsonl(const std::filesystem::path& path)
{
    auto in = csv::open_input(path);
    std::vector<ContractRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
        try
        {
            const auto obj = nlohmann::json::parse(line);
            if (!obj.is_object())
                throw ParseError("expected a JSON object");
            auto str = [&](const char* key, bool required) -> std::string {
                const auto it = obj.find(key);
                if (it == obj.end() || it->is_null())
                {
                    if (required)
                        throw ParseError(std::string{"missing key '"} + key + "'");
                    return {};
                }
                if (!it->is_string())
                    throw ParseError(std::string{"key '"} + key + "' must be a string");
                return it->get<std::string>();
            };
            records.push_back(make_record(str("address", true), str("bytecode", true), str("label", true),
                                          str("deployed_month", false), str("source", false)));
        }
        catch (const nlohmann::json::exception& e)
        {
            throw ParseError(where + e.what());
        }
        catch (const ValidationError& e)
        {
            throw ValidationError(where + e.what());
        }
        catch (const ParseError& e)
        {
            throw ParseError(where + e.what());
        }
    }
    return Corpus{std::move(records)};
}

Corpus load_csv(const std::filesystem::path& path)
{
    const auto table = csv::read_table(path);
    std::vector<ContractRecord> records;
    if (table.header.empty())
        return Corpus{};
    const auto address = table.column("address");
    const auto bytecode = table.column("bytecode");
    const auto label = table.column("label");
    std::optional<std::size_t> month, source;
    try
    {
        month = table.column("deployed_month");
    }
    catch (const ParseError&)
    {
    }
    try
    {
        source = table.column("source");
    }
    catch (const ParseError&)
    {
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i)
    {
        const auto& row = table.rows[i];
        try
        {
            records.push_back(make_record(row[address], row[bytecode], row[label], month ? row[*month] : "",
                                          source ? row[*source] : ""));
        }
        catch (const ValidationError& e)
        {
            throw ValidationError(path.string() + ":" + std::to_string(table.line_numbers[i]) + ": " + e.what());
        }
    }
    return Corpus{std::move(records)};
}
}  // namespace

Corpus load_corpus(const std::filesystem::path& path)
{
    if (path.extension() == ".csv")
        return load_csv(path);
    return load_jsonl(path);
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path)
{
    auto out = csv::open_output(path);
    for (const auto& r : corpus.records())
    {
        nlohmann::ordered_json obj;
        obj["address"] = r.address;
        obj["bytecode"] = to_hex_prefixed(r.bytecode);
        obj["label"] = to_string(r.label);
        obj["deployed_month"] = r.deployed_month ? nlohmann::ordered_json(r.deployed_month->str()) : nullptr;
        obj["source"] = r.source;
        out << obj.dump() << '\n';
    }
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

DedupResult dedup_exact(const Corpus& corpus)
{
    const auto& records = corpus.records();
    std::map<Digest, std::size_t> best;
    auto better = [&](std::size_t a, std::size_t b) {
        const auto& ra = records[a];
        const auto& rb = records[b];
        if (ra.deployed_month != rb.deployed_month)
        {
            if (!ra.deployed_month)
                return false;
            if (!rb.deployed_month)
                return true;
            return *ra.deployed_month < *rb.deployed_month;
        }
        if (ra.address != rb.address)
            return ra.address < rb.address;
        return a < b;
    };
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        const auto d = bytecode_digest(records[i].bytecode);
        auto [it, inserted] = best.try_emplace(d, i);
        if (!inserted && better(i, it->second))
            it->second = i;
    }
    std::vector<bool> keep(records.size(), false);
    for (const auto& [d, i] : best)
        keep[i] = true;
    DedupResult result;
    result.corpus = corpus.filter([&](std::size_t i, const ContractRecord&) { return keep[i]; });
    result.removed = records.size() - result.corpus.size();
    return result;
}

CorpusReport corpus_report(const Corpus& corpus, const std::vector<std::string>& mnemonics, const OpcodeTable& table)
{
    if (corpus.empty())
        throw EmptyInputError("corpus report needs at least one record");
    CorpusReport report;

    std::optional<YearMonth> lo, hi;
    for (const auto& r : corpus.records())
    {
        if (!r.deployed_month)
            continue;
        if (!lo || *r.deployed_month < *lo)
            lo = r.deployed_month;
        if (!hi || *hi < *r.deployed_month)
            hi = r.deployed_month;
    }
    if (lo)
    {
        for (auto m = *lo; m <= *hi; m = m.next())
            report.monthly.push_back({m, 0, 0});
    }
    for (const auto& r : corpus.records())
    {
        if (!r.deployed_month)
        {
            ++report.undated;
            continue;
        }
        auto& bucket = report.monthly[static_cast<std::size_t>(r.deployed_month->index() - lo->index())];
        (r.label == Label::phishing ? bucket.phishing : bucket.benign) += 1;
    }

    std::vector<std::uint8_t> codes;
    for (const auto& m : mnemonics)
    {
        const auto code = table.code_of(m);
        if (!code)
            throw ValidationError("unknown mnemonic '" + m + "'");
        codes.push_back(*code);
    }
    for (std::size_t i = 0; i < corpus.size(); ++i)
    {
        const auto& r = corpus[i];
        const auto counts = count_opcodes(r.bytecode, table);
        std::uint64_t total = 0;
        for (const auto c : counts)
            total += c;
        for (std::size_t j = 0; j < codes.size(); ++j)
        {
            const double share = total ? static_cast<double>(counts[codes[j]]) / static_cast<double>(total) : 0.0;
            report.usage.push_back({mnemonics[j], r.label, i, share});
        }
    }
    return report;
}

void CorpusReport::write_monthly_csv(const std::filesystem::path& path) const
{
    auto out = csv::open_output(path);
    out << "month,phishing,benign,total\n";
    for (const auto& m : monthly)
        out << m.month.str() << ',' << m.phishing << ',' << m.benign << ',' << (m.phishing + m.benign) << '\n';
    if (undated)
        out << "undated,,," << undated << '\n';
}

void CorpusReport::write_usage_csv(const std::filesystem::path& path) const
{
    auto out = csv::open_output(path);
    out << "mnemonic,label,record_index,usage_share\n";
    for (const auto& u : usage)
        out << u.mnemonic << ',' << to_string(u.label) << ',' << u.record_index << ','
            << csv::format_double(u.share) << '\n';
}

void CorpusReport::write_usage_histogram_csv(const std::filesystem::path& path, int bins) const
{
    if (bins < 1)
        throw ValidationError("histogram needs at least one bin");
    std::map<std::pair<std::string, int>, std::vector<std::size_t>> hist;
    for (const auto& u : usage)
    {
        auto& h = hist[{u.mnemonic, static_cast<int>(u.label)}];
        h.resize(static_cast<std::size_t>(bins));
        auto b = static_cast<int>(u.share * bins);
        ++h[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
    }
    auto out = csv::open_output(path);
    out << "mnemonic,label,bin_lo,bin_hi,count\n";
    for (const auto& [key, h] : hist)
        for (int b = 0; b < bins; ++b)
            out << key.first << ',' << to_string(static_cast<Label>(key.second)) << ','
                << csv::format_double(static_cast<double>(b) / bins) << ','
                << csv::format_double(static_cast<double>(b + 1) / bins) << ',' << h[static_cast<std::size_t>(b)]
                << '\n';
}
}  // namespace phishhook
