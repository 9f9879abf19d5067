// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli_common.hpp"

#include <phishhook/csv.hpp>
#include <phishhook/disasm.hpp>
#include <phishhook/error.hpp>
#include <phishhook/features.hpp>
#include <phishhook/hex.hpp>
#include <phishhook/parallel.hpp>
#include <phishhook/rpc.hpp>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <set>

namespace phishhook::cli
{
namespace
{
// ---------------------------------------------------------------------------
// fetch

struct FetchOptions
{
    CommonOptions common;
    std::string addresses;
    std::string endpoint;
    std::string cache_dir = ".phishhook-cache";
    std::string block_tag = "latest";
    std::string label;
    double rps = 5.0;
    int max_attempts = 5;
};

struct AddressRow
{
    std::string address;
    std::optional<Label> label;
    std::optional<YearMonth> month;
    std::string source;
};

std::vector<AddressRow> read_addresses(const std::filesystem::path& path)
{
    const auto table = csv::read_table(path);
    const auto find = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < table.header.size(); ++i)
            if (table.header[i] == name)
                return i;
        return std::nullopt;
    };
    const auto c_address = find("address");
    if (!c_address)
        throw ParseError(path.string() + ": missing 'address' column");
    const auto c_label = find("label");
    const auto c_month = find("deployed_month");
    const auto c_source = find("source");
    std::vector<AddressRow> rows;
    for (std::size_t i = 0; i < table.rows.size(); ++i)
    {
        const auto& r = table.rows[i];
        const auto cell = [&](std::optional<std::size_t> c) -> std::string {
            return c && *c < r.size() ? r[*c] : std::string{};
        };
        try
        {
            AddressRow row;
            row.address = normalize_address(cell(c_address));
            if (const auto l = cell(c_label); !l.empty())
                row.label = parse_label(l);
            if (const auto m = cell(c_month); !m.empty())
                row.month = YearMonth::parse(m);
            row.source = cell(c_source);
            rows.push_back(std::move(row));
        }
        catch (const Error& e)
        {
            e.rethrow_with_context(path.string() + ":" + std::to_string(table.line_numbers[i]) + ": ");
        }
    }
    return rows;
}

void run_fetch(CLI::App& sub, FetchOptions& o)
{
    if (o.endpoint.empty())
        if (const char* env = std::getenv("ETH_RPC_URL"))
            o.endpoint = env;
    if (o.endpoint.empty())
        throw ValidationError("no RPC endpoint: pass --endpoint or set ETH_RPC_URL");
    std::optional<Label> default_label;
    if (!o.label.empty())
        default_label = parse_label(o.label);
    const auto rows = read_addresses(o.addresses);

    RunContext run{sub, o.common};
    run.note("endpoint_host", endpoint_host(o.endpoint));
    RpcOptions rpc;
    rpc.endpoint = o.endpoint;
    rpc.cache_dir = o.cache_dir;
    rpc.requests_per_second = o.rps;
    rpc.max_attempts = o.max_attempts;
    RpcClient client{rpc};

    std::vector<FetchResult> results(rows.size());
    std::vector<std::string> failures(rows.size());
    parallel_for(rows.size(), resolved_workers(o.common.workers), [&](std::size_t i) {
        try
        {
            results[i] = client.fetch_bytecode(rows[i].address, o.block_tag);
        }
        catch (const Error& e)
        {
            failures[i] = std::string{e.kind()} + ": " + e.what();
        }
    });

    std::vector<ContractRecord> records;
    auto log = csv::open_output(run.file("fetch_log.csv"));
    log << "address,status,from_cache,bytes,detail\n";
    std::size_t failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const auto& row = rows[i];
        std::string status = "ok";
        std::size_t size = 0;
        if (!failures[i].empty())
        {
            status = "failed";
            ++failed;
        }
        else if (results[i].empty_account)
            status = "no-code";
        else
        {
            const auto label = row.label ? row.label : default_label;
            if (!label)
                throw ValidationError("address " + row.address + " has no label; add a label column or --label");
            auto bytes = from_hex(results[i].bytecode);
            size = bytes.size();
            records.push_back({row.address, std::move(bytes), *label, row.month,
                               row.source.empty() ? "eth_getCode@" + o.block_tag : row.source});
        }
        log << row.address << ',' << status << ',' << (results[i].from_cache ? "true" : "false") << ',' << size
            << ',' << csv::escape(failures[i]) << '\n';
    }
    save_corpus(Corpus{std::move(records)}, run.file("corpus.jsonl"));
    run.note("fetch", {{"requested", rows.size()},
                       {"failed", failed},
                       {"network_requests", client.network_requests()},
                       {"block_tag", o.block_tag}});
    std::cout << "fetched " << rows.size() - failed << "/" << rows.size() << " addresses into "
              << run.file("corpus.jsonl").string() << '\n';
    if (failed > 0)
        throw TransportError(std::to_string(failed) + " addresses failed; see " + run.file("fetch_log.csv").string());
}

// ---------------------------------------------------------------------------
// disasm

struct DisasmOptions
{
    CommonOptions common;
    std::string hex;
    std::string hex_file;
    std::string corpus;
    std::string table;
};

void run_disasm(CLI::App& sub, DisasmOptions& o)
{
    const auto table = o.table.empty() ? OpcodeTable::shanghai() : OpcodeTable::load(o.table);
    const int sources = !o.hex.empty() + !o.hex_file.empty() + !o.corpus.empty();
    if (sources != 1)
        throw ValidationError("give exactly one of --in, --in-file, --corpus");
    if (!o.corpus.empty())
    {
        RunContext run{sub, o.common};
        const auto corpus = load_corpus_noted(o.corpus, run, false);
        parallel_for(corpus.size(), resolved_workers(o.common.workers), [&](std::size_t i) {
            const auto& rec = corpus[i];
            write_disassembly_csv(disassemble(BytesView{rec.bytecode}, table),
                                  run.dir() / "disasm" / (rec.address + ".csv"));
        });
        std::cout << "disassembled " << corpus.size() << " contracts into " << (run.dir() / "disasm").string()
                  << '\n';
        return;
    }
    std::string text = o.hex;
    if (!o.hex_file.empty())
    {
        auto in = csv::open_input(o.hex_file);
        text.assign(std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{});
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
            text.pop_back();
    }
    write_disassembly_csv(disassemble(std::string_view{text}, table), std::cout);
}

// ---------------------------------------------------------------------------
// featurize

struct FeaturizeOptions
{
    CommonOptions common;
    std::string corpus;
    std::vector<std::string> kinds{"histogram"};
    std::string train_ids;
    std::size_t window = 6;
    std::size_t stride = 6;
};

void run_featurize(CLI::App& sub, FeaturizeOptions& o)
{
    RunContext run{sub, o.common};
    const auto corpus = load_corpus_noted(o.corpus, run, false);
    const auto workers = resolved_workers(o.common.workers);

    std::set<std::string> kinds(o.kinds.begin(), o.kinds.end());
    if (kinds.count("all"))
        kinds = {"histogram", "image-rgb", "image-freq", "tokens"};

    // Training rows for the vocabulary and lookups: the listed addresses, or
    // the whole corpus.
    std::vector<std::size_t> train;
    if (!o.train_ids.empty())
    {
        std::set<std::string> wanted;
        for (const auto& row : csv::read_table(o.train_ids).rows)
            if (!row.empty())
                wanted.insert(normalize_address(row.front()));
        for (std::size_t i = 0; i < corpus.size(); ++i)
            if (wanted.count(corpus[i].address))
                train.push_back(i);
        if (train.empty())
            throw EmptyInputError("no corpus record matches --train-ids");
    }
    else
        for (std::size_t i = 0; i < corpus.size(); ++i)
            train.push_back(i);
    run.note("training_rows", train.size());

    FeatureManifest manifest;
    std::vector<std::string> ids;
    for (const auto& r : corpus.records())
        ids.push_back(r.address);

    if (kinds.count("histogram"))
    {
        const auto samples = opcode_samples(corpus, workers);
        std::vector<OpcodeSample> train_samples;
        for (const auto i : train)
            train_samples.push_back(samples[i]);
        const auto vocab = build_histogram_vocab(std::span<const OpcodeSample>{train_samples});
        manifest.files.push_back(export_histograms(histogram_matrix(samples, vocab), run.file("histograms.csv")));
        run.note("vocabulary", vocab.mnemonics);
    }
    if (kinds.count("image-rgb"))
    {
        std::vector<ImageTensor> images(corpus.size());
        std::size_t truncated = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i)
        {
            auto enc = encode_rgb_image(BytesView{corpus[i].bytecode});
            truncated += enc.truncated;
            images[i] = std::move(enc.image);
        }
        manifest.files.push_back(export_images(images, ids, run.file("images_rgb")));
        run.note("image_rgb_truncated", truncated);
    }
    if (kinds.count("image-freq"))
    {
        std::vector<std::vector<Instruction>> streams(corpus.size());
        parallel_for(corpus.size(), workers,
                     [&](std::size_t i) { streams[i] = disassemble(BytesView{corpus[i].bytecode}); });
        std::vector<std::vector<Instruction>> train_streams;
        for (const auto i : train)
            train_streams.push_back(streams[i]);
        const auto lookup = FrequencyLookup::build(train_streams);
        std::vector<ImageTensor> images(corpus.size());
        std::size_t truncated = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i)
        {
            auto enc = encode_frequency_image(streams[i], lookup);
            truncated += enc.truncated;
            images[i] = std::move(enc.image);
        }
        manifest.files.push_back(export_images(images, ids, run.file("images_freq")));
        run.note("image_freq_truncated", truncated);
    }
    if (kinds.count("tokens"))
    {
        std::vector<Bytes> train_code;
        for (const auto i : train)
            train_code.push_back(corpus[i].bytecode);
        const auto vocab = BigramVocab::build(train_code, o.window, o.stride);
        std::vector<TokenSequence> seqs;
        for (const auto& r : corpus.records())
            seqs.push_back(tokenize_bigrams(BytesView{r.bytecode}, vocab));
        manifest.files.push_back(export_tokens(std::move(seqs), ids, vocab, run.file("tokens")));
        run.note("bigram_vocab_size", vocab.size());
    }
    for (const auto& k : kinds)
        if (k != "histogram" && k != "image-rgb" && k != "image-freq" && k != "tokens")
            throw ValidationError("unknown feature kind '" + k + "'");
    manifest.write(run.file("manifest.json"));
    std::cout << "wrote " << manifest.files.size() << " feature files to " << run.dir().string() << '\n';
}

// ---------------------------------------------------------------------------
// report

struct ReportOptions
{
    CommonOptions common;
    std::string corpus;
    std::vector<std::string> mnemonics{"GAS", "CALL", "SSTORE", "SELFDESTRUCT"};
    int bins = 20;
    bool dedup = false;
};

void run_report(CLI::App& sub, ReportOptions& o)
{
    RunContext run{sub, o.common};
    const auto corpus = load_corpus_noted(o.corpus, run, o.dedup);
    const auto report = corpus_report(corpus, o.mnemonics);
    report.write_monthly_csv(run.file("monthly.csv"));
    report.write_usage_csv(run.file("usage.csv"));
    report.write_usage_histogram_csv(run.file("usage_histogram.csv"), o.bins);
    const auto d = dedup_exact(corpus);
    run.note("report", {{"records", corpus.size()},
                        {"unique_bytecodes", d.corpus.size()},
                        {"duplicates", d.removed},
                        {"undated", report.undated}});
    std::cout << corpus.size() << " records, " << d.corpus.size() << " unique bytecodes, " << report.monthly.size()
              << " months\n";
}
}  // namespace

void register_data_commands(CLI::App& app, std::vector<std::pair<CLI::App*, Command>>& commands)
{
    {
        auto o = std::make_shared<FetchOptions>();
        auto* sub = app.add_subcommand("fetch", "Download deployed bytecode over JSON-RPC into a corpus");
        add_common_options(*sub, o->common);
        sub->add_option("--addresses", o->addresses, "CSV with address[,label,deployed_month,source]")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--endpoint", o->endpoint, "JSON-RPC URL (default $ETH_RPC_URL)");
        sub->add_option("--cache-dir", o->cache_dir, "Response cache directory")->capture_default_str();
        sub->add_option("--block-tag", o->block_tag, "Block tag for eth_getCode")->capture_default_str();
        sub->add_option("--label", o->label, "Label for rows without one (phishing|benign)");
        sub->add_option("--rps", o->rps, "Request rate limit")->capture_default_str();
        sub->add_option("--max-attempts", o->max_attempts, "Attempts per request")->capture_default_str();
        commands.emplace_back(sub, [sub, o] { run_fetch(*sub, *o); });
    }
    {
        auto o = std::make_shared<DisasmOptions>();
        auto* sub = app.add_subcommand("disasm", "Disassemble bytecode into offset/mnemonic/operand/gas rows");
        add_common_options(*sub, o->common);
        sub->add_option("--in", o->hex, "Hex bytecode (0x optional); prints CSV to stdout");
        sub->add_option("--in-file", o->hex_file, "File holding hex bytecode")->check(CLI::ExistingFile);
        sub->add_option("--corpus", o->corpus, "Corpus; writes one CSV per contract")->check(CLI::ExistingFile);
        sub->add_option("--table", o->table, "Alternative opcode table CSV")->check(CLI::ExistingFile);
        commands.emplace_back(sub, [sub, o] { run_disasm(*sub, *o); });
    }
    {
        auto o = std::make_shared<FeaturizeOptions>();
        auto* sub = app.add_subcommand("featurize", "Export histogram, image, and bigram-token features");
        add_common_options(*sub, o->common);
        sub->add_option("--corpus", o->corpus, "Corpus file")->required()->check(CLI::ExistingFile);
        sub->add_option("--kind", o->kinds, "histogram, image-rgb, image-freq, tokens, or all")
            ->capture_default_str();
        sub->add_option("--train-ids", o->train_ids, "Addresses (first column) forming the training split")
            ->check(CLI::ExistingFile);
        sub->add_option("--window", o->window, "Bigram window in hex characters")->capture_default_str();
        sub->add_option("--stride", o->stride, "Bigram stride in hex characters")->capture_default_str();
        commands.emplace_back(sub, [sub, o] { run_featurize(*sub, *o); });
    }
    {
        auto o = std::make_shared<ReportOptions>();
        auto* sub = app.add_subcommand("report", "Monthly counts, duplicate statistics, and opcode usage shares");
        add_common_options(*sub, o->common);
        sub->add_option("--corpus", o->corpus, "Corpus file")->required()->check(CLI::ExistingFile);
        sub->add_option("--mnemonics", o->mnemonics, "Mnemonics for usage-share tables")->capture_default_str();
        sub->add_option("--bins", o->bins, "Usage histogram bins")->capture_default_str();
        sub->add_flag("--dedup", o->dedup, "Drop bit-identical bytecode first");
        commands.emplace_back(sub, [sub, o] { run_report(*sub, *o); });
    }
}
}  // namespace phishhook::cli
