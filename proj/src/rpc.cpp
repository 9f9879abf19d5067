// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/rpc.hpp"

#include "phishhook/corpus.hpp"
#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"
#include "phishhook/hex.hpp"

#include <httplib.h>
#include <json.hpp>

#include <fstream>
#include <sstream>
#include <thread>

namespace phishhook
{
namespace
{
class HttpTransport final : public Transport
{
public:
    HttpTransport(const std::string& endpoint, std::chrono::seconds timeout)
    {
        const auto scheme_end = endpoint.find("://");
        if (scheme_end == std::string::npos)
            throw ValidationError("endpoint must be an http(s) URL");
        const auto host_start = scheme_end + 3;
        const auto path_start = endpoint.find_first_of("/?", host_start);
        auto authority = endpoint.substr(host_start, path_start - host_start);
        std::string user;
        std::string password;
        if (const auto at = authority.rfind('@'); at != std::string::npos)
        {
            const auto userinfo = authority.substr(0, at);
            const auto colon = userinfo.find(':');
            user = userinfo.substr(0, colon);
            password = colon == std::string::npos ? "" : userinfo.substr(colon + 1);
            authority.erase(0, at + 1);
        }
        base_ = endpoint.substr(0, host_start) + authority;
        path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
        if (path_.front() == '?')
            path_.insert(0, "/");
        client_ = std::make_unique<httplib::Client>(base_);
        if (!client_->is_valid())
            throw ValidationError("unsupported endpoint: " + base_);
        if (!user.empty())
            client_->set_basic_auth(user, password);
        client_->set_connection_timeout(timeout);
        client_->set_read_timeout(timeout);
        client_->set_write_timeout(timeout);
    }

    std::string post(const std::string& body) override
    {
        std::lock_guard lock{mutex_};
        // Messages name only scheme://host; paths and queries often carry API keys.
        auto res = client_->Post(path_, body, "application/json");
        if (!res)
            throw TransportError("POST " + base_ + " failed: " + httplib::to_string(res.error()));
        if (res->status != 200)
            throw TransportError("POST " + base_ + " returned HTTP " + std::to_string(res->status));
        return res->body;
    }

private:
    std::string base_;
    std::string path_;
    std::mutex mutex_;
    std::unique_ptr<httplib::Client> client_;
};

std::string sanitize(std::string_view text)
{
    std::string out;
    for (const char c : text)
        out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}
}  // namespace

std::shared_ptr<Transport> make_http_transport(const std::string& endpoint, std::chrono::seconds timeout)
{
    return std::make_shared<HttpTransport>(endpoint, timeout);
}

std::string eth_get_code_request(const std::string& address, const std::string& block_tag, long id)
{
    nlohmann::ordered_json req;
    req["jsonrpc"] = "2.0";
    req["id"] = id;
    req["method"] = "eth_getCode";
    req["params"] = nlohmann::ordered_json::array({address, block_tag});
    return req.dump();
}

RpcClient::RpcClient(RpcOptions options, std::shared_ptr<Transport> transport)
  : options_(std::move(options)), transport_(std::move(transport))
{
    if (!options_.sleep)
        options_.sleep = [](std::chrono::nanoseconds d) { std::this_thread::sleep_for(d); };
    if (options_.max_attempts < 1)
        throw ValidationError("max_attempts must be at least 1");
    if (!transport_)
    {
        if (options_.endpoint.empty())
            throw ValidationError("no RPC endpoint configured (use --endpoint or ETH_RPC_URL)");
        transport_ = make_http_transport(options_.endpoint, options_.timeout);
    }
}

std::filesystem::path RpcClient::cache_path(const std::string& address, const std::string& block_tag) const
{
    return options_.cache_dir / (address + "_" + sanitize(block_tag) + ".json");
}

std::mutex& RpcClient::key_mutex(const std::string& key)
{
    std::lock_guard lock{keys_mutex_};
    auto& slot = key_mutexes_[key];
    if (!slot)
        slot = std::make_unique<std::mutex>();
    return *slot;
}

void RpcClient::throttle()
{
    if (options_.requests_per_second <= 0)
        return;
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / options_.requests_per_second));
    std::chrono::steady_clock::duration wait{};
    {
        std::lock_guard lock{rate_mutex_};
        const auto now = std::chrono::steady_clock::now();
        const auto slot = std::max(now, next_slot_);
        wait = slot - now;
        next_slot_ = slot + interval;
    }
    if (wait > std::chrono::steady_clock::duration::zero())
        options_.sleep(wait);
}

std::string RpcClient::call_with_retry(const std::string& body)
{
    auto backoff = std::chrono::duration_cast<std::chrono::nanoseconds>(options_.initial_backoff);
    std::string last_error;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt)
    {
        throttle();
        ++requests_;
        try
        {
            return transport_->post(body);
        }
        catch (const TransportError& e)
        {
            last_error = e.what();
        }
        if (attempt < options_.max_attempts)
        {
            options_.sleep(backoff);
            backoff *= 2;
        }
    }
    throw TransportError("giving up after " + std::to_string(options_.max_attempts) + " attempts: " + last_error);
}

FetchResult RpcClient::fetch_bytecode(const std::string& address, const std::string& block_tag)
{
    const auto addr = normalize_address(address);
    const bool cached = !options_.cache_dir.empty();
    const auto path = cached ? cache_path(addr, block_tag) : std::filesystem::path{};
    std::unique_lock<std::mutex> key_lock;
    if (cached)
    {
        key_lock = std::unique_lock{key_mutex(path.string())};
        std::ifstream in(path);
        if (in)
        {
            try
            {
                const auto entry = nlohmann::json::parse(in);
                FetchResult r;
                r.bytecode = entry.at("result").get<std::string>();
                r.from_cache = true;
                r.empty_account = r.bytecode == "0x";
                return r;
            }
            catch (const nlohmann::json::exception&)
            {
                // Unreadable entry; refetch and overwrite.
            }
        }
    }

    const auto response_text = call_with_retry(eth_get_code_request(addr, block_tag, next_id_++));
    nlohmann::json response;
    try
    {
        response = nlohmann::json::parse(response_text);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ParseError(std::string{"malformed JSON-RPC response: "} + e.what());
    }
    if (const auto err = response.find("error"); err != response.end() && !err->is_null())
        throw RemoteError(err->value("code", 0L), err->value("message", std::string{"(no message)"}));
    const auto result = response.find("result");
    if (result == response.end() || !result->is_string())
        throw ParseError("JSON-RPC response has no string result");

    FetchResult r;
    r.bytecode = result->get<std::string>();
    try
    {
        r.bytecode = to_hex_prefixed(from_hex(r.bytecode));
    }
    catch (const DecodeError& e)
    {
        throw ParseError(std::string{"eth_getCode result is not hex: "} + e.what());
    }
    r.empty_account = r.bytecode == "0x";

    if (cached)
    {
        nlohmann::ordered_json entry;
        entry["address"] = addr;
        entry["block_tag"] = block_tag;
        entry["result"] = r.bytecode;
        auto tmp = path;
        tmp += ".tmp";
        {
            auto out = csv::open_output(tmp);
            out << entry.dump() << '\n';
            if (!out.flush())
                throw IoError("cache write failed: " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }
    return r;
}
}  // namespace phishhook
