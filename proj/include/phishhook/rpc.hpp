// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace phishhook
{
/// Posts one JSON-RPC request body and returns the raw response body.
/// Implementations throw TransportError for retryable failures.
class Transport
{
public:
    virtual ~Transport() = default;
    virtual std::string post(const std::string& body) = 0;
};

/// HTTP(S) POST transport over cpp-httplib. `endpoint` is a full URL such
/// as https://host:port/path.
std::shared_ptr<Transport> make_http_transport(const std::string& endpoint, std::chrono::seconds timeout);

struct RpcOptions
{
    std::string endpoint;
    /// Empty disables the on-disk cache.
    std::filesystem::path cache_dir;
    double requests_per_second = 5.0;
    int max_attempts = 5;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::seconds timeout{30};
    /// Sleep hook for backoff and rate limiting; defaults to this_thread::sleep_for.
    std::function<void(std::chrono::nanoseconds)> sleep;
};

struct FetchResult
{
    /// 0x-prefixed lowercase hex; "0x" for accounts without code.
    std::string bytecode;
    bool from_cache = false;
    /// Set when the node returned "0x" (externally owned account).
    bool empty_account = false;
};

/// JSON-RPC 2.0 request body for eth_getCode.
std::string eth_get_code_request(const std::string& address, const std::string& block_tag, long id);

/// eth_getCode client with rate limiting, retry with exponential backoff,
/// and an on-disk cache keyed by (address, block tag). Safe for concurrent use.
class RpcClient
{
public:
    explicit RpcClient(RpcOptions options, std::shared_ptr<Transport> transport = nullptr);

    FetchResult fetch_bytecode(const std::string& address, const std::string& block_tag = "latest");

    /// Requests that reached the transport, including failed attempts.
    std::size_t network_requests() const noexcept { return requests_.load(); }

    std::filesystem::path cache_path(const std::string& address, const std::string& block_tag) const;

private:
    std::string call_with_retry(const std::string& body);
    void throttle();
    std::mutex& key_mutex(const std::string& key);

    RpcOptions options_;
    std::shared_ptr<Transport> transport_;
    std::atomic<std::size_t> requests_{0};
    std::atomic<long> next_id_{1};

    std::mutex rate_mutex_;
    std::chrono::steady_clock::time_point next_slot_{};

    std::mutex keys_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> key_mutexes_;
};
}  // namespace phishhook
