// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "support/tempdir.hpp"

#include <phishhook/error.hpp>
#include <phishhook/rpc.hpp>

#include <httplib.h>
#include <json.hpp>

#include <deque>
#include <thread>

using namespace phishhook;
using phishhook::testing::TempDir;

namespace
{
const std::string kAddress = "0x00000000000000000000000000000000000000aa";

/// Scripted responses; a string starting with "!" throws TransportError.
class FakeTransport : public Transport
{
public:
    explicit FakeTransport(std::deque<std::string> script) : script_(std::move(script)) {}

    std::string post(const std::string& body) override
    {
        bodies.push_back(body);
        auto next = script_.empty() ? std::string{"!exhausted"} : script_.front();
        if (!script_.empty())
            script_.pop_front();
        if (!next.empty() && next[0] == '!')
            throw TransportError(next.substr(1));
        return next;
    }

    std::vector<std::string> bodies;

private:
    std::deque<std::string> script_;
};

std::string ok(const std::string& code) { return R"({"jsonrpc":"2.0","id":1,"result":")" + code + "\"}"; }

RpcOptions options(const std::filesystem::path& cache, std::vector<std::chrono::nanoseconds>* sleeps)
{
    RpcOptions o;
    o.endpoint = "http://unused";
    o.cache_dir = cache;
    o.requests_per_second = 0;  // no throttling unless a test asks
    o.sleep = [sleeps](std::chrono::nanoseconds d) {
        if (sleeps)
            sleeps->push_back(d);
    };
    return o;
}
}  // namespace

TEST_SUITE("rpc")
{
    TEST_CASE("request body")
    {
        const auto j = nlohmann::json::parse(eth_get_code_request(kAddress, "latest", 7));
        CHECK(j["jsonrpc"] == "2.0");
        CHECK(j["method"] == "eth_getCode");
        CHECK(j["params"][0] == kAddress);
        CHECK(j["params"][1] == "latest");
        CHECK(j["id"] == 7);
    }

    TEST_CASE("fetch, cache hit, and empty account")
    {
        TempDir dir;
        auto fake = std::make_shared<FakeTransport>(std::deque<std::string>{ok("0x6080"), ok("0x")});
        RpcClient client{options(dir.path(), nullptr), fake};
        const auto first = client.fetch_bytecode(kAddress);
        CHECK(first.bytecode == "0x6080");
        CHECK_FALSE(first.from_cache);
        const auto second = client.fetch_bytecode(kAddress);
        CHECK(second.from_cache);
        CHECK(second.bytecode == "0x6080");
        CHECK(client.network_requests() == 1);
        CHECK(std::filesystem::exists(client.cache_path(kAddress, "latest")));

        const auto eoa = client.fetch_bytecode("0x00000000000000000000000000000000000000bb");
        CHECK(eoa.empty_account);
        CHECK(eoa.bytecode == "0x");
    }

    TEST_CASE("retries transport failures with doubling backoff")
    {
        std::vector<std::chrono::nanoseconds> sleeps;
        auto fake = std::make_shared<FakeTransport>(std::deque<std::string>{"!reset", "!timeout", ok("0x00")});
        RpcClient client{options({}, &sleeps), fake};
        CHECK(client.fetch_bytecode(kAddress).bytecode == "0x00");
        CHECK(client.network_requests() == 3);
        REQUIRE(sleeps.size() == 2);
        CHECK(sleeps[1] == 2 * sleeps[0]);
    }

    TEST_CASE("gives up after max attempts")
    {
        auto fake = std::make_shared<FakeTransport>(std::deque<std::string>{"!a", "!b", "!c"});
        auto o = options({}, nullptr);
        o.max_attempts = 3;
        RpcClient client{o, fake};
        CHECK_THROWS_AS(client.fetch_bytecode(kAddress), TransportError);
        CHECK(client.network_requests() == 3);
    }

    TEST_CASE("remote errors are not retried")
    {
        auto fake = std::make_shared<FakeTransport>(
            std::deque<std::string>{R"({"jsonrpc":"2.0","id":1,"error":{"code":-32602,"message":"bad params"}})"});
        RpcClient client{options({}, nullptr), fake};
        try
        {
            client.fetch_bytecode(kAddress);
            FAIL("expected RemoteError");
        }
        catch (const RemoteError& e)
        {
            CHECK(e.code() == -32602);
        }
        CHECK(client.network_requests() == 1);
    }

    TEST_CASE("malformed responses are parse errors")
    {
        auto fake = std::make_shared<FakeTransport>(std::deque<std::string>{"not json", R"({"result":42})"});
        RpcClient client{options({}, nullptr), fake};
        CHECK_THROWS_AS(client.fetch_bytecode(kAddress), ParseError);
        CHECK_THROWS_AS(client.fetch_bytecode(kAddress), ParseError);
    }

    TEST_CASE("rate limiting spaces requests")
    {
        std::vector<std::chrono::nanoseconds> sleeps;
        auto fake = std::make_shared<FakeTransport>(std::deque<std::string>{ok("0x01"), ok("0x02"), ok("0x03")});
        auto o = options({}, &sleeps);
        o.requests_per_second = 1000;
        RpcClient client{o, fake};
        const auto start = std::chrono::steady_clock::now();
        client.fetch_bytecode("0x0000000000000000000000000000000000000001");
        client.fetch_bytecode("0x0000000000000000000000000000000000000002");
        client.fetch_bytecode("0x0000000000000000000000000000000000000003");
        const auto elapsed = std::chrono::steady_clock::now() - start;
        std::chrono::nanoseconds total{0};
        for (const auto s : sleeps)
            total += s;
        // The sleep hook does not block, so requested waits plus real elapsed
        // time must cover the two 1 ms intervals.
        CHECK(total + elapsed >= std::chrono::microseconds{1990});
        CHECK(fake->bodies.size() == 3);
    }

    TEST_CASE("HTTP transport against a local server")
    {
        httplib::Server server;
        int hits = 0;
        std::string auth;
        std::string key;
        server.Post("/rpc", [&](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            auth = req.get_header_value("Authorization");
            key = req.get_param_value("key");
            const auto j = nlohmann::json::parse(req.body);
            if (hits == 1)
            {
                res.status = 503;
                return;
            }
            res.set_content(nlohmann::json{{"jsonrpc", "2.0"}, {"id", j["id"]}, {"result", "0x6001"}}.dump(),
                            "application/json");
        });
        const int port = server.bind_to_any_port("127.0.0.1");
        std::thread t{[&] { server.listen_after_bind(); }};
        server.wait_until_ready();

        auto o = options({}, nullptr);
        o.endpoint = "http://user:pw@127.0.0.1:" + std::to_string(port) + "/rpc?key=abc";
        RpcClient client{o};
        CHECK(client.fetch_bytecode(kAddress).bytecode == "0x6001");
        CHECK(hits == 2);
        CHECK(auth == "Basic dXNlcjpwdw==");
        CHECK(key == "abc");
        server.stop();
        t.join();
    }

    TEST_CASE("transport errors do not echo credentials or query strings")
    {
        auto transport = make_http_transport("http://user:pw@127.0.0.1:1/v2?key=SECRET", std::chrono::seconds{1});
        try
        {
            transport->post("{}");
            FAIL("expected a transport error");
        }
        catch (const TransportError& e)
        {
            const std::string msg = e.what();
            CHECK(msg.find("SECRET") == std::string::npos);
            CHECK(msg.find("pw") == std::string::npos);
            CHECK(msg.find("http://127.0.0.1:1") != std::string::npos);
        }
    }
}
