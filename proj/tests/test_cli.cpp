#include "doctest.h"

#include "ringledger/cli.hpp"

#include "json.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = ringledger::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE_MESSAGE(f.good(), "missing file: ", p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    f << content;
}

// Runs the enclosed test body inside a fresh temp directory.
struct TempDir {
    fs::path old = fs::current_path();
    fs::path dir;

    TempDir() {
        static std::atomic<int> counter{0};
        dir = fs::temp_directory_path() /
              ("ringledger_cli_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter.fetch_add(1)));
        fs::create_directories(dir);
        fs::current_path(dir);
    }
    ~TempDir() {
        fs::current_path(old);
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

const char* kScenarios[] = {
    "stealth_flow", "cn_ring_flow", "tumbler_process",
    "tumbler_refuse", "tumbler_delay", "tumbler_pertx",
};

CliResult run_scenario(const std::string& name) {
    return run_cli({"scenario", std::string(RL_SCENARIO_DIR) + "/" + name + ".scn",
                    "--ledger", "scenario.jsonl", "--profile", "toy-large"});
}

}  // namespace

TEST_CASE("keygen is deterministic per seed") {
    TempDir td;
    auto a = run_cli({"keygen", "--wallet", "a.wallet", "--seed", "7", "--profile", "toy-large"});
    auto b = run_cli({"keygen", "--wallet", "b.wallet", "--seed", "7", "--profile", "toy-large"});
    auto c = run_cli({"keygen", "--wallet", "c.wallet", "--seed", "8", "--profile", "toy-large"});
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(slurp("a.wallet") == slurp("b.wallet"));
    CHECK(slurp("a.wallet") != slurp("c.wallet"));

    auto strip_name = [](std::string s) {
        auto pos = s.find("wallet:");
        return s.substr(0, pos);
    };
    CHECK(strip_name(a.out) == strip_name(b.out));
    CHECK(strip_name(a.out) != strip_name(c.out));
}

TEST_CASE("exit codes separate usage, domain errors, and success") {
    TempDir td;

    SUBCASE("no subcommand is a usage error") {
        auto r = run_cli({});
        CHECK(r.code == 2);
        CHECK(r.err.find("error: usage:") == 0);
        CHECK(r.out.empty());
    }
    SUBCASE("unknown flag is a usage error") {
        auto r = run_cli({"keygen", "--wallet", "w", "--bogus"});
        CHECK(r.code == 2);
        CHECK(r.err.find("error: usage:") == 0);
    }
    SUBCASE("unknown profile is a usage error") {
        auto r = run_cli({"keygen", "--wallet", "w", "--profile", "huge"});
        CHECK(r.code == 2);
        CHECK(r.err.find("unknown profile") != std::string::npos);
    }
    SUBCASE("missing ledger file is a domain error") {
        run_cli({"keygen", "--wallet", "w.wallet", "--seed", "1"});
        auto r = run_cli({"stealth", "scan", "--ledger", "missing.jsonl",
                          "--wallet", "w.wallet"});
        CHECK(r.code == 1);
        CHECK(r.err.find("error: io-error") == 0);
    }
    SUBCASE("missing address file is a domain error") {
        auto r = run_cli({"stealth", "import", "--address", "missing.addr"});
        CHECK(r.code == 1);
        CHECK(r.err.find("error: io-error") == 0);
    }
    SUBCASE("help exits zero") {
        auto r = run_cli({"--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("privacy-ledger toolkit") != std::string::npos);
        CHECK(r.err.empty());
    }
}

TEST_CASE("json output is machine readable") {
    TempDir td;
    auto kg = run_cli({"keygen", "--wallet", "w.wallet", "--seed", "3",
                       "--profile", "toy-large", "--json"});
    REQUIRE(kg.code == 0);
    ojson j = ojson::parse(kg.out);
    CHECK(j.at("profile") == "toy-large");
    CHECK(j.at("scan_public").is_string());
    CHECK(j.at("spend_public").is_string());

    run_cli({"stealth", "export", "--wallet", "w.wallet", "--out", "w.addr", "--seed", "4"});
    auto send = run_cli({"stealth", "send", "--wallet", "w.wallet", "--address", "w.addr",
                         "--scheme", "dualkey", "--seed", "5", "--json"});
    REQUIRE(send.code == 0);
    ojson js = ojson::parse(send.out);
    CHECK(js.at("scheme") == "dualkey");
    CHECK(js.at("output_public").is_string());
    CHECK(js.at("sender_nonce").is_string());

    run_cli({"mint", "--ledger", "l.jsonl", "--wallet", "w.wallet", "--denom", "5",
             "--count", "2", "--seed", "6", "--profile", "toy-large"});
    auto scan = run_cli({"stealth", "scan", "--ledger", "l.jsonl", "--wallet", "w.wallet",
                         "--json"});
    REQUIRE(scan.code == 0);
    ojson jo = ojson::parse(scan.out);
    REQUIRE(jo.at("owned").size() == 2);
    CHECK(jo.at("owned")[0].at("denomination") == 5);
    CHECK(jo.at("owned")[0].at("spent") == false);
}

TEST_CASE("double withdraw is rejected on the error channel") {
    TempDir td;
    run_cli({"keygen", "--wallet", "a.wallet", "--seed", "1", "--profile", "toy-large"});
    run_cli({"keygen", "--wallet", "b.wallet", "--seed", "2", "--profile", "toy-large"});
    run_cli({"stealth", "export", "--wallet", "a.wallet", "--out", "a.addr", "--seed", "3"});
    run_cli({"stealth", "export", "--wallet", "b.wallet", "--out", "b.addr", "--seed", "4"});
    run_cli({"mint", "--ledger", "l.jsonl", "--wallet", "a.wallet", "--denom", "5",
             "--count", "2", "--seed", "5", "--profile", "toy-large"});
    auto tn = run_cli({"tumbler", "new", "--ledger", "l.jsonl", "--denom", "5",
                       "--ring-size", "2", "--policy", "process"});
    REQUIRE(tn.code == 0);
    auto dep = run_cli({"tumbler", "deposit", "--ledger", "l.jsonl", "--contract", "@last",
                        "--wallet", "a.wallet", "--to", "b.addr", "--seed", "6"});
    REQUIRE(dep.code == 0);
    auto w1 = run_cli({"tumbler", "withdraw", "--ledger", "l.jsonl", "--contract", "@last",
                       "--wallet", "b.wallet", "--from", "a.addr", "--seed", "7"});
    CHECK(w1.code == 0);
    CHECK(w1.out.find("status: executed") != std::string::npos);
    auto w2 = run_cli({"tumbler", "withdraw", "--ledger", "l.jsonl", "--contract", "@last",
                       "--wallet", "b.wallet", "--from", "a.addr", "--seed", "8"});
    CHECK(w2.code == 1);
    CHECK(w2.err.find("error: double-withdraw") == 0);
    CHECK(w2.out.empty());
}

TEST_CASE("tampered address file is rejected") {
    TempDir td;
    run_cli({"keygen", "--wallet", "w.wallet", "--seed", "9", "--profile", "toy-large"});
    run_cli({"stealth", "export", "--wallet", "w.wallet", "--out", "w.addr", "--seed", "10"});
    REQUIRE(run_cli({"stealth", "import", "--address", "w.addr"}).code == 0);

    std::string addr = slurp("w.addr");
    auto pos = addr.find("spend_public=");
    REQUIRE(pos != std::string::npos);
    char& digit = addr[pos + std::string("spend_public=").size() + 3];
    digit = digit == '0' ? '1' : '0';
    spit("w.addr", addr);

    auto r = run_cli({"stealth", "import", "--address", "w.addr"});
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") == 0);
}

TEST_CASE("scenario transcripts match the recorded goldens") {
    for (const char* name : kScenarios) {
        CAPTURE(name);
        TempDir td;
        auto r = run_scenario(name);
        CHECK(r.code == 0);
        CHECK(r.err.empty());
        CHECK(r.out == slurp(std::string(RL_GOLDEN_DIR) + "/" + name + ".golden"));
    }
}

TEST_CASE("demo transcripts match the recorded goldens") {
    auto check_demo = [](const std::vector<std::string>& args, const std::string& golden) {
        auto r = run_cli(args);
        CHECK(r.code == 0);
        CHECK(r.err.empty());
        CHECK(r.out == slurp(std::string(RL_GOLDEN_DIR) + "/" + golden));
    };
    check_demo({"demo", "sender-spend-attack", "--seed", "5"},
               "demo_sender_spend_attack.golden");
    check_demo({"demo", "permuted-ring", "--seed", "6"}, "demo_permuted_ring.golden");
    check_demo({"demo", "ordering", "--seed", "7", "--count", "100"},
               "demo_ordering.golden");
}

TEST_CASE("scenario reruns are bit identical") {
    std::string first, second;
    {
        TempDir td;
        first = run_scenario("tumbler_pertx").out;
    }
    {
        TempDir td;
        second = run_scenario("tumbler_pertx").out;
    }
    CHECK(first == second);
    CHECK(!first.empty());
}
