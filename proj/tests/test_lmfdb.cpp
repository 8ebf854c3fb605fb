#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "galorb/lmfdb.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace galorb;
using namespace galorb::lmfdb;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("galorb_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

ClientOptions fixture_options() {
    ClientOptions o;
    o.fixture_dir = fs::path(GALORB_FIXTURE_DIR);
    o.cache_dir = std::nullopt;
    o.offline = true;
    return o;
}

const char* kSpace = R"({"data": [
  {"label": "81.4.b.a", "level": 81, "weight": 4, "char_orbit_label": "b", "char_order": 2, "is_cm": true, "dim": 2},
  {"label": "81.4.b.b", "level": 81, "weight": 4, "char_orbit_label": "b", "char_order": 2, "is_cm": false, "dim": 6}
], "next": null, "timestamp": "volatile"})";

// serves kSpace after `failures` throttled replies
struct MockServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> hits{0};
    std::atomic<int> failures{0};
    std::string body = kSpace;
    int status_on_failure = 429;

    MockServer() {
        server.Get("/api/mf_newforms/", [this](const httplib::Request&, httplib::Response& res) {
            ++hits;
            if (failures > 0) {
                --failures;
                res.status = status_on_failure;
                return;
            }
            res.set_content(body, "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~MockServer() {
        server.stop();
        thread.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

ClientOptions live_options(const MockServer& m, const fs::path& cache) {
    ClientOptions o;
    o.cache_dir = cache;
    o.offline = false;
    o.base_url = m.url();
    o.min_interval = std::chrono::milliseconds(1);
    o.backoff_base = std::chrono::milliseconds(5);
    o.max_retries = 3;
    o.timeout = std::chrono::seconds(5);
    return o;
}

}  // namespace

TEST_CASE("label parsing") {
    auto l = parse_label("27.35.b.d");
    CHECK(l.level == 27);
    CHECK(l.weight == 35);
    CHECK(l.char_orbit == "b");
    CHECK(l.isogeny == "d");
    CHECK(parse_label("243.7.b.aa").isogeny == "aa");
    for (const char* bad : {"27.35.b", "27.x.b.d", "27.35.B.d", "", "27.35.b.d.e"})
        CHECK_THROWS_AS(parse_label(bad), SchemaError);
}

TEST_CASE("fixture spaces") {
    Client c(fixture_options());
    auto r27 = c.fetch(27, 35, 2);
    CHECK(r27.source == Source::Fixture);
    CHECK(r27.records.size() == 4);
    CHECK(ncm_count(r27.records) == 3);
    auto r243 = c.fetch_newforms(243, 7, 2);
    CHECK(ncm_count(r243) == 8);
    CHECK(ncm_count(c.fetch_newforms(125, 10, 2)) == 3);
    CHECK(ncm_count(c.fetch_newforms(343, 3, 2)) == 3);
    for (auto [N, k] : std::vector<std::pair<int, int>>{{27, 35}, {125, 10}, {125, 12}, {343, 3}, {343, 5}, {243, 7}}) {
        auto recs = c.fetch_newforms(N, k, 2);
        CHECK(ncm_count(recs) <= static_cast<i64>(recs.size()));
        for (auto& r : recs) {
            CHECK(r.char_order == 2);
            CHECK(r.level == N);
        }
    }
    auto d = std::find_if(r27.records.begin(), r27.records.end(), [](auto& r) { return r.label == "27.35.b.d"; });
    REQUIRE(d != r27.records.end());
    REQUIRE(d->pseudo_eigenvalues.size() == 1);
    CHECK(d->pseudo_eigenvalues[0].values == std::vector<std::string>{"1", "-1"});
}

TEST_CASE("missing data offline is an unavailability error") {
    Client c(fixture_options());
    CHECK_THROWS_AS(c.fetch(29, 2, 2), UnavailableError);
}

TEST_CASE("descriptor builds the pinned query") {
    auto d = InterfaceDescriptor::load(fs::path(GALORB_FIXTURE_DIR) / "v1" / "interface.json");
    CHECK(d.query(27, 35, 2).find("level=i27&weight=i35&char_order=i2") == 0);
    CHECK(d.fields.at("is_cm") == "is_cm");
}

TEST_CASE("schema errors keep the payload") {
    auto d = InterfaceDescriptor::builtin();
    const std::string not_json = "<html>busy</html>";
    try {
        parse_records(not_json, d);
        FAIL("expected a schema error");
    } catch (const SchemaError& e) {
        CHECK(e.raw_payload == not_json);
    }
    CHECK_THROWS_AS(parse_records(R"({"rows": []})", d), SchemaError);
    CHECK_THROWS_AS(parse_records(R"({"data": [{"label": "27.35.b.a"}]})", d), SchemaError);
    CHECK_THROWS_AS(parse_records(
                        R"({"data": [{"label": "27.35.b.a", "level": 28, "weight": 35, "char_orbit_label": "b", "char_order": 2, "is_cm": false}]})",
                        d),
                    SchemaError);
    CHECK_THROWS_AS(parse_records(
                        R"({"data": [{"label": "27.35.b.a", "level": 27, "weight": 35, "char_orbit_label": "b", "char_order": 2, "is_cm": "no"}]})",
                        d),
                    SchemaError);
    auto ok = parse_records(kSpace, d);
    CHECK(ok.size() == 2);
    CHECK(ok[1].dim == 6);
}

TEST_CASE("live fetch, cache round trip and backoff") {
    auto cache = fresh_dir("cache");
    std::vector<NewformRecord> first;
    {
        MockServer m;
        m.failures = 2;
        Client c(live_options(m, cache));
        auto r = c.fetch(81, 4, 2);
        CHECK(r.source == Source::Live);
        CHECK(m.hits == 3);
        CHECK(c.live_requests() == 3);
        first = r.records;
        CHECK(ncm_count(first) == 1);
    }
    auto key_file = cache / "v1" / "mf_newforms_L81_k4_o2.json";
    REQUIRE(fs::exists(key_file));
    std::ifstream in(key_file);
    std::string cached((std::istreambuf_iterator<char>(in)), {});
    CHECK(cached.find("timestamp") == std::string::npos);

    ClientOptions off;
    off.cache_dir = cache;
    off.offline = true;
    Client again(off);
    auto r = again.fetch(81, 4, 2);
    CHECK(r.source == Source::Cache);
    CHECK(r.records == first);
}

TEST_CASE("server errors exhaust retries") {
    auto cache = fresh_dir("errors");
    MockServer m;
    m.failures = 100;
    m.status_on_failure = 503;
    Client c(live_options(m, cache));
    CHECK_THROWS_AS(c.fetch(81, 4, 2), UnavailableError);
    CHECK(m.hits == 4);
}

TEST_CASE("malformed live response is a schema error") {
    auto cache = fresh_dir("schema");
    MockServer m;
    m.body = R"({"data": 5})";
    Client c(live_options(m, cache));
    try {
        c.fetch(81, 4, 2);
        FAIL("expected a schema error");
    } catch (const SchemaError& e) {
        CHECK(e.raw_payload == m.body);
    }
    CHECK_FALSE(fs::exists(cache / "v1" / "mf_newforms_L81_k4_o2.json"));
}

TEST_CASE("unreachable host") {
    ClientOptions o;
    o.offline = false;
    o.base_url = "http://127.0.0.1:1";
    o.max_retries = 1;
    o.backoff_base = std::chrono::milliseconds(1);
    o.min_interval = std::chrono::milliseconds(1);
    o.timeout = std::chrono::seconds(1);
    Client c(o);
    CHECK_THROWS_AS(c.fetch(81, 4, 2), UnavailableError);
}

TEST_CASE("cache entries are never silently replaced") {
    auto cache = fresh_dir("conflict");
    {
        MockServer m;
        Client c(live_options(m, cache));
        c.fetch(81, 4, 2);
    }
    // a differing response for the same key, forced past the cache by editing it
    auto file = cache / "v1" / "mf_newforms_L81_k4_o2.json";
    std::string original;
    {
        std::ifstream in(file);
        original.assign((std::istreambuf_iterator<char>(in)), {});
    }
    {
        std::ofstream out(file, std::ios::app);
        out << " ";
    }
    MockServer m;
    Client c(live_options(m, cache));
    auto r = c.fetch(81, 4, 2);  // hash mismatch: the corrupted entry is bypassed
    CHECK(r.source == Source::Live);
    CHECK_FALSE(r.warnings.empty());
    std::size_t siblings = 0;
    for (auto& e : fs::directory_iterator(cache / "v1"))
        if (e.path().extension() == ".json") ++siblings;
    CHECK(siblings == 2);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("comparisons against fixtures") {
    Client c(fixture_options());
    auto rows = compare(c, fixture_requests(), AsymPolicy::Computed, 0, true);
    REQUIRE(rows.size() == 6);
    for (auto& r : rows) {
        CAPTURE(r.N);
        CHECK(r.verdict == BoundVerdict::HoldsStrict);
        CHECK(r.lo.has_value());
    }
    CHECK(rows[0].lo == 2);
    CHECK(rows[0].ncm == 3);
    CHECK(rows[0].total_orbits == 4);
    CHECK(rows[5].N == 243);
    CHECK(rows[5].ncm == 8);
    CHECK(*rows[5].lo <= 6);
    CHECK(rows[5].observed_symmetric >= 2);
    CHECK(rows[5].lo_upper_from_data == 6);
    CHECK(*rows[5].s_sym >= 2);

    auto table = compare_one(c, {243, 7, {}}, AsymPolicy::Table, 0, true);
    CHECK_FALSE(table.lo.has_value());
    CHECK(table.verdict == BoundVerdict::HoldsStrict);
    CHECK_THROWS_AS(compare_one(c, {15, 4, {}}, AsymPolicy::Computed, 0, true), HypothesisError);
}

TEST_CASE("bound verdicts") {
    CHECK(bound_verdict(2, 3) == BoundVerdict::HoldsStrict);
    CHECK(bound_verdict(3, 3) == BoundVerdict::HoldsEqual);
    CHECK(bound_verdict(4, 3) == BoundVerdict::Violation);
    CHECK(bound_verdict(std::nullopt, 3) == BoundVerdict::Unknown);
}
