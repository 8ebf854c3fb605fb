#pragma once
// Newform orbit data from the LMFDB API: fixtures, on-disk cache, optional live queries.
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "galorb/pseudo_eigenvalues.hpp"

namespace galorb::lmfdb {

namespace fs = std::filesystem;

struct ObservedLambda {
    i64 p = 0;
    std::vector<std::string> values;  // "1", "-1", "i", "-i"
    bool operator==(const ObservedLambda&) const = default;
};

struct NewformRecord {
    std::string label;  // level.weight.charorbit.isogeny
    int level = 0;
    int weight = 0;
    std::string char_orbit_label;
    int char_order = 0;
    bool is_cm = false;
    std::optional<i64> dim;
    std::vector<ObservedLambda> pseudo_eigenvalues;
    bool operator==(const NewformRecord&) const = default;
};

struct LabelParts {
    int level = 0;
    int weight = 0;
    std::string char_orbit;
    std::string isogeny;
};
// throws SchemaError on malformed labels
LabelParts parse_label(const std::string& label);

struct UnavailableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
    SchemaError(const std::string& what, std::string raw) : std::runtime_error(what), raw_payload(std::move(raw)) {}
    std::string raw_payload;
};

// Pinned query shape and field names.
struct InterfaceDescriptor {
    int schema_version = 1;
    std::string base_url = "https://www.lmfdb.org";
    std::string endpoint = "/api/mf_newforms/";
    std::string query_template;  // with {level}, {weight}, {char_order}
    std::string records_key = "data";
    std::string next_key = "next";
    std::map<std::string, std::string> fields;  // record field -> API field

    static InterfaceDescriptor load(const fs::path& file);
    static InterfaceDescriptor builtin();
    std::string query(int level, int weight, int char_order) const;
};

struct ClientOptions {
    std::optional<fs::path> cache_dir;     // defaults to $GALORB_CACHE_DIR when unset
    std::optional<fs::path> fixture_dir;   // versioned directory holding fixture documents
    bool offline = true;                   // live queries are opt-in
    std::optional<std::string> base_url;   // overrides the descriptor
    std::chrono::milliseconds min_interval{1000};
    std::chrono::milliseconds backoff_base{500};
    int max_retries = 4;
    std::chrono::seconds timeout{30};
};

enum class Source { Cache, Fixture, Live };
std::string to_string(Source s);

struct FetchResult {
    std::vector<NewformRecord> records;
    Source source = Source::Cache;
    std::string key;
    std::vector<std::string> warnings;
};

class Client {
public:
    explicit Client(ClientOptions opts = {}, std::optional<InterfaceDescriptor> descriptor = std::nullopt);

    FetchResult fetch(int level, int weight, int char_order);
    std::vector<NewformRecord> fetch_newforms(int level, int weight, int char_order) {
        return fetch(level, weight, char_order).records;
    }
    const InterfaceDescriptor& descriptor() const { return desc_; }
    const ClientOptions& options() const { return opts_; }
    std::string cache_key(int level, int weight, int char_order) const;
    int live_requests() const { return live_requests_; }

private:
    std::optional<std::string> read_cache(const std::string& key) const;
    void write_cache(const std::string& key, const std::string& payload, std::vector<std::string>& warnings) const;
    std::optional<std::string> read_fixture(const std::string& key) const;
    std::string fetch_live(int level, int weight, int char_order);
    std::string http_get(const std::string& base, const std::string& target);

    ClientOptions opts_;
    InterfaceDescriptor desc_;
    std::chrono::steady_clock::time_point last_request_{};
    int live_requests_ = 0;
};

// response document -> records, pseudo-eigenvalue enrichment merged by label
std::vector<NewformRecord> parse_records(const std::string& payload, const InterfaceDescriptor& desc);
std::map<std::string, std::vector<ObservedLambda>> load_enrichment(const fs::path& file);
void apply_enrichment(std::vector<NewformRecord>& records,
                      const std::map<std::string, std::vector<ObservedLambda>>& enrichment);

std::string sha256_hex(const std::string& data);

// non-CM quadratic-character orbits; char_orbit_label restricts the match when given
i64 ncm_count(const std::vector<NewformRecord>& records, const std::optional<std::string>& char_orbit_label = {});

enum class BoundVerdict { HoldsEqual, HoldsStrict, Violation, Unknown };
std::string to_string(BoundVerdict v);
BoundVerdict bound_verdict(std::optional<i64> lo, i64 ncm);

struct ComparisonRow {
    i64 N = 0;
    int k = 0;
    std::string psi;  // per-prime descriptors, e.g. "3:tame,value_at_p=+1"
    std::optional<i64> lo;
    std::string lo_expression;
    i64 ncm = 0;
    i64 total_orbits = 0;
    BoundVerdict verdict = BoundVerdict::Unknown;
    Source source = Source::Cache;
    std::optional<i64> s_sym;                // computed, over all primes
    std::vector<std::string> observed_pairs;  // e.g. "3:{+-1}:symmetric"
    i64 observed_symmetric = 0;              // distinct symmetric pairs seen in the data
    std::optional<i64> lo_upper_from_data;   // LT + (two-valued - observed symmetric), prime powers
    bool conjectural = false;
    std::vector<std::string> notes;
    bool operator==(const ComparisonRow&) const = default;
};

struct CompareRequest {
    i64 N = 0;
    int k = 0;
    std::optional<std::string> char_orbit_label;
};

ComparisonRow compare_one(Client& client, const CompareRequest& req, AsymPolicy policy, i64 param, bool strict,
                          const LambdaConfig& cfg = {});
std::vector<ComparisonRow> compare(Client& client, const std::vector<CompareRequest>& reqs, AsymPolicy policy,
                                   i64 param, bool strict, const LambdaConfig& cfg = {});

// the levels and weights with shipped fixtures
std::vector<CompareRequest> fixture_requests();

}  // namespace galorb::lmfdb
