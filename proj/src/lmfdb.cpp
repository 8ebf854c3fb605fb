#include "galorb/lmfdb.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace galorb::lmfdb {

using nlohmann::json;

namespace {

std::mutex g_live_mutex;  // one request in flight per process

std::optional<std::string> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const fs::path& p, const std::string& data) {
    fs::create_directories(p.parent_path());
    static std::atomic<unsigned> counter{0};
    std::ostringstream tmpname;
    tmpname << p.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
            << counter++;
    const fs::path tmp = p.parent_path() / tmpname.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << data;
        if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, p);
}

void strip_volatile(json& doc) {
    if (!doc.is_object()) return;
    for (const char* k : {"timestamp", "time", "generated"}) doc.erase(k);
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
    return s;
}

ObservedLambda parse_observed(const json& j, const std::string& raw) {
    ObservedLambda o;
    if (!j.is_object() || !j.contains("p") || !j["p"].is_number_integer() || !j.contains("values") ||
        !j["values"].is_array())
        throw SchemaError("pseudo-eigenvalue entry needs integer p and a values array", raw);
    o.p = j["p"].get<i64>();
    for (const auto& v : j["values"]) {
        if (!v.is_string()) throw SchemaError("pseudo-eigenvalue values must be strings", raw);
        const auto s = v.get<std::string>();
        if (s != "1" && s != "-1" && s != "i" && s != "-i")
            throw SchemaError("unsupported pseudo-eigenvalue '" + s + "'", raw);
        o.values.push_back(s);
    }
    return o;
}

CycElt lambda_value(const std::string& s) {
    if (s == "1") return CycElt::zeta(4, 0);
    if (s == "i") return CycElt::zeta(4, 1);
    if (s == "-1") return CycElt::zeta(4, 2);
    return CycElt::zeta(4, 3);
}

}  // namespace

LabelParts parse_label(const std::string& label) {
    std::vector<std::string> parts;
    std::stringstream ss(label);
    for (std::string item; std::getline(ss, item, '.');) parts.push_back(item);
    auto is_num = [](const std::string& s) {
        return !s.empty() && s.size() < 10 && std::all_of(s.begin(), s.end(), ::isdigit);
    };
    auto is_alpha = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
    };
    if (parts.size() != 4 || !is_num(parts[0]) || !is_num(parts[1]) || !is_alpha(parts[2]) || !is_alpha(parts[3]))
        throw SchemaError("malformed newform label '" + label + "'", label);
    return {std::stoi(parts[0]), std::stoi(parts[1]), parts[2], parts[3]};
}

InterfaceDescriptor InterfaceDescriptor::builtin() {
    InterfaceDescriptor d;
    d.query_template =
        "level=i{level}&weight=i{weight}&char_order=i{char_order}&_format=json"
        "&_fields=label,level,weight,char_orbit_label,char_order,is_cm,dim";
    for (const char* f : {"label", "level", "weight", "char_orbit_label", "char_order", "is_cm", "dim"}) d.fields[f] = f;
    return d;
}

InterfaceDescriptor InterfaceDescriptor::load(const fs::path& file) {
    auto text = slurp(file);
    if (!text) throw std::runtime_error("cannot read interface descriptor " + file.string());
    json j;
    try {
        j = json::parse(*text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("interface descriptor: ") + e.what(), *text);
    }
    InterfaceDescriptor d = builtin();
    try {
        d.schema_version = j.at("schema_version").get<int>();
        d.base_url = j.at("base_url").get<std::string>();
        d.endpoint = j.at("endpoint").get<std::string>();
        d.query_template = j.at("query").get<std::string>();
        d.records_key = j.value("records_key", d.records_key);
        d.next_key = j.value("next_key", d.next_key);
        for (auto& [k, v] : j.at("fields").items()) d.fields[k] = v.get<std::string>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("interface descriptor: ") + e.what(), *text);
    }
    return d;
}

std::string InterfaceDescriptor::query(int level, int weight, int char_order) const {
    std::string q = query_template;
    q = replace_all(q, "{level}", std::to_string(level));
    q = replace_all(q, "{weight}", std::to_string(weight));
    q = replace_all(q, "{char_order}", std::to_string(char_order));
    return q;
}

std::string to_string(Source s) {
    switch (s) {
        case Source::Cache: return "cache";
        case Source::Fixture: return "fixture";
        case Source::Live: return "live";
    }
    return "?";
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::vector<NewformRecord> parse_records(const std::string& payload, const InterfaceDescriptor& desc) {
    json doc;
    try {
        doc = json::parse(payload);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("response is not JSON: ") + e.what(), payload);
    }
    if (!doc.is_object() || !doc.contains(desc.records_key) || !doc[desc.records_key].is_array())
        throw SchemaError("response lacks the '" + desc.records_key + "' array", payload);
    auto field = [&](const std::string& name) {
        auto it = desc.fields.find(name);
        return it == desc.fields.end() ? name : it->second;
    };
    std::vector<NewformRecord> out;
    for (const auto& r : doc[desc.records_key]) {
        if (!r.is_object()) throw SchemaError("record is not an object", payload);
        auto need = [&](const std::string& name) -> const json& {
            const auto key = field(name);
            if (!r.contains(key)) throw SchemaError("record lacks field '" + key + "'", payload);
            return r.at(key);
        };
        NewformRecord rec;
        try {
            rec.label = need("label").get<std::string>();
            rec.level = need("level").get<int>();
            rec.weight = need("weight").get<int>();
            rec.char_orbit_label = need("char_orbit_label").get<std::string>();
            rec.char_order = need("char_order").get<int>();
            const json& cm = need("is_cm");
            if (!cm.is_boolean()) throw SchemaError("is_cm is not a boolean in " + rec.label, payload);
            rec.is_cm = cm.get<bool>();
            const auto dk = field("dim");
            if (r.contains(dk) && !r.at(dk).is_null()) rec.dim = r.at(dk).get<i64>();
        } catch (const json::type_error& e) {
            throw SchemaError(std::string("record field has the wrong type: ") + e.what(), payload);
        }
        if (r.contains("pseudo_eigenvalues"))
            for (const auto& o : r["pseudo_eigenvalues"]) rec.pseudo_eigenvalues.push_back(parse_observed(o, payload));
        LabelParts parts;
        try {
            parts = parse_label(rec.label);
        } catch (const SchemaError& e) {
            throw SchemaError(e.what(), payload);
        }
        if (parts.level != rec.level || parts.weight != rec.weight || parts.char_orbit != rec.char_orbit_label)
            throw SchemaError("label " + rec.label + " disagrees with its fields", payload);
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(), [](const NewformRecord& a, const NewformRecord& b) { return a.label < b.label; });
    return out;
}

std::map<std::string, std::vector<ObservedLambda>> load_enrichment(const fs::path& file) {
    std::map<std::string, std::vector<ObservedLambda>> out;
    auto text = slurp(file);
    if (!text) return out;
    json j;
    try {
        j = json::parse(*text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("enrichment file: ") + e.what(), *text);
    }
    if (!j.is_object() || !j.contains("orbits") || !j["orbits"].is_object())
        throw SchemaError("enrichment file lacks an 'orbits' object", *text);
    for (auto& [label, entries] : j["orbits"].items()) {
        parse_label(label);
        for (const auto& e : entries) out[label].push_back(parse_observed(e, *text));
    }
    return out;
}

void apply_enrichment(std::vector<NewformRecord>& records,
                      const std::map<std::string, std::vector<ObservedLambda>>& enrichment) {
    for (auto& r : records) {
        auto it = enrichment.find(r.label);
        if (it != enrichment.end() && r.pseudo_eigenvalues.empty()) r.pseudo_eigenvalues = it->second;
    }
}

Client::Client(ClientOptions opts, std::optional<InterfaceDescriptor> descriptor) : opts_(std::move(opts)) {
    if (!opts_.cache_dir)
        if (const char* env = std::getenv("GALORB_CACHE_DIR"); env && *env) opts_.cache_dir = fs::path(env);
    if (descriptor) {
        desc_ = *descriptor;
    } else if (opts_.fixture_dir && fs::exists(*opts_.fixture_dir / "v1" / "interface.json")) {
        desc_ = InterfaceDescriptor::load(*opts_.fixture_dir / "v1" / "interface.json");
    } else {
        desc_ = InterfaceDescriptor::builtin();
    }
    if (opts_.base_url) desc_.base_url = *opts_.base_url;
}

std::string Client::cache_key(int level, int weight, int char_order) const {
    std::ostringstream os;
    os << "v" << desc_.schema_version << "/mf_newforms_L" << level << "_k" << weight << "_o" << char_order;
    return os.str();
}

std::optional<std::string> Client::read_cache(const std::string& key) const {
    if (!opts_.cache_dir) return std::nullopt;
    const fs::path file = *opts_.cache_dir / (key + ".json");
    auto data = slurp(file);
    if (!data) return std::nullopt;
    auto recorded = slurp(fs::path(file.string() + ".sha256"));
    if (recorded && recorded->substr(0, 64) != sha256_hex(*data)) return std::nullopt;
    return data;
}

void Client::write_cache(const std::string& key, const std::string& payload, std::vector<std::string>& warnings) const {
    if (!opts_.cache_dir) return;
    const fs::path file = *opts_.cache_dir / (key + ".json");
    const std::string hash = sha256_hex(payload);
    if (auto existing = slurp(file)) {
        if (sha256_hex(*existing) == hash) return;
        const fs::path side = *opts_.cache_dir / (key + "." + hash.substr(0, 12) + ".json");
        atomic_write(side, payload);
        warnings.push_back("cache entry " + file.string() + " differs from the new response; kept both, new copy at " +
                           side.string());
        return;
    }
    atomic_write(file, payload);
    atomic_write(fs::path(file.string() + ".sha256"), hash + "\n");
}

std::optional<std::string> Client::read_fixture(const std::string& key) const {
    if (!opts_.fixture_dir) return std::nullopt;
    return slurp(*opts_.fixture_dir / (key + ".json"));
}

std::string Client::http_get(const std::string& base, const std::string& target) {
    httplib::Client cli(base);
    if (!cli.is_valid()) throw UnavailableError("cannot open a client for " + base);
    cli.set_connection_timeout(opts_.timeout);
    cli.set_read_timeout(opts_.timeout);
    cli.set_follow_location(true);
    std::string last_error;
    for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
        const auto now = std::chrono::steady_clock::now();
        if (live_requests_ > 0 && now < last_request_ + opts_.min_interval)
            std::this_thread::sleep_for(last_request_ + opts_.min_interval - now);
        last_request_ = std::chrono::steady_clock::now();
        ++live_requests_;
        auto res = cli.Get(target);
        std::chrono::milliseconds wait = opts_.backoff_base * (1LL << attempt);
        if (!res) {
            last_error = "request failed: " + httplib::to_string(res.error());
        } else if (res->status == 200) {
            return res->body;
        } else if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            if (res->has_header("Retry-After")) {
                try {
                    wait = std::max(wait, std::chrono::milliseconds(1000 * std::stoll(res->get_header_value("Retry-After"))));
                } catch (const std::exception&) {
                }
            }
        } else {
            throw UnavailableError("HTTP " + std::to_string(res->status) + " for " + base + target);
        }
        if (attempt < opts_.max_retries) std::this_thread::sleep_for(wait);
    }
    throw UnavailableError(last_error + " after " + std::to_string(opts_.max_retries + 1) + " attempts: " + base + target);
}

std::string Client::fetch_live(int level, int weight, int char_order) {
    std::lock_guard<std::mutex> lock(g_live_mutex);
    std::string target = desc_.endpoint + "?" + desc_.query(level, weight, char_order);
    json merged;
    json all = json::array();
    for (int page = 0; page < 1000; ++page) {
        const std::string body = http_get(desc_.base_url, target);
        json doc;
        try {
            doc = json::parse(body);
        } catch (const json::exception& e) {
            throw SchemaError(std::string("response is not JSON: ") + e.what(), body);
        }
        if (!doc.is_object() || !doc.contains(desc_.records_key) || !doc[desc_.records_key].is_array())
            throw SchemaError("response lacks the '" + desc_.records_key + "' array", body);
        for (auto& r : doc[desc_.records_key]) all.push_back(r);
        if (page == 0) merged = doc;
        if (!doc.contains(desc_.next_key) || !doc[desc_.next_key].is_string() ||
            doc[desc_.next_key].get<std::string>().empty())
            break;
        target = doc[desc_.next_key].get<std::string>();
        if (target.rfind("http", 0) == 0) {
            const auto slash = target.find('/', target.find("//") + 2);
            target = slash == std::string::npos ? "/" : target.substr(slash);
        }
    }
    merged[desc_.records_key] = all;
    merged[desc_.next_key] = nullptr;
    strip_volatile(merged);
    return merged.dump(1) + "\n";
}

FetchResult Client::fetch(int level, int weight, int char_order) {
    FetchResult out;
    out.key = cache_key(level, weight, char_order);
    std::optional<std::string> payload = read_cache(out.key);
    out.source = Source::Cache;
    if (!payload) {
        payload = read_fixture(out.key);
        out.source = Source::Fixture;
    }
    if (!payload) {
        if (opts_.offline)
            throw UnavailableError("no cached or fixture data for " + out.key + " and live queries are disabled");
        payload = fetch_live(level, weight, char_order);
        out.source = Source::Live;
    }
    out.records = parse_records(*payload, desc_);
    if (out.source == Source::Live) write_cache(out.key, *payload, out.warnings);
    if (opts_.fixture_dir) apply_enrichment(out.records, load_enrichment(*opts_.fixture_dir / "v1" / "pseudo_eigenvalues.json"));
    for (const auto& r : out.records)
        if (r.level != level || r.weight != weight)
            throw SchemaError("record " + r.label + " does not belong to the requested space", *payload);
    return out;
}

i64 ncm_count(const std::vector<NewformRecord>& records, const std::optional<std::string>& char_orbit_label) {
    i64 n = 0;
    for (const auto& r : records) {
        if (r.char_order != 2 || r.is_cm) continue;
        if (char_orbit_label && r.char_orbit_label != *char_orbit_label) continue;
        ++n;
    }
    return n;
}

std::string to_string(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::HoldsEqual: return "bound-holds-equal";
        case BoundVerdict::HoldsStrict: return "bound-holds-strict";
        case BoundVerdict::Violation: return "VIOLATION";
        case BoundVerdict::Unknown: return "unknown";
    }
    return "?";
}

BoundVerdict bound_verdict(std::optional<i64> lo, i64 ncm) {
    if (!lo) return BoundVerdict::Unknown;
    if (*lo < ncm) return BoundVerdict::HoldsStrict;
    if (*lo == ncm) return BoundVerdict::HoldsEqual;
    return BoundVerdict::Violation;
}

ComparisonRow compare_one(Client& client, const CompareRequest& req, AsymPolicy policy, i64 param, bool strict,
                          const LambdaConfig& cfg) {
    ComparisonRow row;
    row.N = req.N;
    row.k = req.k;
    const BoundResult bound = lo_lower_bound(req.N, {}, policy, param, strict, cfg);
    row.lo = bound.value;
    row.lo_expression = bound.expression;
    row.conjectural = bound.conjectural;
    for (std::size_t i = 0; i < bound.factors.size(); ++i) {
        const auto& f = bound.factors[i];
        row.psi += (i ? ";" : "") + std::to_string(f.p) + ":" + f.lo.psi.describe();
    }
    const bool prime_power = bound.factors.size() == 1;
    if (!prime_power && !req.char_orbit_label)
        throw std::invalid_argument("composite level " + std::to_string(req.N) +
                                    " needs an explicit character orbit label");

    auto fetched = client.fetch(static_cast<int>(req.N), req.k, 2);
    row.source = fetched.source;
    row.notes = fetched.warnings;
    for (const auto& r : fetched.records)
        if (!req.char_orbit_label || r.char_orbit_label == *req.char_orbit_label) ++row.total_orbits;
    row.ncm = ncm_count(fetched.records, req.char_orbit_label);

    if (prime_power) {
        const auto& f = bound.factors[0];
        row.s_sym = f.lo.s_sym;
        std::set<std::pair<i64, std::string>> values;
        for (const auto& r : fetched.records) {
            if (r.is_cm) continue;
            for (const auto& o : r.pseudo_eigenvalues)
                if (o.p == f.p)
                    for (const auto& v : o.values) values.insert({o.p, v});
        }
        // unordered pairs {lambda, -lambda}
        std::set<std::string> pairs_seen;
        for (const auto& [p, v] : values) {
            const CycElt z = lambda_value(v);
            const bool real = v == "1" || v == "-1";
            const std::string pair = real ? "{+-1}" : "{+-i}";
            if (!pairs_seen.insert(pair).second) continue;
            const bool sym = lambda_equiv(z, -z, f.lo.psi, p);
            row.observed_pairs.push_back(std::to_string(p) + ":" + pair + ":" + to_string(sym ? Verdict::Symmetric : Verdict::Asymmetric));
            if (sym) ++row.observed_symmetric;
        }
        const LTCount lt = lt_closed_form(f.p, f.e, f.lo.psi);
        const i64 two_valued = lt.scr + (f.e == 1 ? lt.st : 0);
        if (!pairs_seen.empty())
            row.lo_upper_from_data = lt.total() + std::max<i64>(0, two_valued - row.observed_symmetric);
    }

    std::optional<i64> effective = row.lo;
    if (!effective && row.lo_upper_from_data) {
        effective = row.lo_upper_from_data;
        row.notes.push_back("verdict uses the upper bound on LO derived from observed pseudo-eigenvalues");
    }
    row.verdict = bound_verdict(effective, row.ncm);
    if (row.conjectural) row.notes.push_back("level outside the theorem's hypothesis; bound is conjectural here");
    if (row.verdict == BoundVerdict::Violation) row.notes.push_back("LO exceeds NCM");
    return row;
}

std::vector<ComparisonRow> compare(Client& client, const std::vector<CompareRequest>& reqs, AsymPolicy policy,
                                   i64 param, bool strict, const LambdaConfig& cfg) {
    std::vector<ComparisonRow> out;
    for (const auto& r : reqs) out.push_back(compare_one(client, r, policy, param, strict, cfg));
    return out;
}

std::vector<CompareRequest> fixture_requests() {
    return {{27, 35, {}}, {125, 10, {}}, {125, 12, {}}, {343, 3, {}}, {343, 5, {}}, {243, 7, {}}};
}

}  // namespace galorb::lmfdb
