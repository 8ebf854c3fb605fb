// galorb: local type orbit counts, pseudo-eigenvalue classes and LMFDB comparisons.
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "galorb/report.hpp"

using namespace galorb;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kExternal = 3 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PsiFlags {
    bool tame = false;
    bool unramified = false;
    int value_at_p = 0;  // 0: not given

    LocalNebentypus resolve(int n) const {
        if (value_at_p != 0 && value_at_p != 1 && value_at_p != -1) throw UsageError("--value-at-p must be +1 or -1");
        if (unramified && n == 1 && value_at_p == 0)
            throw UsageError("--value-at-p is required for an unramified nebentypus at n = 1");
        const int v = value_at_p == 0 ? 1 : value_at_p;
        return unramified ? LocalNebentypus::unramified(v) : LocalNebentypus::tame(v);
    }
};

struct PolicyFlags {
    bool computed = false;
    bool table = false;
    std::optional<i64> param;

    AsymPolicy policy() const {
        if (int(computed) + int(table) + int(param.has_value()) > 1)
            throw UsageError("choose one of --computed, --table, --param-asym");
        if (table) return AsymPolicy::Table;
        if (param) return AsymPolicy::Parameter;
        return AsymPolicy::Computed;
    }
};

void add_psi(CLI::App* c, PsiFlags& f) {
    auto* t = c->add_flag("--tame", f.tame, "nebentypus of conductor p at p (default)");
    auto* u = c->add_flag("--unramified", f.unramified, "nebentypus unramified at p");
    t->excludes(u);
    c->add_option("--value-at-p", f.value_at_p, "Psi'(p), +1 or -1");
}

void add_policy(CLI::App* c, PolicyFlags& f) {
    c->add_flag("--computed", f.computed, "classify two-valued types by exact Gauss sums (default)");
    c->add_flag("--table", f.table, "closed-form rows, |S_asym| left symbolic");
    c->add_option("--param-asym", f.param, "substitute a value for |S_asym|");
}

std::string fmt_opt(const std::optional<i64>& v) { return v ? std::to_string(*v) : "-"; }

void print_table(std::ostream& os, const std::vector<std::string>& head, const std::vector<std::vector<std::string>>& rows,
                 bool tsv) {
    if (tsv) {
        for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "\t" : "") << head[i];
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "\t" : "") << r[i];
            os << "\n";
        }
        return;
    }
    std::vector<std::size_t> w(head.size());
    for (std::size_t i = 0; i < head.size(); ++i) w[i] = head[i].size();
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            os << (i ? "  " : "");
            if (i + 1 < r.size()) os << std::left << std::setw(int(w[i]));
            os << r[i];
        }
        os << "\n";
    };
    line(head);
    for (const auto& r : rows) line(r);
}

std::vector<std::string> lt_cells(const LTRow& r) {
    auto c = [](const LTCount& x) {
        std::ostringstream os;
        os << x.ps << "/" << x.st << "/" << x.scu << "/" << x.scr;
        return os.str();
    };
    return {std::to_string(r.p), std::to_string(r.n), r.psi.describe(), std::to_string(r.closed.total()),
            std::to_string(r.brute.total()), c(r.closed), c(r.brute), r.match ? "match" : "MISMATCH"};
}
const std::vector<std::string> kLtHead{"p", "n", "psi", "closed", "brute", "closed PS/St/SCU/SCR", "brute PS/St/SCU/SCR",
                                       "status"};

std::vector<std::string> lo_cells(const LOCount& r) {
    return {std::to_string(r.p), std::to_string(r.n), r.psi.describe(), to_string(r.policy), std::to_string(r.lt_total),
            fmt_opt(r.s_sym), fmt_opt(r.s_asym), r.expression};
}
const std::vector<std::string> kLoHead{"p", "n", "psi", "policy", "LT", "s_sym", "s_asym", "LO"};

std::vector<std::string> cmp_cells(const lmfdb::ComparisonRow& r) {
    std::string obs;
    for (const auto& s : r.observed_pairs) obs += (obs.empty() ? "" : " ") + s;
    return {std::to_string(r.N), std::to_string(r.k), r.psi, r.lo_expression, fmt_opt(r.lo_upper_from_data),
            std::to_string(r.ncm), std::to_string(r.total_orbits), fmt_opt(r.s_sym), obs.empty() ? "-" : obs,
            to_string(r.verdict), to_string(r.source)};
}
const std::vector<std::string> kCmpHead{"N", "k", "psi", "LO", "LO<= (data)", "NCM", "orbits", "s_sym",
                                        "observed lambda", "verdict", "source"};

struct Output {
    std::string format = "human";
    bool json() const { return format == "json"; }
    bool tsv() const { return format == "tsv"; }
};

int run(int argc, char** argv) {
    CLI::App app{"Galois orbits of local types and Atkin-Li pseudo-eigenvalue classes"};
    app.require_subcommand(1);
    Output out;
    app.add_option("--format", out.format, "human, json or tsv")
        ->check(CLI::IsMember({"human", "json", "tsv"}))
        ->capture_default_str();

    i64 p = 0;
    int n = 0;
    PsiFlags psi;
    PolicyFlags pol;

    auto* lt = app.add_subcommand("lt", "local type orbit count: closed form and brute force");
    lt->add_option("-p", p, "odd prime")->required();
    lt->add_option("-n", n, "exponent of p in the level")->required();
    bool list_orbits = false;
    lt->add_flag("--list", list_orbits, "list orbit representatives");
    add_psi(lt, psi);

    auto* lo = app.add_subcommand("lo", "LO count: type orbits paired with pseudo-eigenvalue classes");
    lo->add_option("-p", p, "odd prime")->required();
    lo->add_option("-n", n, "exponent of p in the level")->required();
    add_psi(lo, psi);
    add_policy(lo, pol);

    auto* lam = app.add_subcommand("lambda", "pseudo-eigenvalue pairs of the two-valued type orbits");
    lam->add_option("-p", p, "odd prime")->required();
    lam->add_option("-n", n, "exponent of p in the level")->required();
    add_psi(lam, psi);
    bool flip_sign = false;
    lam->add_flag("--negative-additive", flip_sign, "use the conjugate additive character");

    i64 N = 0;
    bool strict = false;
    auto* bound = app.add_subcommand("bound", "product of LO over the prime powers of N");
    bound->add_option("-N", N, "level")->required();
    bound->add_flag("--strict", strict, "reject levels outside the theorem's hypothesis");
    add_policy(bound, pol);

    int k = 0;
    bool use_fixture_set = false, live = false, offline = false;
    std::string cache_dir, fixture_dir, char_orbit, base_url;
    auto* cmp = app.add_subcommand("compare", "LO against non-CM orbit counts from the LMFDB");
    cmp->add_option("-N", N, "level");
    cmp->add_option("-k", k, "weight");
    cmp->add_flag("--fixtures", use_fixture_set, "every level and weight with shipped fixtures");
    cmp->add_option("--fixture-dir", fixture_dir, "fixture root (default: shipped fixtures or $GALORB_FIXTURE_DIR)");
    cmp->add_option("--cache-dir", cache_dir, "cache directory (default: $GALORB_CACHE_DIR)");
    cmp->add_option("--char-orbit", char_orbit, "character orbit label, needed for composite levels");
    cmp->add_option("--base-url", base_url, "API base URL for live queries");
    auto* off_flag = cmp->add_flag("--offline", offline, "never query the network (default)");
    cmp->add_flag("--live", live, "query the LMFDB when cache and fixtures miss")->excludes(off_flag);
    cmp->add_flag("--strict", strict, "reject levels outside the theorem's hypothesis");
    add_policy(cmp, pol);

    bool all = false;
    auto* ver = app.add_subcommand("verify", "sweep the table grid against brute force");
    ver->add_flag("--all", all, "the full grid")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    std::ostream& os = std::cout;

    if (*lt) {
        require_valid_prime(p);
        if (n < 1) throw UsageError("n must be positive");
        const auto row = lt_row(p, n, psi.resolve(n));
        std::vector<std::string> listing;
        if (list_orbits)
            for (const auto& o : enumerate_orbits(p, n, row.psi).orbits) listing.push_back(describe(o));
        if (out.json()) {
            json j = row;
            if (list_orbits) j["orbits"] = listing;
            os << emit_json(j);
        } else {
            print_table(os, kLtHead, {lt_cells(row)}, out.tsv());
            for (const auto& s : listing) os << "  " << s << "\n";
            for (const auto& s : row.offending) os << "  offending: " << s << "\n";
        }
        return row.match ? kOk : kMismatch;
    }

    if (*lo) {
        require_valid_prime(p);
        if (n < 1) throw UsageError("n must be positive");
        const auto c = lo_count(p, n, psi.resolve(n), pol.policy(), pol.param.value_or(0));
        if (out.json())
            os << emit_json(json(c));
        else
            print_table(os, kLoHead, {lo_cells(c)}, out.tsv());
        return kOk;
    }

    if (*lam) {
        require_valid_prime(p);
        if (n < 1) throw UsageError("n must be positive");
        const auto nb = psi.resolve(n);
        const LambdaConfig cfg{select_reading(calibrate_readings()),
                               flip_sign ? AdditiveSign::Negative : AdditiveSign::Positive};
        std::vector<LambdaPair> pairs;
        for (const auto& o : enumerate_orbits(p, n, nb).orbits) {
            if (o.kind == TypeKind::SCR) pairs.push_back(scr_lambda_pair(o, cfg));
            if (o.kind == TypeKind::St && n == 1) pairs.push_back(steinberg_lambda(nb, p));
        }
        if (out.json()) {
            os << emit_json(json{{"p", p}, {"n", n}, {"psi", nb}, {"reading", to_string(cfg.reading)}, {"pairs", pairs}});
        } else {
            std::vector<std::vector<std::string>> rows;
            for (const auto& lp : pairs)
                rows.push_back({lp.classes.front().orbit_tag, lp.describe(), describe_root(lp.lambda), to_string(lp.verdict)});
            print_table(os, {"orbit", "pair", "lambda", "verdict"}, rows, out.tsv());
        }
        return kOk;
    }

    if (*bound) {
        const auto b = lo_lower_bound(N, {}, pol.policy(), pol.param.value_or(0), strict);
        if (out.json()) {
            os << emit_json(json(b));
        } else {
            std::vector<std::vector<std::string>> rows;
            for (const auto& f : b.factors) rows.push_back(lo_cells(f.lo));
            print_table(os, kLoHead, rows, out.tsv());
            os << "bound(" << b.N << ") = " << b.expression << (b.conjectural ? "  (conjectural: hypothesis not met)" : "")
               << "\n";
        }
        return kOk;
    }

    if (*cmp) {
        std::vector<lmfdb::CompareRequest> reqs;
        if (N != 0 || k != 0) {
            if (N == 0 || k == 0) throw UsageError("compare needs both -N and -k");
            reqs.push_back({N, k, char_orbit.empty() ? std::nullopt : std::optional<std::string>(char_orbit)});
        } else if (use_fixture_set) {
            reqs = lmfdb::fixture_requests();
        } else {
            throw UsageError("compare needs -N and -k, or --fixtures");
        }
        lmfdb::ClientOptions opts;
        if (!cache_dir.empty()) opts.cache_dir = cache_dir;
        if (!fixture_dir.empty())
            opts.fixture_dir = fixture_dir;
        else if (const char* env = std::getenv("GALORB_FIXTURE_DIR"); env && *env)
            opts.fixture_dir = env;
        else
            opts.fixture_dir = GALORB_FIXTURE_DIR;
        if (!base_url.empty()) opts.base_url = base_url;
        opts.offline = !live;
        lmfdb::Client client(opts);
        const auto rows = lmfdb::compare(client, reqs, pol.policy(), pol.param.value_or(0), strict);
        bool violation = false;
        for (const auto& r : rows) violation = violation || r.verdict == lmfdb::BoundVerdict::Violation;
        if (out.json()) {
            os << emit_json(json(rows));
        } else {
            std::vector<std::vector<std::string>> cells;
            for (const auto& r : rows) cells.push_back(cmp_cells(r));
            print_table(os, kCmpHead, cells, out.tsv());
            if (!out.tsv())
                for (const auto& r : rows)
                    for (const auto& note : r.notes) os << "  " << r.N << "/" << r.k << ": " << note << "\n";
        }
        if (violation) std::cerr << "VIOLATION: LO exceeds NCM for at least one row\n";
        return violation ? kMismatch : kOk;
    }

    if (*ver) {
        const auto rep = verify_all();
        if (out.json()) {
            os << emit_json(json(rep));
        } else {
            auto count = [](const auto& v) {
                std::size_t ok = 0;
                for (const auto& r : v) ok += r.match;
                return std::to_string(ok) + "/" + std::to_string(v.size());
            };
            std::vector<std::vector<std::string>> rows;
            for (const auto& c : rep.calibration) {
                std::string pairs;
                for (const auto& s : c.pairs) pairs += (pairs.empty() ? "" : " ") + s;
                rows.push_back({"reading " + to_string(c.reading), pairs, c.matches ? "match" : "no match"});
            }
            rows.push_back({"selected reading", to_string(rep.selected), ""});
            rows.push_back({"primitive character orbits", count(rep.primitive), ""});
            rows.push_back({"local type orbits", count(rep.lt), ""});
            rows.push_back({"LO computed vs table", count(rep.lo), ""});
            rows.push_back({"Steinberg pairs", count(rep.steinberg), ""});
            rows.push_back({"mismatches", std::to_string(rep.mismatches), ""});
            print_table(os, {"check", "result", ""}, rows, out.tsv());
            for (const auto& r : rep.lt)
                if (!r.match) print_table(os, kLtHead, {lt_cells(r)}, out.tsv());
        }
        return rep.mismatches == 0 ? kOk : kMismatch;
    }
    return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const lmfdb::UnavailableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExternal;
    } catch (const lmfdb::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\nraw payload:\n" << e.raw_payload.substr(0, 2000) << "\n";
        return kExternal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMismatch;
    }
}
