#include "galorb/report.hpp"

#include <sstream>
#include <stdexcept>

namespace galorb {

using nlohmann::json;

namespace {

template <class E>
E parse_enum(const std::string& s, std::initializer_list<E> all) {
    for (E e : all)
        if (to_string(e) == s) return e;
    throw std::invalid_argument("unknown value '" + s + "'");
}

Verdict verdict_from(const std::string& s) { return parse_enum(s, {Verdict::Symmetric, Verdict::Asymmetric}); }

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

std::string vec_str(const IVec& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
    return os.str();
}

}  // namespace

std::string to_string(AsymPolicy p) {
    switch (p) {
        case AsymPolicy::Computed: return "computed";
        case AsymPolicy::Parameter: return "parameter";
        case AsymPolicy::Table: return "table";
    }
    return "?";
}

std::string describe(const LocalTypeOrbit& o) {
    std::ostringstream os;
    os << to_string(o.kind);
    if (o.ext) os << " K=" << o.ext->name();
    os << " rep=" << vec_str(o.rep);
    if (!o.partner.empty()) os << " partner=" << vec_str(o.partner);
    os << " size=" << o.orbit_size;
    return os.str();
}

std::vector<LocalNebentypus> table_nebentypus_states() {
    return {LocalNebentypus::tame(1), LocalNebentypus::tame(-1), LocalNebentypus::unramified(1),
            LocalNebentypus::unramified(-1)};
}

LTRow lt_row(i64 p, int n, const LocalNebentypus& psi) {
    LTRow r;
    r.p = p;
    r.n = n;
    r.psi = psi;
    r.closed = lt_closed_form(p, n, psi);
    r.brute = enumerate_orbits(p, n, psi, EnumMode::CountOnly).count;
    r.match = r.brute == r.closed;
    if (!r.match)
        for (const auto& o : enumerate_orbits(p, n, psi, EnumMode::Listing).orbits) r.offending.push_back(describe(o));
    return r;
}

LORow lo_row(i64 p, int n, const LocalNebentypus& psi, const LambdaConfig& cfg) {
    LORow r;
    r.computed = lo_count(p, n, psi, AsymPolicy::Computed, 0, cfg);
    r.table = lo_count(p, n, psi, AsymPolicy::Table, 0, cfg);
    r.match = r.computed.lt_total == r.table.lt_total && (!r.table.lo_total || r.table.lo_total == r.computed.lo_total);
    return r;
}

VerifyReport verify_all(const VerifyGrid& grid) {
    VerifyReport rep;
    rep.calibration = calibrate_readings();
    try {
        rep.selected = select_reading(rep.calibration);
    } catch (const std::runtime_error&) {
        ++rep.mismatches;
    }
    const LambdaConfig cfg{rep.selected, AdditiveSign::Positive};
    const auto states = table_nebentypus_states();

    struct PrimCell {
        i64 p;
        int n;
        QuadExt K;
        LocalNebentypus psi;
    };
    std::vector<PrimCell> prim;
    for (i64 p : grid.primes)
        for (int n = grid.n_min; n <= grid.n_max; ++n)
            for (const auto& K : QuadExt::all(p))
                for (const auto& psi : {LocalNebentypus::tame(1), LocalNebentypus::unramified(1)})
                    prim.push_back({p, n, K, psi});
    rep.primitive.resize(prim.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < prim.size(); ++i) {
        const auto& c = prim[i];
        PrimitiveRow r;
        r.p = c.p;
        r.n = c.n;
        r.ext = c.K.name();
        r.psi = c.psi;
        r.brute = primitive_orbit_count(c.p, c.n, c.K, c.psi, false);
        r.closed = primitive_orbit_closed_form(c.p, c.n, c.K, c.psi);
        r.match = r.brute == r.closed;
        rep.primitive[i] = r;
    }

    struct Cell {
        i64 p;
        int n;
        LocalNebentypus psi;
    };
    std::vector<Cell> lt_cells, lo_cells;
    for (i64 p : grid.primes)
        for (int n = grid.n_min; n <= grid.n_max; ++n)
            for (const auto& psi : states) lt_cells.push_back({p, n, psi});
    for (i64 p : grid.lo_primes)
        for (int n = grid.n_min; n <= grid.lo_n_max; ++n)
            for (const auto& psi : states) lo_cells.push_back({p, n, psi});
    rep.lt.resize(lt_cells.size());
    rep.lo.resize(lo_cells.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < lt_cells.size(); ++i) rep.lt[i] = lt_row(lt_cells[i].p, lt_cells[i].n, lt_cells[i].psi);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < lo_cells.size(); ++i) rep.lo[i] = lo_row(lo_cells[i].p, lo_cells[i].n, lo_cells[i].psi, cfg);

    for (i64 p : grid.primes)
        for (int v : {1, -1}) {
            auto lp = steinberg_lambda(LocalNebentypus::unramified(v), p);
            SteinbergRow r;
            r.p = p;
            r.value_at_p = v;
            r.pair = lp.describe();
            r.verdict = lp.verdict;
            // independent check of the verdict on the literal pair
            const CycElt z = v == 1 ? CycElt::integer(4, 1) : CycElt::zeta(4, 1);
            const bool sym = lambda_equiv(z, -z, LocalNebentypus::unramified(v), p);
            r.match = r.pair == (v == 1 ? "{+-1}" : "{+-i}") &&
                      r.verdict == (v == 1 ? Verdict::Asymmetric : Verdict::Symmetric) &&
                      sym == (r.verdict == Verdict::Symmetric);
            rep.steinberg.push_back(r);
        }

    for (auto& r : rep.primitive) rep.mismatches += !r.match;
    for (auto& r : rep.lt) rep.mismatches += !r.match;
    for (auto& r : rep.lo) rep.mismatches += !r.match;
    for (auto& r : rep.steinberg) rep.mismatches += !r.match;
    return rep;
}

void to_json(json& j, const LocalNebentypus& v) { j = json{{"ramified", v.ramified}, {"value_at_p", v.value_at_p}}; }
void from_json(const json& j, LocalNebentypus& v) {
    v.ramified = j.at("ramified").get<bool>();
    v.value_at_p = j.at("value_at_p").get<int>();
}

void to_json(json& j, const LTCount& v) {
    j = json{{"ps", v.ps}, {"st", v.st}, {"scu", v.scu}, {"scr", v.scr}, {"total", v.total()}};
}
void from_json(const json& j, LTCount& v) {
    v.ps = j.at("ps").get<i64>();
    v.st = j.at("st").get<i64>();
    v.scu = j.at("scu").get<i64>();
    v.scr = j.at("scr").get<i64>();
}

void to_json(json& j, const CycElt& v) {
    j = json{{"level", v.level()}, {"coeffs", v.coeffs()}, {"text", v.to_string()}};
}
void from_json(const json& j, CycElt& v) {
    v = CycElt::from_exponents(j.at("level").get<i64>(), j.at("coeffs").get<std::vector<i64>>());
}

void to_json(json& j, const LambdaClass& v) {
    j = json{{"representative", v.representative},
             {"root", describe_root(v.representative)},
             {"psi", v.psi},
             {"orbit", v.orbit_tag}};
}
void from_json(const json& j, LambdaClass& v) {
    v.representative = j.at("representative").get<CycElt>();
    v.psi = j.at("psi").get<LocalNebentypus>();
    v.orbit_tag = j.at("orbit").get<std::string>();
}

void to_json(json& j, const LambdaPair& v) {
    j = json{{"lambda", v.lambda}, {"pair", v.describe()}, {"verdict", to_string(v.verdict)}, {"classes", v.classes}};
}
void from_json(const json& j, LambdaPair& v) {
    v.lambda = j.at("lambda").get<CycElt>();
    v.verdict = verdict_from(j.at("verdict").get<std::string>());
    v.classes = j.at("classes").get<std::vector<LambdaClass>>();
}

void to_json(json& j, const LOCount& v) {
    j = json{{"p", v.p},
             {"n", v.n},
             {"psi", v.psi},
             {"policy", to_string(v.policy)},
             {"lt_total", v.lt_total},
             {"s_sym", opt(v.s_sym)},
             {"s_asym", opt(v.s_asym)},
             {"lo_total", opt(v.lo_total)},
             {"expression", v.expression},
             {"two_valued", v.two_valued}};
}
void from_json(const json& j, LOCount& v) {
    v.p = j.at("p").get<i64>();
    v.n = j.at("n").get<int>();
    v.psi = j.at("psi").get<LocalNebentypus>();
    v.policy = parse_enum(j.at("policy").get<std::string>(),
                          {AsymPolicy::Computed, AsymPolicy::Parameter, AsymPolicy::Table});
    v.lt_total = j.at("lt_total").get<i64>();
    v.s_sym = opt_from<i64>(j, "s_sym");
    v.s_asym = opt_from<i64>(j, "s_asym");
    v.lo_total = opt_from<i64>(j, "lo_total");
    v.expression = j.at("expression").get<std::string>();
    v.two_valued = j.at("two_valued").get<i64>();
}

void to_json(json& j, const BoundResult& v) {
    json factors = json::array();
    for (const auto& f : v.factors) factors.push_back(json{{"p", f.p}, {"e", f.e}, {"lo", f.lo}});
    j = json{{"N", v.N},
             {"factors", factors},
             {"value", opt(v.value)},
             {"expression", v.expression},
             {"conjectural", v.conjectural}};
}
void from_json(const json& j, BoundResult& v) {
    v.N = j.at("N").get<i64>();
    v.factors.clear();
    for (const auto& f : j.at("factors"))
        v.factors.push_back({f.at("p").get<i64>(), f.at("e").get<int>(), f.at("lo").get<LOCount>()});
    v.value = opt_from<i64>(j, "value");
    v.expression = j.at("expression").get<std::string>();
    v.conjectural = j.at("conjectural").get<bool>();
}

void to_json(json& j, const ReadingCalibration& v) {
    std::vector<std::string> verdicts;
    for (auto x : v.verdicts) verdicts.push_back(to_string(x));
    j = json{{"reading", to_string(v.reading)}, {"pairs", v.pairs}, {"verdicts", verdicts}, {"matches", v.matches}};
}
void from_json(const json& j, ReadingCalibration& v) {
    v.reading = parse_enum(j.at("reading").get<std::string>(),
                           {UniformizerReading::NormOfUniformizer, UniformizerReading::UniformizerClass});
    v.pairs = j.at("pairs").get<std::vector<std::string>>();
    v.verdicts.clear();
    for (const auto& s : j.at("verdicts")) v.verdicts.push_back(verdict_from(s.get<std::string>()));
    v.matches = j.at("matches").get<bool>();
}

void to_json(json& j, const LTRow& v) {
    j = json{{"p", v.p},         {"n", v.n},         {"psi", v.psi},        {"brute", v.brute},
             {"closed", v.closed}, {"match", v.match}, {"offending", v.offending}};
}
void from_json(const json& j, LTRow& v) {
    v.p = j.at("p").get<i64>();
    v.n = j.at("n").get<int>();
    v.psi = j.at("psi").get<LocalNebentypus>();
    v.brute = j.at("brute").get<LTCount>();
    v.closed = j.at("closed").get<LTCount>();
    v.match = j.at("match").get<bool>();
    v.offending = j.at("offending").get<std::vector<std::string>>();
}

void to_json(json& j, const PrimitiveRow& v) {
    j = json{{"p", v.p},         {"n", v.n},           {"ext", v.ext},    {"psi", v.psi},
             {"brute", v.brute}, {"closed", v.closed}, {"match", v.match}};
}
void from_json(const json& j, PrimitiveRow& v) {
    v.p = j.at("p").get<i64>();
    v.n = j.at("n").get<int>();
    v.ext = j.at("ext").get<std::string>();
    v.psi = j.at("psi").get<LocalNebentypus>();
    v.brute = j.at("brute").get<i64>();
    v.closed = j.at("closed").get<i64>();
    v.match = j.at("match").get<bool>();
}

void to_json(json& j, const LORow& v) { j = json{{"computed", v.computed}, {"table", v.table}, {"match", v.match}}; }
void from_json(const json& j, LORow& v) {
    v.computed = j.at("computed").get<LOCount>();
    v.table = j.at("table").get<LOCount>();
    v.match = j.at("match").get<bool>();
}

void to_json(json& j, const SteinbergRow& v) {
    j = json{{"p", v.p},
             {"value_at_p", v.value_at_p},
             {"pair", v.pair},
             {"verdict", to_string(v.verdict)},
             {"match", v.match}};
}
void from_json(const json& j, SteinbergRow& v) {
    v.p = j.at("p").get<i64>();
    v.value_at_p = j.at("value_at_p").get<int>();
    v.pair = j.at("pair").get<std::string>();
    v.verdict = verdict_from(j.at("verdict").get<std::string>());
    v.match = j.at("match").get<bool>();
}

void to_json(json& j, const VerifyReport& v) {
    j = json{{"calibration", v.calibration}, {"selected_reading", to_string(v.selected)},
             {"primitive", v.primitive},     {"lt", v.lt},
             {"lo", v.lo},                   {"steinberg", v.steinberg},
             {"mismatches", v.mismatches}};
}
void from_json(const json& j, VerifyReport& v) {
    v.calibration = j.at("calibration").get<std::vector<ReadingCalibration>>();
    v.selected = parse_enum(j.at("selected_reading").get<std::string>(),
                            {UniformizerReading::NormOfUniformizer, UniformizerReading::UniformizerClass});
    v.primitive = j.at("primitive").get<std::vector<PrimitiveRow>>();
    v.lt = j.at("lt").get<std::vector<LTRow>>();
    v.lo = j.at("lo").get<std::vector<LORow>>();
    v.steinberg = j.at("steinberg").get<std::vector<SteinbergRow>>();
    v.mismatches = j.at("mismatches").get<i64>();
}

namespace lmfdb {

void to_json(json& j, const ObservedLambda& v) { j = json{{"p", v.p}, {"values", v.values}}; }
void from_json(const json& j, ObservedLambda& v) {
    v.p = j.at("p").get<i64>();
    v.values = j.at("values").get<std::vector<std::string>>();
}

void to_json(json& j, const NewformRecord& v) {
    j = json{{"label", v.label},
             {"level", v.level},
             {"weight", v.weight},
             {"char_orbit_label", v.char_orbit_label},
             {"char_order", v.char_order},
             {"is_cm", v.is_cm},
             {"dim", opt(v.dim)},
             {"pseudo_eigenvalues", v.pseudo_eigenvalues}};
}
void from_json(const json& j, NewformRecord& v) {
    v.label = j.at("label").get<std::string>();
    v.level = j.at("level").get<int>();
    v.weight = j.at("weight").get<int>();
    v.char_orbit_label = j.at("char_orbit_label").get<std::string>();
    v.char_order = j.at("char_order").get<int>();
    v.is_cm = j.at("is_cm").get<bool>();
    v.dim = opt_from<i64>(j, "dim");
    v.pseudo_eigenvalues = j.at("pseudo_eigenvalues").get<std::vector<ObservedLambda>>();
}

void to_json(json& j, const ComparisonRow& v) {
    j = json{{"N", v.N},
             {"k", v.k},
             {"psi", v.psi},
             {"lo", opt(v.lo)},
             {"lo_expression", v.lo_expression},
             {"ncm", v.ncm},
             {"total_orbits", v.total_orbits},
             {"verdict", to_string(v.verdict)},
             {"source", to_string(v.source)},
             {"s_sym", opt(v.s_sym)},
             {"observed_pairs", v.observed_pairs},
             {"observed_symmetric", v.observed_symmetric},
             {"lo_upper_from_data", opt(v.lo_upper_from_data)},
             {"conjectural", v.conjectural},
             {"notes", v.notes}};
}
void from_json(const json& j, ComparisonRow& v) {
    v.N = j.at("N").get<i64>();
    v.k = j.at("k").get<int>();
    v.psi = j.at("psi").get<std::string>();
    v.lo = opt_from<i64>(j, "lo");
    v.lo_expression = j.at("lo_expression").get<std::string>();
    v.ncm = j.at("ncm").get<i64>();
    v.total_orbits = j.at("total_orbits").get<i64>();
    v.verdict = parse_enum(j.at("verdict").get<std::string>(), {BoundVerdict::HoldsEqual, BoundVerdict::HoldsStrict,
                                                                BoundVerdict::Violation, BoundVerdict::Unknown});
    v.source = parse_enum(j.at("source").get<std::string>(), {Source::Cache, Source::Fixture, Source::Live});
    v.s_sym = opt_from<i64>(j, "s_sym");
    v.observed_pairs = j.at("observed_pairs").get<std::vector<std::string>>();
    v.observed_symmetric = j.at("observed_symmetric").get<i64>();
    v.lo_upper_from_data = opt_from<i64>(j, "lo_upper_from_data");
    v.conjectural = j.at("conjectural").get<bool>();
    v.notes = j.at("notes").get<std::vector<std::string>>();
}

}  // namespace lmfdb

std::string emit_json(const json& j) { return j.dump(1) + "\n"; }

}  // namespace galorb
