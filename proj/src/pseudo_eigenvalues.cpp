#include "galorb/pseudo_eigenvalues.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>

namespace galorb {

std::string to_string(UniformizerReading r) {
    return r == UniformizerReading::NormOfUniformizer ? "norm-of-uniformizer" : "uniformizer-class";
}

std::string to_string(Verdict v) { return v == Verdict::Symmetric ? "symmetric" : "asymmetric"; }

std::string describe_root(const CycElt& z) {
    const i64 k = z.root_of_unity_exponent();
    if (k < 0) return "not-a-root-of-unity";
    const i64 M = lcm(z.level(), 2);
    const i64 g = gcd(k, M);
    const i64 num = k / g, den = M / g;
    if (den == 1) return "1";
    if (den == 2) return "-1";
    if (den == 4) return num == 1 ? "i" : "-i";
    std::ostringstream os;
    os << "zeta(" << num << "/" << den << ")";
    return os.str();
}

std::string LambdaPair::describe() const {
    const std::string a = describe_root(lambda), b = describe_root(-lambda);
    if (a == "1" || a == "-1") return "{+-1}";
    if (a == "i" || a == "-i") return "{+-i}";
    return "{" + std::min(a, b) + ", " + std::max(a, b) + "}";
}

namespace {

void require_unit_modulus(const CycElt& z) {
    if (z * z.conj() != CycElt::integer(1, 1)) throw std::invalid_argument("lambda_equiv: input is not of modulus 1");
}

LambdaPair finish_pair(const CycElt& lambda, const LocalNebentypus& psi, i64 p, const std::string& tag) {
    LambdaPair out;
    out.lambda = lambda;
    out.verdict = lambda_equiv(lambda, -lambda, psi, p) ? Verdict::Symmetric : Verdict::Asymmetric;
    out.classes.push_back({lambda, psi, tag});
    if (out.verdict == Verdict::Asymmetric) out.classes.push_back({-lambda, psi, tag});
    return out;
}

}  // namespace

bool lambda_equiv(const CycElt& z1, const CycElt& z2, const LocalNebentypus& psi, i64 p) {
    require_unit_modulus(z1);
    require_unit_modulus(z2);
    i64 L = lcm(z1.level(), z2.level());
    if (psi.ramified) L = lcm(L, p);
    const CycElt a1 = z1.lift(L), a2 = z2.lift(L);
    std::atomic<bool> found{false};
#pragma omp parallel for schedule(dynamic, 8)
    for (i64 a = 1; a <= L; ++a) {
        if (found.load(std::memory_order_relaxed)) continue;
        if (gcd(a, L) != 1) continue;
        const i64 s = psi.ramified ? legendre(a, p) : 1;
        if (a1.galois_apply(a) * s == a2) found.store(true, std::memory_order_relaxed);
    }
    return found.load();
}

LambdaPair steinberg_lambda(const LocalNebentypus& psi, i64 p) {
    if (psi.ramified) throw std::invalid_argument("steinberg_lambda: unramified twists need an unramified nebentypus");
    // lambda = -1 / Psi_p^{-1}(p) up to sign; Psi_p^{-1}(p) = +1 gives +-1, -1 gives +-i
    const CycElt lambda = psi.value_at_p == 1 ? CycElt::integer(4, 1) : CycElt::zeta(4, 1);
    return finish_pair(lambda, psi, p, "St,n=1");
}

LambdaPair scr_lambda_pair(const CharacterVec& theta, const LocalNebentypus& psi, int n, const LambdaConfig& cfg) {
    const auto& G = *theta.host();
    const auto& R = G.ring();
    if (!R.ramified()) throw std::invalid_argument("scr_lambda_pair: theta must live on a ramified extension");
    const int a = conductor(theta);
    if (a != G.level() || a != n - 1) throw std::invalid_argument("scr_lambda_pair: theta must be primitive of conductor n-1");
    if (a % 2 != 0) throw std::invalid_argument("scr_lambda_pair: conductor of theta must be even");
    auto maps = structure_maps(theta.host());
    if (factors_through_norm(theta, maps)) throw std::invalid_argument("scr_lambda_pair: theta factors through the norm");

    const i64 p = R.p();
    const CycElt g = gauss_sum(theta, GaussParams{cfg.sign});
    const CycElt unit_gauss = g.divide_exact(ipow(p, a / 2));
    if (unit_gauss.root_of_unity_exponent() < 0) throw std::logic_error("normalized Gauss sum is not a root of unity");

    // theta(pi)^2 = (-1/p) p^{k-1} Psi_p(-g_pi); only the sign of the unit part matters
    const i64 u_d = -R.ext()->d / p;  // pi^2 = d = p * (-u_d)
    int psi_term;
    if (cfg.reading == UniformizerReading::NormOfUniformizer)
        psi_term = psi.value_at_p * psi.on_unit(-u_d, p);
    else
        psi_term = psi.value_at_p * psi.on_unit(-1, p);
    const int u_sq = legendre(-1, p) * psi_term;
    const CycElt u = u_sq == 1 ? CycElt::integer(4, 1) : CycElt::zeta(4, 1);

    // Psi_p(-1 / p^n) = Psi'(p)^n Psi_p^{-1}(-1)
    const i64 sign = ((n % 2 == 1 && psi.value_at_p == -1) ? -1 : 1) * psi.on_unit(-1, p);
    CycElt upow = CycElt::integer(4, 1);
    for (int i = 0; i < a + 1; ++i) upow = upow * u;
    const CycElt lambda = upow * unit_gauss * sign;
    std::ostringstream tag;
    tag << "SCR,K=" << R.ext()->name() << ",n=" << n;
    return finish_pair(lambda, psi, p, tag.str());
}

LambdaPair scr_lambda_pair(const LocalTypeOrbit& orbit, const LambdaConfig& cfg) {
    if (orbit.kind != TypeKind::SCR) throw std::invalid_argument("scr_lambda_pair: SCR orbit expected");
    return scr_lambda_pair(CharacterVec(orbit.host, orbit.rep), orbit.psi, orbit.n, cfg);
}

LOTableEntry lo_table(i64 p, int n, const LocalNebentypus& psi) {
    require_valid_prime(p);
    const i64 m = odd_part(p + 1);
    if (n % 2 == 1 && n >= 3) return {(p == 3 && n >= 5) ? 4 : 2, true};
    if (psi.ramified) {
        if (n == 1) return {1, false};
        if (n == 2) return {p == 3 ? 1 : sigma0((p - 1) / 2) + sigma0(m) - 1, false};
        return {p == 3 ? 2 : sigma0((p - 1) / 2) + sigma0(m), false};
    }
    if (n == 1) return {psi.value_at_p == 1 ? 2 : 1, false};
    if (n == 2) return {p == 3 ? 3 : sigma0(p - 1) + sigma0(p + 1) - 2, false};
    return {p == 3 ? 5 : sigma0(p - 1) + sigma0(p + 1), false};
}

LOCount lo_count(i64 p, int n, const LocalNebentypus& psi, AsymPolicy policy, i64 param, const LambdaConfig& cfg) {
    require_valid_prime(p);
    if (n < 1) throw std::invalid_argument("n must be positive");
    LOCount out;
    out.p = p;
    out.n = n;
    out.psi = psi;
    out.policy = policy;
    const LOTableEntry row = lo_table(p, n, psi);
    if (policy == AsymPolicy::Computed) {
        auto en = enumerate_orbits(p, n, psi, EnumMode::Listing);
        out.lt_total = en.count.total();
        i64 sym = 0, asym = 0;
        for (const auto& o : en.orbits) {
            std::optional<LambdaPair> lp;
            if (o.kind == TypeKind::St && n == 1) lp = steinberg_lambda(psi, p);
            if (o.kind == TypeKind::SCR) lp = scr_lambda_pair(o, cfg);
            if (!lp) continue;
            (lp->verdict == Verdict::Symmetric ? sym : asym) += 1;
        }
        out.two_valued = sym + asym;
        out.s_sym = sym;
        out.s_asym = asym;
        out.lo_total = out.lt_total + asym;
        out.expression = std::to_string(*out.lo_total);
        return out;
    }
    out.lt_total = lt_closed_form(p, n, psi).total();
    if (!row.has_asym) {
        out.s_asym = 0;
        out.lo_total = row.base;
        out.expression = std::to_string(row.base);
        return out;
    }
    if (policy == AsymPolicy::Parameter) {
        if (param < 0) throw std::invalid_argument("|S_asym| must be non-negative");
        out.s_asym = param;
        out.lo_total = row.base + param;
        out.expression = std::to_string(row.base) + " + " + std::to_string(param);
        return out;
    }
    out.expression = std::to_string(row.base) + " + |S_asym|";
    return out;
}

LocalNebentypus default_local_nebentypus(i64 N, i64 p) {
    int v = 1;
    for (auto [q, e] : factorize(N))
        if (q != p) v *= legendre(p, q);
    return LocalNebentypus::tame(v);
}

BoundResult lo_lower_bound(i64 N, const std::map<i64, LocalNebentypus>& psi, AsymPolicy policy, i64 param,
                           bool strict, const LambdaConfig& cfg) {
    if (N < 2) throw std::invalid_argument("N must be at least 2");
    auto fac = factorize(N);
    BoundResult out;
    out.N = N;
    const bool composite = fac.size() > 1;
    for (auto [p, e] : fac) {
        if (p == 2) throw std::invalid_argument("levels divisible by 2 are not supported");
        if (composite && (e < 3 || e % 2 == 0)) {
            if (strict)
                throw HypothesisError("val_" + std::to_string(p) + "(N) = " + std::to_string(e) +
                                      " is not an odd exponent >= 3");
            out.conjectural = true;
        }
    }
    bool all_known = true;
    i64 value = 1;
    std::ostringstream expr;
    for (std::size_t i = 0; i < fac.size(); ++i) {
        auto [p, e] = fac[i];
        auto it = psi.find(p);
        LocalNebentypus lp = it != psi.end() ? it->second : default_local_nebentypus(N, p);
        LOCount lo = lo_count(p, e, lp, policy, param, cfg);
        if (lo.lo_total) value *= *lo.lo_total;
        else all_known = false;
        if (i) expr << " * ";
        const bool paren = fac.size() > 1 && lo.expression.find(' ') != std::string::npos;
        expr << (paren ? "(" : "") << lo.expression << (paren ? ")" : "");
        out.factors.push_back({p, e, std::move(lo)});
    }
    if (all_known) out.value = value;
    out.expression = all_known ? std::to_string(value) : expr.str();
    return out;
}

std::vector<ReadingCalibration> calibrate_readings(AdditiveSign sign) {
    std::vector<ReadingCalibration> out;
    const auto psi = LocalNebentypus::tame();
    auto en = enumerate_orbits(3, 3, psi, EnumMode::Listing);
    for (auto r : {UniformizerReading::NormOfUniformizer, UniformizerReading::UniformizerClass}) {
        ReadingCalibration c;
        c.reading = r;
        for (const auto& o : en.orbits) {
            if (o.kind != TypeKind::SCR) continue;
            auto lp = scr_lambda_pair(o, LambdaConfig{r, sign});
            c.pairs.push_back(lp.describe());
            c.verdicts.push_back(lp.verdict);
        }
        auto sorted = c.pairs;
        std::sort(sorted.begin(), sorted.end());
        bool all_sym = true;
        for (auto v : c.verdicts) all_sym = all_sym && v == Verdict::Symmetric;
        c.matches = sorted == std::vector<std::string>{"{+-1}", "{+-i}"} && all_sym;
        out.push_back(std::move(c));
    }
    return out;
}

UniformizerReading select_reading(const std::vector<ReadingCalibration>& cal) {
    for (const auto& c : cal)
        if (c.matches) return c.reading;
    throw std::runtime_error("no reading of Psi_p(-g_pi) reproduces the level-27 pairs");
}

}  // namespace galorb
