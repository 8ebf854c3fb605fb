#include "galorb/local_types.hpp"

#include <stdexcept>

namespace galorb {

std::string to_string(TypeKind k) {
    switch (k) {
        case TypeKind::PS: return "PS";
        case TypeKind::St: return "St";
        case TypeKind::SCU: return "SCU";
        case TypeKind::SCR: return "SCR";
    }
    return "?";
}

void require_valid_prime(i64 p) {
    if (p == 2) throw std::invalid_argument("p = 2 is not supported");
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
}

namespace {

IVec nebentypus_exps(const GroupPtr& GQ, const LocalNebentypus& psi) {
    return psi.ramified ? legendre_character(GQ).exps() : GQ->zero();
}

struct KindResult {
    std::vector<LocalTypeOrbit> orbits;
    i64 count = 0;
};

KindResult run(const CharacterCoset& S, const ExpFilter& keep, const OrbitAction& act, EnumMode mode,
               const LocalTypeOrbit& proto) {
    KindResult r;
    if (S.size() == 0) return r;
    if (mode == EnumMode::CountOnly) {
        r.count = count_orbits_parallel(S, keep, act).orbits;
        return r;
    }
    OrbitListing L = list_orbits(S, keep, act);
    for (std::size_t i = 0; i < L.representatives.size(); ++i) {
        LocalTypeOrbit o = proto;
        o.host = S.host;
        o.rep = L.representatives[i];
        if (proto.kind == TypeKind::PS) o.partner = *act.apply(*S.host, o.rep);
        o.orbit_size = L.sizes[i];
        r.orbits.push_back(std::move(o));
    }
    r.count = static_cast<i64>(r.orbits.size());
    return r;
}

}  // namespace

SupercuspidalFamily supercuspidal_family(const QuadExt& K, int a, const LocalNebentypus& psi) {
    auto G = unit_group(K.p, a, K);
    auto maps = structure_maps(G);
    auto ker = kernel(maps.norm);
    auto fiber = central_fiber(G, psi);
    const GroupPresentation* gp = G.get();
    ExpFilter keep = [gp, ker, a](const IVec& c) {
        if (conductor_of(*gp, c) != a) return false;
        for (const auto& row : ker.rows)
            if (pair_exps(*gp, c, reduce_vec(row, ker.moduli)) != 0) return true;
        return false;
    };
    return {K, G, maps, ker, fiber, keep, OrbitAction::conjugation(maps.conj)};
}

LTEnumeration enumerate_orbits(i64 p, int n, const LocalNebentypus& psi, EnumMode mode, i64 nonresidue) {
    require_valid_prime(p);
    if (n < 1) throw std::invalid_argument("n must be positive");
    LTEnumeration out;
    LocalTypeOrbit proto;
    proto.p = p;
    proto.n = n;
    proto.psi = psi;

    // principal series: chi_1 chi_2 = Psi^{-1} on units, a(chi_1) + a(chi_2) = n
    {
        auto G = unit_group(p, n);
        IVec center = nebentypus_exps(G, psi);
        const GroupPresentation* gp = G.get();
        ExpFilter keep = [gp, center, n](const IVec& c) {
            return conductor_of(*gp, c) + conductor_of(*gp, gp->add(center, gp->neg(c))) == n;
        };
        proto.kind = TypeKind::PS;
        auto r = run(all_characters(G), keep, OrbitAction::swap(center), mode, proto);
        out.count.ps = r.count;
        out.orbits.insert(out.orbits.end(), r.orbits.begin(), r.orbits.end());
    }
    // Steinberg twists: mu^2 = Psi^{-1} on units; n = 1 if mu unramified, else 2 a(mu)
    {
        auto G = unit_group(p, n);
        IVec target = nebentypus_exps(G, psi);
        const GroupPresentation* gp = G.get();
        ExpFilter keep = [gp, target, n](const IVec& c) {
            if (gp->scale(c, 2) != target) return false;
            const int a = conductor_of(*gp, c);
            return n == (a == 0 ? 1 : 2 * a);
        };
        proto.kind = TypeKind::St;
        auto r = run(all_characters(G), keep, OrbitAction::power(), mode, proto);
        out.count.st = r.count;
        out.orbits.insert(out.orbits.end(), r.orbits.begin(), r.orbits.end());
    }
    // unramified supercuspidal: n = 2 a(theta)
    if (n % 2 == 0) {
        auto fam = supercuspidal_family(QuadExt::unramified(p, nonresidue), n / 2, psi);
        proto.kind = TypeKind::SCU;
        proto.ext = fam.ext;
        auto r = run(fam.fiber, fam.keep, fam.action, mode, proto);
        out.count.scu = r.count;
        out.orbits.insert(out.orbits.end(), r.orbits.begin(), r.orbits.end());
    }
    // ramified supercuspidal: n = 1 + a(theta)
    const bool merged = n == 2 && !psi.ramified && p % 4 == 3;
    if (n >= 2 && !merged) {
        for (const QuadExt& K : {QuadExt::ramified_a(p), QuadExt::ramified_b(p, nonresidue)}) {
            auto fam = supercuspidal_family(K, n - 1, psi);
            proto.kind = TypeKind::SCR;
            proto.ext = fam.ext;
            auto r = run(fam.fiber, fam.keep, fam.action, mode, proto);
            out.count.scr += r.count;
            out.orbits.insert(out.orbits.end(), r.orbits.begin(), r.orbits.end());
        }
    }
    return out;
}

LTCount lt_closed_form(i64 p, int n, const LocalNebentypus& psi) {
    require_valid_prime(p);
    if (n < 1) throw std::invalid_argument("n must be positive");
    LTCount c;
    const i64 m = odd_part(p + 1);
    const bool one_mod_4 = p % 4 == 1;
    if (n % 2 == 1 && n >= 3) {
        c.scr = (p == 3 && n >= 5) ? 4 : 2;
        return c;
    }
    if (psi.ramified) {
        if (n == 1) {
            c.ps = 1;
        } else if (n == 2) {
            c.ps = sigma0((p - 1) / 2) - 1;
            c.st = one_mod_4 ? 1 : 0;
            c.scu = sigma0(m) - (one_mod_4 ? 1 : 0);
        } else {
            c.ps = sigma0((p - 1) / 2);
            c.scu = sigma0(m);
        }
    } else {
        if (n == 1) {
            c.st = 1;
        } else if (n == 2) {
            c.ps = sigma0(p - 1) - 1;
            c.st = 1;
            c.scu = sigma0(p + 1) - 2;
        } else {
            c.ps = sigma0(p - 1);
            c.scu = sigma0(p + 1);
        }
    }
    return c;
}

i64 primitive_orbit_count(i64 p, int n, const QuadExt& K, const LocalNebentypus& psi, bool parallel) {
    require_valid_prime(p);
    auto G = unit_group(p, n, K);
    auto maps = structure_maps(G);
    auto fiber = central_fiber(G, psi);
    const GroupPresentation* gp = G.get();
    ExpFilter keep = [gp, n](const IVec& c) { return conductor_of(*gp, c) == n; };
    auto act = OrbitAction::conjugation(maps.conj);
    return parallel ? count_orbits_parallel(fiber, keep, act).orbits : count_orbits_serial(fiber, keep, act).orbits;
}

i64 primitive_orbit_closed_form(i64 p, int n, const QuadExt& K, const LocalNebentypus& psi) {
    require_valid_prime(p);
    if (!K.ramified()) {
        if (psi.ramified) return sigma0(odd_part(p + 1));
        return n == 1 ? sigma0(p + 1) - 1 : sigma0(p + 1);
    }
    if (K.anomalous) {
        if (n == 1) return psi.ramified ? 0 : 1;
        if (n == 2) return 1;
        return n % 2 == 1 ? 0 : 3;
    }
    if (n == 1) return psi.ramified ? 0 : 1;
    return n % 2 == 1 ? 0 : 1;
}

i64 CrossCheckReport::discrepancies() const {
    i64 d = 0;
    for (const auto& c : cells) d += c.match() ? 0 : 1;
    return d;
}

CrossCheckReport cross_check(const std::vector<i64>& primes, int n_min, int n_max,
                             const std::vector<LocalNebentypus>& psis) {
    CrossCheckReport rep;
    for (i64 p : primes)
        for (int n = n_min; n <= n_max; ++n)
            for (const auto& psi : psis) {
                CrossCheckCell cell;
                cell.p = p;
                cell.n = n;
                cell.psi = psi;
                cell.brute = enumerate_orbits(p, n, psi, EnumMode::CountOnly).count;
                cell.closed = lt_closed_form(p, n, psi);
                if (!cell.match()) cell.offending = enumerate_orbits(p, n, psi, EnumMode::Listing).orbits;
                rep.cells.push_back(std::move(cell));
            }
    return rep;
}

}  // namespace galorb
