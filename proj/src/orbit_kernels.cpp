#include "galorb/orbit_kernels.hpp"

#include <omp.h>

#include <stdexcept>
#include <vector>

namespace galorb {

OrbitAction OrbitAction::conjugation(const HomMatrix& conj) {
    if (conj.source != conj.target) throw std::invalid_argument("conjugation must be an endomorphism");
    OrbitAction a;
    a.kind = Kind::Conjugation;
    a.conj_columns = conj.columns;
    return a;
}

OrbitAction OrbitAction::swap(IVec center) {
    OrbitAction a;
    a.kind = Kind::Swap;
    a.swap_center = std::move(center);
    return a;
}

std::optional<IVec> OrbitAction::apply(const GroupPresentation& G, const IVec& c) const {
    switch (kind) {
        case Kind::Power:
            return std::nullopt;
        case Kind::Swap:
            return G.add(swap_center, G.neg(c));
        case Kind::Conjugation: {
            const i64 e = G.exponent();
            IVec out(G.rank());
            for (std::size_t j = 0; j < G.rank(); ++j) {
                const i64 s = pair_exps(G, c, conj_columns[j]);
                out[j] = static_cast<i64>(static_cast<i128>(s) * G.orders()[j] / e);
            }
            return out;
        }
    }
    return std::nullopt;
}

bool in_power_orbit(const GroupPresentation& G, const IVec& c, const IVec& d) {
    const auto& m = G.orders();
    i64 k = 0, M = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const i64 g = gcd(c[i], m[i]);
        if (d[i] % g != 0) return false;
        const i64 mi = m[i] / g;
        if (mi == 1) continue;
        const i64 ki = mulmod(d[i] / g, inv_mod(c[i] / g, mi), mi);
        i64 r, mm;
        if (!crt(k, M, ki, mi, r, mm)) return false;
        k = r;
        M = mm;
    }
    return gcd(k, M) == 1;
}

i64 orbit_size(const GroupPresentation& G, const IVec& c, const OrbitAction& act) {
    const i64 base = euler_phi(G.element_order(c));
    auto img = act.apply(G, c);
    if (!img || in_power_orbit(G, c, *img)) return base;
    return base + euler_phi(G.element_order(*img));
}

OrbitTally count_orbits_parallel(const CharacterCoset& S, const ExpFilter& keep, const OrbitAction& act) {
    OrbitTally out;
    const i64 N = S.size();
    if (N == 0) return out;
    const GroupPresentation& G = *S.host;
    std::vector<std::map<i64, i64>> local(omp_get_max_threads());
#pragma omp parallel
    {
        auto& hist = local[omp_get_thread_num()];
#pragma omp for schedule(dynamic, 4096)
        for (i64 idx = 0; idx < N; ++idx) {
            IVec c = S.exps_at(idx);
            if (!keep(c)) continue;
            ++hist[orbit_size(G, c, act)];
        }
    }
    std::map<i64, i64> members;
    for (const auto& h : local)
        for (auto [s, cnt] : h) members[s] += cnt;
    for (auto [s, cnt] : members) {
        if (cnt % s != 0) throw std::logic_error("orbit sizes inconsistent: set not closed under the action");
        out.by_size[s] = cnt / s;
        out.orbits += cnt / s;
        out.members += cnt;
    }
    return out;
}

OrbitListing list_orbits(const CharacterCoset& S, const ExpFilter& keep, const OrbitAction& act) {
    OrbitListing out;
    const i64 N = S.size();
    const GroupPresentation& G = *S.host;
    std::vector<bool> visited(N, false);
    auto mark_power_orbit = [&](const IVec& c) {
        const i64 o = G.element_order(c);
        i64 fresh = 0;
        IVec cur = G.zero();
        for (i64 k = 1; k <= o; ++k) {
            cur = G.add(cur, c);
            if (gcd(k, o) != 1) continue;
            auto idx = S.index_of(cur);
            if (!idx) throw std::invalid_argument("orbit leaves the character set");
            if (!keep(cur)) throw std::invalid_argument("filter is not invariant under the action");
            if (!visited[*idx]) {
                visited[*idx] = true;
                ++fresh;
            }
        }
        return fresh;
    };
    for (i64 idx = 0; idx < N; ++idx) {
        if (visited[idx]) continue;
        IVec c = S.exps_at(idx);
        if (!keep(c)) continue;
        i64 size = mark_power_orbit(c);
        if (auto img = act.apply(G, c)) size += mark_power_orbit(*img);
        out.representatives.push_back(c);
        out.sizes.push_back(size);
    }
    return out;
}

OrbitTally count_orbits_serial(const CharacterCoset& S, const ExpFilter& keep, const OrbitAction& act) {
    OrbitListing L = list_orbits(S, keep, act);
    OrbitTally out;
    for (i64 s : L.sizes) {
        ++out.by_size[s];
        ++out.orbits;
        out.members += s;
    }
    return out;
}

}  // namespace galorb
