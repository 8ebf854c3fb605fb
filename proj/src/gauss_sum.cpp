#include "galorb/gauss_sum.hpp"

#include <omp.h>

#include <stdexcept>

namespace galorb {

i64 additive_level(const ResidueRing& R) {
    if (!R.ramified()) return R.mod_a();
    // c = pi^{a+1}: Tr(x / c) has denominator p^s with s = floor((a+1)/2)
    return ipow(R.p(), (R.level() + 1) / 2);
}

i64 additive_exponent(const ResidueRing& R, const RingElt& x, AdditiveSign sign) {
    const i64 P = additive_level(R);
    const i64 sg = static_cast<i64>(sign);
    if (R.rational()) return mod(sg * x.a, P);
    if (!R.ramified()) return mod(sg * 2 * x.a, P);
    // d = -p u; Tr(x / pi^{a+1}) = 2 (A or B) / (-u)^s p^s
    const i64 p = R.p();
    const int t = R.level() + 1;
    const int s = t / 2;
    if (P == 1) return 0;
    const i64 u = -R.ext()->d / p;
    const i64 w = inv_mod(powmod(mod(-u, P), s, P), P);
    const i64 coord = t % 2 == 0 ? x.a : x.b;
    return mod(sg * mulmod(mod(2 * coord, P), w, P), P);
}

i64 gauss_sum_level(const GroupPresentation& G) { return lcm(G.exponent(), additive_level(G.ring())); }

namespace {

void check_primitive(const CharacterVec& theta) {
    const auto& G = *theta.host();
    const int a = conductor(theta);
    if (a != G.level() && !(G.level() == 1 && a == 0)) throw std::invalid_argument("gauss_sum: character not primitive at its level");
}

inline void accumulate(const CharacterVec& theta, const RingElt& x, AdditiveSign sign, i64 L, i64 E, i64 P,
                       std::vector<i64>& hist) {
    const auto& G = *theta.host();
    const i64 t = theta.evaluate(x);
    const i64 a = additive_exponent(G.ring(), x, sign);
    const i64 k = mod(-t * (L / E) + a * (L / P), L);
    ++hist[k];
}

}  // namespace

namespace kernels {

std::vector<i64> gauss_histogram_serial(const CharacterVec& theta, AdditiveSign sign) {
    check_primitive(theta);
    const auto& G = *theta.host();
    const auto& R = G.ring();
    const i64 E = G.exponent(), P = additive_level(R), L = gauss_sum_level(G);
    std::vector<i64> hist(L, 0);
    for (i64 a = 0; a < R.mod_a(); ++a)
        for (i64 b = 0; b < R.mod_b(); ++b) {
            RingElt x{a, b};
            if (R.is_unit(x)) accumulate(theta, x, sign, L, E, P, hist);
        }
    return hist;
}

std::vector<i64> gauss_histogram_parallel(const CharacterVec& theta, AdditiveSign sign) {
    check_primitive(theta);
    const auto& G = *theta.host();
    const auto& R = G.ring();
    const i64 E = G.exponent(), P = additive_level(R), L = gauss_sum_level(G);
    const std::size_t r = G.rank();
    const IVec& ord = G.orders();
    const auto& gens = G.generators();
    // pairing increments per generator and the additive map as a linear form in (a, b)
    IVec step(r);
    for (std::size_t i = 0; i < r; ++i) step[i] = mod(theta.exps()[i] * (E / ord[i]), E);
    const i64 sg = static_cast<i64>(sign);
    i64 ca = 0, cb = 0;
    if (R.rational()) ca = sg;
    else if (!R.ramified()) ca = 2 * sg;
    else if (P > 1) {
        const int t = R.level() + 1;
        const i64 u = -R.ext()->d / R.p();
        const i64 w = mod(2 * sg * inv_mod(powmod(mod(-u, P), t / 2, P), P), P);
        (t % 2 == 0 ? ca : cb) = w;
    }
    const i64 total = G.order();
    const i64 fL = L / E, gL = L / P;
    std::vector<std::vector<i64>> local(omp_get_max_threads(), std::vector<i64>(L, 0));
#pragma omp parallel
    {
        auto& hist = local[omp_get_thread_num()];
        const int nt = omp_get_num_threads(), id = omp_get_thread_num();
        const i64 begin = total * id / nt, end = total * (id + 1) / nt;
        if (begin < end) {
            // mixed-radix walk, coordinate 0 fastest; prefix[j] = prod_{i >= j} g_i^{e_i}
            IVec e(r);
            i64 rest = begin;
            for (std::size_t i = 0; i < r; ++i) {
                e[i] = rest % ord[i];
                rest /= ord[i];
            }
            std::vector<RingElt> prefix(r + 1, R.one());
            IVec tpre(r + 1, 0);
            for (std::size_t j = r; j-- > 0;) {
                prefix[j] = R.mul(prefix[j + 1], R.pow(gens[j], e[j]));
                tpre[j] = mod(tpre[j + 1] + step[j] * e[j], E);
            }
            for (i64 idx = begin; idx < end; ++idx) {
                const RingElt& x = prefix[0];
                const i64 add = mod(mulmod(mod(x.a, P), ca, P) + mulmod(mod(x.b, P), cb, P), P);
                ++hist[mod(-tpre[0] * fL + add * gL, L)];
                // advance
                std::size_t j = 0;
                while (j < r && e[j] + 1 == ord[j]) ++j;
                if (j == r) break;
                ++e[j];
                prefix[j] = R.mul(prefix[j], gens[j]);
                tpre[j] = mod(tpre[j] + step[j], E);
                for (std::size_t i = j; i-- > 0;) {
                    e[i] = 0;
                    prefix[i] = prefix[j];
                    tpre[i] = tpre[j];
                }
            }
        }
    }
    std::vector<i64> hist(L, 0);
    for (const auto& h : local)
        for (i64 k = 0; k < L; ++k) hist[k] += h[k];
    return hist;
}

}  // namespace kernels

CycElt gauss_sum(const CharacterVec& theta, GaussParams params, bool parallel) {
    const i64 L = gauss_sum_level(*theta.host());
    auto hist = parallel ? kernels::gauss_histogram_parallel(theta, params.sign)
                         : kernels::gauss_histogram_serial(theta, params.sign);
    return CycElt::from_exponents(L, hist);
}

}  // namespace galorb
