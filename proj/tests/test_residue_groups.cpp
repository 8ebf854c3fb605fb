#include <random>
#include <set>

#include "doctest.h"
#include "galorb/residue_groups.hpp"

using namespace galorb;

namespace {

std::vector<std::optional<QuadExt>> ambient_cases(i64 p) {
    std::vector<std::optional<QuadExt>> v{std::nullopt};
    for (auto& e : QuadExt::all(p)) v.push_back(e);
    return v;
}

RingElt random_unit(const ResidueRing& R, std::mt19937_64& rng) {
    while (true) {
        RingElt x{static_cast<i64>(rng() % R.mod_a()), static_cast<i64>(rng() % R.mod_b())};
        if (R.is_unit(x)) return x;
    }
}

i64 closed_form_order(i64 p, int n, const std::optional<QuadExt>& e) {
    if (e && !e->ramified()) return (p * p - 1) * ipow(p, 2 * (n - 1));
    return (p - 1) * ipow(p, n - 1);
}

}  // namespace

TEST_CASE("unit group shapes") {
    CHECK(unit_group(5, 3, QuadExt::unramified(5))->orders() == IVec{24, 25, 25});
    auto g = unit_group(5, 1);
    CHECK(g->orders() == IVec{4});
    CHECK(g->generators()[0].a == 2);
    CHECK(unit_group(3, 4, QuadExt::ramified_a(3))->orders() == IVec{2, 3, 3, 3});
    CHECK(unit_group(3, 1, QuadExt::ramified_a(3))->orders() == IVec{2});
    CHECK(unit_group(3, 7, QuadExt::ramified_a(3))->orders() == IVec{2, 3, 9, 27});
    CHECK(unit_group(7, 4, QuadExt::ramified_b(7))->orders() == IVec{6, 49, 7});
}

TEST_CASE("bad parameters are rejected") {
    CHECK_THROWS_AS(unit_group(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(unit_group(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(unit_group(9, 2), std::invalid_argument);
}

TEST_CASE("group order and dlog round trip over the grid") {
    std::mt19937_64 rng(20240611);
    for (i64 p : {3, 5, 7, 11, 13})
        for (int n = 1; n <= 6; ++n)
            for (const auto& e : ambient_cases(p)) {
                auto G = unit_group(p, n, e);
                CAPTURE(p);
                CAPTURE(n);
                CHECK(G->order() == closed_form_order(p, n, e));
                CHECK(G->dlog(G->ring().one()) == G->zero());
                for (std::size_t i = 0; i < G->rank(); ++i) CHECK(G->dlog(G->generators()[i]) == G->unit_vector(i));
                for (int t = 0; t < 1000; ++t) {
                    RingElt x = random_unit(G->ring(), rng);
                    IVec v = G->dlog(x);
                    REQUIRE(G->exp(v) == x);
                }
            }
}

TEST_CASE("dlog is a bijection on a small group") {
    auto G = unit_group(3, 3, QuadExt::unramified(3));
    auto units = G->ring().units();
    CHECK(static_cast<i64>(units.size()) == G->order());
    std::set<IVec> seen;
    for (auto& u : units) seen.insert(G->dlog(u));
    CHECK(static_cast<i64>(seen.size()) == G->order());
}

TEST_CASE("dlog rejects non-units") {
    auto G = unit_group(5, 2);
    CHECK_THROWS_AS(G->dlog(RingElt{5, 0}), std::domain_error);
    CHECK_THROWS_AS(G->dlog(RingElt{30, 0}), std::invalid_argument);
}

TEST_CASE("filtration subgroups") {
    auto Q = unit_group(7, 2);
    CHECK(Q->filtration_subgroup(1).order() == 7);
    CHECK(Q->filtration_subgroup(2).order() == 1);
    CHECK(unit_group(3, 2, QuadExt::unramified(3))->filtration_subgroup(1).order() == 9);
    for (i64 p : {3, 5, 7})
        for (int n = 1; n <= 5; ++n)
            for (const auto& e : ambient_cases(p)) {
                auto G = unit_group(p, n, e);
                CHECK(G->filtration_subgroup(0).order() == G->order());
                CHECK(G->filtration_subgroup(n).order() == 1);
                const i64 q = (e && !e->ramified()) ? p * p : p;
                for (int j = 1; j < n; ++j)
                    CHECK(G->filtration_subgroup(j).order() == q * G->filtration_subgroup(j + 1).order());
                // U^j counted by brute force
                if (G->order() > 100000) continue;
                for (int j = 1; j <= n; ++j) {
                    i64 cnt = 0;
                    for (auto& u : G->ring().units())
                        if (G->ring().depth(u) >= j) ++cnt;
                    CHECK(cnt == G->filtration_subgroup(j).order());
                }
            }
    CHECK_THROWS_AS(Q->filtration(3), std::out_of_range);
}

TEST_CASE("structure maps") {
    std::mt19937_64 rng(7);
    for (i64 p : {3, 5, 7, 11})
        for (int n = 1; n <= 5; ++n)
            for (auto& e : QuadExt::all(p)) {
                auto GK = unit_group(p, n, e);
                auto GQ = unit_group(p, rational_level(GK->ring()));
                auto S = structure_maps(GK, GQ);
                auto cc = compose(S.conj, S.conj);
                for (std::size_t i = 0; i < GK->rank(); ++i) CHECK(cc.columns[i] == GK->unit_vector(i));
                auto ne = compose(S.norm, S.embed);
                for (std::size_t i = 0; i < GQ->rank(); ++i) CHECK(ne.columns[i] == GQ->scale(GQ->unit_vector(i), 2));
                for (int t = 0; t < 50; ++t) {
                    RingElt x = random_unit(GK->ring(), rng);
                    RingElt y = random_unit(GK->ring(), rng);
                    IVec vx = GK->dlog(x), vy = GK->dlog(y);
                    CHECK(S.norm.apply(GK->add(vx, vy)) == GQ->add(S.norm.apply(vx), S.norm.apply(vy)));
                    CHECK(S.norm.apply(vx) == GQ->dlog(GQ->ring().make(GK->ring().norm(x))));
                    CHECK(S.conj.apply(vx) == GK->dlog(GK->ring().conj(x)));
                }
                // norm is onto the units (unramified) or onto the squares (ramified)
                const i64 img = image(S.norm).order();
                CHECK(img == (e.ramified() ? GQ->order() / 2 : GQ->order()));
                CHECK(kernel(S.norm).order() * img == GK->order());
            }
    auto GK = unit_group(5, 1, QuadExt::unramified(5));
    auto S = structure_maps(GK);
    CHECK(kernel(S.norm).order() == 6);
    CHECK(image(S.norm).order() == 4);
    CHECK_THROWS_AS(structure_maps(GK, unit_group(5, 2)), std::invalid_argument);
}

TEST_CASE("isomorphic models: second non-residue") {
    auto G1 = unit_group(7, 3, QuadExt::unramified(7));
    auto G2 = unit_group(7, 3, QuadExt::unramified(7, 5));
    CHECK(G1->orders() == G2->orders());
    auto A2 = unit_group(3, 5, QuadExt::ramified_a(3, 2));
    CHECK(A2->orders() == unit_group(3, 5, QuadExt::ramified_a(3))->orders());
}
