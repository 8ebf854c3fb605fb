#include <set>

#include "doctest.h"
#include "galorb/characters.hpp"

using namespace galorb;

TEST_CASE("legendre mod 7 takes value E/2 at 3") {
    auto G = unit_group(7, 1);
    auto chi = legendre_character(G);
    CHECK(chi.evaluate(G->ring().make(3)) == G->exponent() / 2);
    CHECK(chi.evaluate(G->ring().make(2)) == 0);
    CHECK(chi.order() == 2);
    CHECK(conductor(chi) == 1);
}

TEST_CASE("order-6 character mod 9 has conductor 2") {
    auto G = unit_group(3, 2);
    int found = 0;
    for (const auto& chi : all_characters(G).list()) {
        if (chi.order() != 6) continue;
        CHECK(conductor(chi) == 2);
        ++found;
    }
    CHECK(found == 2);
}

TEST_CASE("character arithmetic") {
    auto G = unit_group(5, 2, QuadExt::unramified(5));
    auto all = all_characters(G).list();
    CHECK(static_cast<i64>(all.size()) == G->order());
    const auto& a = all[7];
    const auto& b = all[123];
    for (const auto& x : G->ring().units()) {
        i64 e = G->exponent();
        CHECK((a * b).evaluate(x) == mod(a.evaluate(x) + b.evaluate(x), e));
        CHECK(a.inverse().evaluate(x) == mod(-a.evaluate(x), e));
        if (x.a % 7 == 0) break;
    }
    CHECK((a * a.inverse()).is_trivial());
    CHECK(a.pow(a.order()).is_trivial());
}

TEST_CASE("central fiber at unramified p=3 n=2") {
    auto G = unit_group(3, 2, QuadExt::unramified(3));
    for (auto psi : {LocalNebentypus::tame(), LocalNebentypus::unramified()}) {
        auto fib = central_fiber(G, psi);
        CHECK(fib.size() == 12);
        auto maps = structure_maps(G);
        auto target = restrict(fib.at(0), maps.embed);
        i64 filtered = 0;
        for (const auto& chi : all_characters(G).list())
            if (restrict(chi, maps.embed) == target) ++filtered;
        CHECK(filtered == 12);
        for (i64 i = 0; i < fib.size(); ++i) CHECK(fib.index_of(fib.exps_at(i)) == i);
    }
}

TEST_CASE("fiber size times embedded image is the group order") {
    for (i64 p : {3, 5, 7})
        for (int n = 1; n <= 4; ++n)
            for (const auto& K : QuadExt::all(p)) {
                auto G = unit_group(p, n, K);
                auto maps = structure_maps(G);
                auto fib = central_fiber(G, LocalNebentypus::tame());
                CAPTURE(p);
                CAPTURE(n);
                CHECK(fib.size() * image(maps.embed).order() == G->order());
            }
}

TEST_CASE("conductor is invariant under powers coprime to the order") {
    for (i64 p : {3, 5})
        for (int n = 1; n <= 3; ++n)
            for (const auto& K : QuadExt::all(p)) {
                auto G = unit_group(p, n, K);
                for (const auto& chi : all_characters(G).list()) {
                    i64 o = chi.order();
                    int c = conductor(chi);
                    for (i64 k = 2; k < o; ++k)
                        if (gcd(k, o) == 1) CHECK(conductor(chi.pow(k)) == c);
                }
            }
}

TEST_CASE("conductor by direct scan of principal units") {
    auto G = unit_group(3, 3, QuadExt::ramified_b(3));
    const auto& R = G->ring();
    for (const auto& chi : all_characters(G).list()) {
        int direct = 0;
        for (int j = R.level(); j >= 0; --j) {
            bool trivial = true;
            for (const auto& x : R.units())
                if (R.depth(x) >= j && chi.evaluate(x) != 0) trivial = false;
            if (!trivial) break;
            direct = j;
        }
        CHECK(conductor(chi) == direct);
    }
}

TEST_CASE("restriction along conjugation keeps the conductor") {
    for (int n = 1; n <= 4; ++n)
        for (const auto& K : QuadExt::all(3)) {
            auto G = unit_group(3, n, K);
            auto maps = structure_maps(G);
            for (const auto& chi : all_characters(G).list()) {
                auto c = restrict(chi, maps.conj);
                CHECK(conductor(c) == conductor(chi));
                CHECK(restrict(c, maps.conj) == chi);
            }
        }
}

TEST_CASE("pulling back along norm then embed squares") {
    for (i64 p : {3, 5})
        for (int n = 1; n <= 3; ++n)
            for (const auto& K : QuadExt::all(p)) {
                auto G = unit_group(p, n, K);
                auto maps = structure_maps(G);
                auto GQ = maps.norm.target;
                for (const auto& phi : all_characters(GQ).list()) {
                    auto theta = restrict(phi, maps.norm);
                    CHECK(restrict(theta, maps.embed) == phi.pow(2));
                    CHECK(factors_through_norm(theta, maps));
                }
            }
}

TEST_CASE("norm-factoring characters are exactly the pullbacks") {
    for (i64 p : {3, 5})
        for (int n = 1; n <= 3; ++n)
            for (const auto& K : QuadExt::all(p)) {
                auto G = unit_group(p, n, K);
                auto maps = structure_maps(G);
                std::set<IVec> pulled;
                for (const auto& phi : all_characters(maps.norm.target).list())
                    pulled.insert(restrict(phi, maps.norm).exps());
                i64 count = 0;
                for (const auto& chi : all_characters(G).list()) {
                    bool f = factors_through_norm(chi, maps);
                    CHECK(f == static_cast<bool>(pulled.count(chi.exps())));
                    count += f;
                }
                CHECK(count == image(maps.norm).order());
            }
}

TEST_CASE("orbit partition of characters mod 7") {
    auto G = unit_group(7, 1);
    auto all = all_characters(G).list();
    auto orbits = orbit_partition(all, false, nullptr);
    // one orbit per divisor of 6
    CHECK(orbits.size() == 4);
    std::multiset<std::size_t> sizes;
    for (auto& o : orbits) sizes.insert(o.size());
    CHECK(sizes == std::multiset<std::size_t>{1, 1, 2, 2});

    std::vector<CharacterVec> not_closed{all[1]};
    CHECK_THROWS_AS(orbit_partition(not_closed, false, nullptr), std::invalid_argument);
}

TEST_CASE("orbit partition with conjugation") {
    auto G = unit_group(3, 1, QuadExt::unramified(3));
    auto maps = structure_maps(G);
    auto all = all_characters(G).list();
    auto plain = orbit_partition(all, false, nullptr);
    auto with_conj = orbit_partition(all, true, &maps.conj);
    CHECK(plain.size() == 4);  // divisors of 8
    CHECK(with_conj.size() <= plain.size());
    std::size_t total = 0;
    for (auto& o : with_conj) total += o.size();
    CHECK(total == all.size());
}
