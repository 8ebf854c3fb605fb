#include "doctest.h"
#include "galorb/local_types.hpp"

using namespace galorb;

namespace {
const std::vector<LocalNebentypus> kPsis{LocalNebentypus::tame(1), LocalNebentypus::tame(-1),
                                         LocalNebentypus::unramified(1), LocalNebentypus::unramified(-1)};
}

TEST_CASE("parallel and serial orbit counts agree on supercuspidal families") {
    for (i64 p : {3, 5, 7})
        for (int a = 1; a <= 4; ++a)
            for (const auto& K : QuadExt::all(p))
                for (const auto& psi : {kPsis[0], kPsis[2]}) {
                    if (K.ramified() && a > 5) continue;
                    auto fam = supercuspidal_family(K, a, psi);
                    if (fam.fiber.size() > 50000) continue;
                    CAPTURE(p);
                    CAPTURE(a);
                    auto par = count_orbits_parallel(fam.fiber, fam.keep, fam.action);
                    auto ser = count_orbits_serial(fam.fiber, fam.keep, fam.action);
                    CHECK(par == ser);
                    auto listing = list_orbits(fam.fiber, fam.keep, fam.action);
                    CHECK(static_cast<i64>(listing.representatives.size()) == ser.orbits);
                    i64 members = 0;
                    for (std::size_t i = 0; i < listing.sizes.size(); ++i) {
                        members += listing.sizes[i];
                        CHECK(listing.sizes[i] ==
                              orbit_size(*fam.group, listing.representatives[i], fam.action));
                    }
                    CHECK(members == ser.members);
                }
}

TEST_CASE("power orbit membership") {
    auto G = unit_group(7, 1);
    IVec c{1};
    CHECK(in_power_orbit(*G, c, IVec{5}));
    CHECK_FALSE(in_power_orbit(*G, c, IVec{2}));
    CHECK(orbit_size(*G, c, OrbitAction::power()) == 2);
}

TEST_CASE("closed forms for small cells") {
    CHECK(lt_closed_form(5, 2, LocalNebentypus::tame()).total() == 3);
    CHECK(lt_closed_form(3, 5, LocalNebentypus::tame()).scr == 4);
    CHECK(lt_closed_form(3, 3, LocalNebentypus::tame()).total() == 2);
}

TEST_CASE("enumeration matches closed forms on a small grid") {
    auto report = cross_check({3, 5, 7}, 1, 4, kPsis);
    for (const auto& cell : report.cells) {
        CAPTURE(cell.p);
        CAPTURE(cell.n);
        CAPTURE(cell.psi.describe());
        CHECK(cell.match());
        CHECK(cell.offending.empty());
    }
    CHECK(report.ok());
}

TEST_CASE("primitive orbit counts match closed forms") {
    for (i64 p : {3, 5, 7})
        for (int n = 1; n <= 4; ++n)
            for (const auto& K : QuadExt::all(p))
                for (const auto& psi : {kPsis[0], kPsis[2]}) {
                    CAPTURE(p);
                    CAPTURE(n);
                    CAPTURE(K.name());
                    CHECK(primitive_orbit_count(p, n, K, psi, true) == primitive_orbit_closed_form(p, n, K, psi));
                    CHECK(primitive_orbit_count(p, n, K, psi, false) == primitive_orbit_count(p, n, K, psi, true));
                }
}

TEST_CASE("listing and count-only modes agree") {
    for (int n = 1; n <= 4; ++n) {
        auto a = enumerate_orbits(5, n, LocalNebentypus::tame(), EnumMode::Listing);
        auto b = enumerate_orbits(5, n, LocalNebentypus::tame(), EnumMode::CountOnly);
        CHECK(a.count == b.count);
        CHECK(static_cast<i64>(a.orbits.size()) == a.count.total());
    }
}

TEST_CASE("counts do not depend on the chosen nonresidue") {
    // 13: smallest nonresidue 2, also 5
    for (int n = 1; n <= 3; ++n)
        for (const auto& psi : kPsis)
            CHECK(enumerate_orbits(13, n, psi, EnumMode::CountOnly, 0).count ==
                  enumerate_orbits(13, n, psi, EnumMode::CountOnly, 5).count);
}

TEST_CASE("steinberg needs a square root of the nebentypus") {
    auto e = enumerate_orbits(5, 1, LocalNebentypus::unramified(1));
    CHECK(e.count.st >= 1);
    auto t = enumerate_orbits(5, 1, LocalNebentypus::tame(1));
    CHECK(t.count.st == 0);
    CHECK(enumerate_orbits(5, 2, LocalNebentypus::tame(1)).count.st == 1);
}

TEST_CASE("invalid primes") {
    CHECK_THROWS_AS(require_valid_prime(2), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_orbits(2, 1, LocalNebentypus::tame()), std::invalid_argument);
    CHECK_THROWS_AS(lt_closed_form(9, 1, LocalNebentypus::tame()), std::invalid_argument);
}
