#include <random>
#include <stdexcept>

#include "doctest.h"
#include "galorb/cyclotomic.hpp"

using namespace galorb;

namespace {
CycElt random_elt(i64 L, std::mt19937_64& rng) {
    std::vector<i64> h(L);
    for (auto& x : h) x = static_cast<i64>(rng() % 7) - 3;
    return CycElt::from_exponents(L, h);
}
}  // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(1) == std::vector<i64>{-1, 1});
    CHECK(cyclotomic_polynomial(4) == std::vector<i64>{1, 0, 1});
    CHECK(cyclotomic_polynomial(6) == std::vector<i64>{1, -1, 1});
    CHECK(cyclotomic_polynomial(12) == std::vector<i64>{1, 0, -1, 0, 1});
    for (i64 L = 1; L <= 60; ++L) CHECK(static_cast<i64>(cyclotomic_polynomial(L).size()) == euler_phi(L) + 1);
}

TEST_CASE("basic identities") {
    CHECK(CycElt::zeta(3, 1) + CycElt::zeta(3, 2) == CycElt::integer(3, -1));
    CHECK(CycElt::zeta(4, 1) * CycElt::zeta(4, 1) == CycElt::integer(4, -1));
    CycElt s(5);
    for (int k = 0; k < 5; ++k) s = s + CycElt::zeta(5, k);
    CHECK(s.is_zero());
    auto a = CycElt::zeta(5, 1) + CycElt::zeta(5, 4);
    auto b = CycElt::zeta(5, 2) + CycElt::zeta(5, 3);
    CHECK(a.galois_apply(2) == b);
    CHECK(a + b == CycElt::integer(5, -1));
    CHECK(a * b == CycElt::integer(5, -1));
    CHECK_THROWS_AS(a.galois_apply(5), std::invalid_argument);
}

TEST_CASE("ring homomorphism laws") {
    std::mt19937_64 rng(7);
    for (i64 L : {3, 4, 5, 8, 9, 12, 15, 20, 24, 27, 36}) {
        for (int t = 0; t < 20; ++t) {
            auto x = random_elt(L, rng), y = random_elt(L, rng);
            CHECK((x + y) - y == x);
            CHECK(x * y == y * x);
            for (i64 a = 1; a < L; ++a) {
                if (gcd(a, L) != 1) continue;
                CHECK((x * y).galois_apply(a) == x.galois_apply(a) * y.galois_apply(a));
                CHECK((x + y).galois_apply(a) == x.galois_apply(a) + y.galois_apply(a));
                for (i64 b = 1; b < L; b += 3)
                    if (gcd(b, L) == 1)
                        CHECK(x.galois_apply(a).galois_apply(b) == x.galois_apply(mod(a * b, L)));
            }
            CHECK(x.conj().conj() == x);
            CHECK(x.lift(2 * L).galois_apply(2 * L - 1) == x.conj().lift(2 * L));
            CHECK((x * 6).divide_exact(3) == x * 2);
        }
    }
}

TEST_CASE("lifting is a ring map") {
    std::mt19937_64 rng(11);
    for (i64 L : {3, 4, 6, 10}) {
        auto x = random_elt(L, rng), y = random_elt(L, rng);
        i64 M = 3 * L;
        CHECK((x * y).lift(M) == x.lift(M) * y.lift(M));
        CHECK(CycElt::zeta(L, 1).lift(M) == CycElt::zeta(M, 3));
    }
}

TEST_CASE("roots of unity are recognized") {
    for (i64 L : {1, 3, 4, 5, 9, 12}) {
        i64 M = lcm(L, 2);
        for (i64 k = 0; k < L; ++k) {
            CHECK(CycElt::zeta(L, k).root_of_unity_exponent() == mod(k * (M / L), M));
            CHECK((-CycElt::zeta(L, k)).root_of_unity_exponent() == mod(k * (M / L) + M / 2, M));
        }
    }
    CHECK((CycElt::zeta(5, 1) + CycElt::zeta(5, 2)).root_of_unity_exponent() == -1);
    CHECK(CycElt::integer(4, 2).root_of_unity_exponent() == -1);
}

TEST_CASE("exact division") {
    CHECK_THROWS_AS(CycElt::zeta(5, 1).divide_exact(2), std::domain_error);
    CHECK(CycElt::integer(3, 9).divide_exact(3) == CycElt::integer(3, 3));
}

TEST_CASE("rendering") {
    CHECK(CycElt::integer(6, 0).to_string() == "0");
    CHECK((CycElt::zeta(3, 1) - CycElt::zeta(3, 2)).lift(6).to_string() == "-1 + 2*z6");
}
