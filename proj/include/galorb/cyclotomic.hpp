#pragma once
// Exact arithmetic in Z[zeta_L].
#include <string>
#include <vector>

#include "galorb/arith.hpp"

namespace galorb {

// Canonical form: remainder modulo the L-th cyclotomic polynomial, length phi(L).
class CycElt {
public:
    CycElt() : CycElt(1) {}
    explicit CycElt(i64 level);

    static CycElt integer(i64 level, i64 n);
    static CycElt zeta(i64 level, i64 k);
    // sum of hist[k] zeta_L^k
    static CycElt from_exponents(i64 level, const std::vector<i64>& hist);

    i64 level() const { return L_; }
    const std::vector<i64>& coeffs() const { return c_; }
    bool is_zero() const;
    // as an element of Z[zeta_M], L | M
    CycElt lift(i64 M) const;

    CycElt operator+(const CycElt& o) const;
    CycElt operator-(const CycElt& o) const;
    CycElt operator-() const;
    CycElt operator*(const CycElt& o) const;
    CycElt operator*(i64 k) const;
    CycElt conj() const { return galois_apply(-1); }
    // zeta_L -> zeta_L^a, gcd(a, L) = 1
    CycElt galois_apply(i64 a) const;
    // exact division by an integer; throws std::domain_error if not exact
    CycElt divide_exact(i64 k) const;
    // k with this = zeta_M^k for M = lcm(L, 2), or -1 if not a root of unity
    i64 root_of_unity_exponent() const;

    bool operator==(const CycElt& o) const;
    bool operator!=(const CycElt& o) const { return !(*this == o); }
    std::string to_string() const;

private:
    i64 L_;
    std::vector<i64> c_;
};

// coefficients of Phi_L, constant term first
const std::vector<i64>& cyclotomic_polynomial(i64 L);

}  // namespace galorb
