#pragma once
// Small integer number theory on 64-bit words.
#include <cstdint>
#include <utility>
#include <vector>

namespace galorb {

using i64 = std::int64_t;
using i128 = __int128;

inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}
inline i64 mulmod(i64 a, i64 b, i64 m) { return mod(static_cast<i64>(static_cast<i128>(a) * b % m), m); }
inline i64 addmod(i64 a, i64 b, i64 m) { return mod(a + b, m); }

i64 powmod(i64 a, i64 e, i64 m);
i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
i64 ipow(i64 b, int e);

// returns g = gcd(a,b) with s*a + t*b = g
i64 ext_gcd(i64 a, i64 b, i64& s, i64& t);
// throws std::domain_error when not invertible
i64 inv_mod(i64 a, i64 m);

bool is_prime(i64 n);
std::vector<std::pair<i64, int>> factorize(i64 n);
std::vector<i64> divisors(i64 n);
i64 sigma0(i64 n);
i64 euler_phi(i64 n);
int moebius(i64 n);
// p-adic valuation, capped at cap when a == 0
int valuation(i64 a, i64 p, int cap = 64);
// (a/p) in {-1, 0, 1}
int legendre(i64 a, i64 p);
i64 smallest_nonresidue(i64 p);
i64 odd_part(i64 n);

// x = r1 mod m1, x = r2 mod m2 with arbitrary moduli; false if incompatible
bool crt(i64 r1, i64 m1, i64 r2, i64 m2, i64& r, i64& m);

}  // namespace galorb
