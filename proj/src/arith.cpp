#include "galorb/arith.hpp"

#include <stdexcept>

namespace galorb {

i64 powmod(i64 a, i64 e, i64 m) {
    if (m == 1) return 0;
    i64 r = 1;
    a = mod(a, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 gcd(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 lcm(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd(a, b) * b;
}

i64 ipow(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

i64 ext_gcd(i64 a, i64 b, i64& s, i64& t) {
    i64 s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        i64 q = a / b;
        i64 r = a - q * b;
        a = b;
        b = r;
        i64 ns = s0 - q * s1;
        s0 = s1;
        s1 = ns;
        i64 nt = t0 - q * t1;
        t0 = t1;
        t1 = nt;
    }
    if (a < 0) {
        a = -a;
        s0 = -s0;
        t0 = -t0;
    }
    s = s0;
    t = t0;
    return a;
}

i64 inv_mod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 s, t;
    i64 g = ext_gcd(mod(a, m), m, s, t);
    if (g != 1) throw std::domain_error("inv_mod: not invertible");
    return mod(s, m);
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
    std::vector<std::pair<i64, int>> f;
    if (n < 0) n = -n;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        f.emplace_back(d, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

std::vector<i64> divisors(i64 n) {
    std::vector<i64> out{1};
    for (auto [q, e] : factorize(n)) {
        std::size_t sz = out.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= q;
            for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
        }
    }
    return out;
}

i64 sigma0(i64 n) {
    i64 r = 1;
    for (auto [q, e] : factorize(n)) r *= e + 1;
    return r;
}

i64 euler_phi(i64 n) {
    i64 r = n;
    for (auto [q, e] : factorize(n)) r = r / q * (q - 1);
    return r;
}

int moebius(i64 n) {
    int r = 1;
    for (auto [q, e] : factorize(n)) {
        if (e > 1) return 0;
        r = -r;
    }
    return r;
}

int valuation(i64 a, i64 p, int cap) {
    if (a == 0) return cap;
    int v = 0;
    while (a % p == 0 && v < cap) {
        a /= p;
        ++v;
    }
    return v;
}

int legendre(i64 a, i64 p) {
    a = mod(a, p);
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

i64 smallest_nonresidue(i64 p) {
    for (i64 a = 2; a < p; ++a)
        if (legendre(a, p) == -1) return a;
    throw std::domain_error("no quadratic non-residue");
}

i64 odd_part(i64 n) {
    while (n % 2 == 0) n /= 2;
    return n;
}

bool crt(i64 r1, i64 m1, i64 r2, i64 m2, i64& r, i64& m) {
    i64 s, t;
    i64 g = ext_gcd(m1, m2, s, t);
    if (mod(r2 - r1, g) != 0) return false;
    i64 l = m1 / g * m2;
    i64 k = mulmod(mod((r2 - r1) / g, m2 / g), mod(s, m2 / g), m2 / g);
    r = mod(r1 + static_cast<i64>(static_cast<i128>(m1) * k % l), l);
    m = l;
    return true;
}

}  // namespace galorb
