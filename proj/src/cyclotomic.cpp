#include "galorb/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace galorb {

namespace {

struct PhiEntry {
    std::vector<i64> poly;
    std::vector<std::pair<std::size_t, i64>> sparse;  // nonzero non-leading terms
};

const PhiEntry& phi_entry(i64 L) {
    static std::mutex mu;
    static std::map<i64, std::unique_ptr<PhiEntry>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(L);
    if (it != cache.end()) return *it->second;
    // Phi_L = prod_{d | L} (x^d - 1)^{mu(L/d)}
    std::vector<i64> num{1};
    std::vector<std::pair<i64, int>> facs;
    for (i64 d : divisors(L)) {
        const int m = moebius(L / d);
        if (m == 1) {
            std::vector<i64> r(num.size() + d, 0);
            for (std::size_t i = 0; i < num.size(); ++i) {
                r[i + d] += num[i];
                r[i] -= num[i];
            }
            num = std::move(r);
        }
    }
    for (i64 d : divisors(L)) {
        if (moebius(L / d) != -1) continue;
        // divide by x^d - 1
        std::vector<i64> q(num.size() - d, 0);
        std::vector<i64> rem = num;
        for (std::size_t i = rem.size() - 1; i + 1 > static_cast<std::size_t>(d); --i) {
            const i64 c = rem[i];
            if (c == 0) continue;
            q[i - d] = c;
            rem[i] = 0;
            rem[i - d] += c;
        }
        num = std::move(q);
    }
    auto e = std::make_unique<PhiEntry>();
    e->poly = num;
    for (std::size_t i = 0; i + 1 < num.size(); ++i)
        if (num[i] != 0) e->sparse.emplace_back(i, num[i]);
    auto& ref = *e;
    cache.emplace(L, std::move(e));
    return ref;
}

std::vector<i64> reduce(std::vector<i64> v, i64 L) {
    const PhiEntry& P = phi_entry(L);
    const std::size_t deg = P.poly.size() - 1;
    for (std::size_t i = v.size(); i-- > deg;) {
        const i64 c = v[i];
        if (c == 0) continue;
        v[i] = 0;
        const std::size_t base = i - deg;
        for (auto [j, a] : P.sparse) v[base + j] -= c * a;
    }
    v.resize(deg, 0);
    return v;
}

}  // namespace

const std::vector<i64>& cyclotomic_polynomial(i64 L) { return phi_entry(L).poly; }

CycElt::CycElt(i64 level) : L_(level) {
    if (level < 1) throw std::invalid_argument("CycElt: level must be positive");
    c_.assign(phi_entry(level).poly.size() - 1, 0);
}

CycElt CycElt::integer(i64 level, i64 n) {
    CycElt x(level);
    x.c_[0] = n;
    return x;
}

CycElt CycElt::zeta(i64 level, i64 k) {
    std::vector<i64> h(level, 0);
    h[mod(k, level)] = 1;
    return from_exponents(level, h);
}

CycElt CycElt::from_exponents(i64 level, const std::vector<i64>& hist) {
    CycElt x(level);
    std::vector<i64> v(level, 0);
    for (std::size_t i = 0; i < hist.size(); ++i) v[mod(static_cast<i64>(i), level)] += hist[i];
    x.c_ = reduce(std::move(v), level);
    return x;
}

bool CycElt::is_zero() const {
    for (i64 x : c_)
        if (x != 0) return false;
    return true;
}

CycElt CycElt::lift(i64 M) const {
    if (M % L_ != 0) throw std::invalid_argument("CycElt::lift: level must divide target");
    if (M == L_) return *this;
    std::vector<i64> h(M, 0);
    const i64 s = M / L_;
    for (std::size_t i = 0; i < c_.size(); ++i) h[i * s] = c_[i];
    CycElt x(M);
    x.c_ = reduce(std::move(h), M);
    return x;
}

CycElt CycElt::operator+(const CycElt& o) const {
    const i64 M = lcm(L_, o.L_);
    CycElt a = lift(M), b = o.lift(M);
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return a;
}

CycElt CycElt::operator-() const {
    CycElt a = *this;
    for (auto& x : a.c_) x = -x;
    return a;
}

CycElt CycElt::operator-(const CycElt& o) const { return *this + (-o); }

CycElt CycElt::operator*(const CycElt& o) const {
    const i64 M = lcm(L_, o.L_);
    CycElt a = lift(M), b = o.lift(M);
    std::vector<i64> prod(a.c_.size() + b.c_.size(), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) prod[i + j] += a.c_[i] * b.c_[j];
    }
    CycElt r(M);
    r.c_ = reduce(std::move(prod), M);
    return r;
}

CycElt CycElt::operator*(i64 k) const {
    CycElt a = *this;
    for (auto& x : a.c_) x *= k;
    return a;
}

CycElt CycElt::galois_apply(i64 a) const {
    if (gcd(a, L_) != 1) throw std::invalid_argument("galois_apply: exponent not coprime to the level");
    std::vector<i64> h(L_, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) h[mod(static_cast<i64>(i) * mod(a, L_), L_)] += c_[i];
    CycElt x(L_);
    x.c_ = reduce(std::move(h), L_);
    return x;
}

CycElt CycElt::divide_exact(i64 k) const {
    if (k == 0) throw std::domain_error("division by zero");
    CycElt a = *this;
    for (auto& x : a.c_) {
        if (x % k != 0) throw std::domain_error("CycElt: inexact division");
        x /= k;
    }
    return a;
}

i64 CycElt::root_of_unity_exponent() const {
    const i64 M = lcm(L_, 2);
    for (i64 k = 0; k < M; ++k)
        if (*this == zeta(M, k)) return k;
    return -1;
}

bool CycElt::operator==(const CycElt& o) const {
    if (L_ == o.L_) return c_ == o.c_;
    const i64 M = lcm(L_, o.L_);
    return lift(M).c_ == o.lift(M).c_;
}

std::string CycElt::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        const i64 c = c_[i];
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        const i64 a = c < 0 ? -c : c;
        if (i == 0) {
            os << a;
        } else {
            if (a != 1) os << a << "*";
            os << "z" << L_;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace galorb
