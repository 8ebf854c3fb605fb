#include "galorb/linalg.hpp"

#include <stdexcept>

namespace galorb {

namespace {

struct LocalSolution {
    IVec particular;
    std::vector<IVec> homogeneous;
};

// Diagonalize A over Z/q^k with minimal-valuation pivots.
std::optional<LocalSolution> solve_prime_power(IMat A, IVec b, i64 q, int k, std::size_t cols) {
    const i64 Q = ipow(q, k);
    const std::size_t rows = A.size();
    for (auto& r : A)
        for (auto& x : r) x = mod(x, Q);
    for (auto& x : b) x = mod(x, Q);

    IMat U(cols, IVec(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) U[i][i] = 1;

    std::vector<int> vals;
    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
        int best = k;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                if (A[i][j] == 0) continue;
                int v = valuation(A[i][j], q, k);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best == k) break;
        std::swap(A[t], A[bi]);
        std::swap(b[t], b[bi]);
        if (bj != t) {
            for (auto& r : A) std::swap(r[t], r[bj]);
            for (auto& r : U) std::swap(r[t], r[bj]);
        }
        const i64 qv = ipow(q, best);
        const i64 unit = A[t][t] / qv;
        const i64 uinv = inv_mod(unit, Q);
        for (auto& x : A[t]) x = mulmod(x, uinv, Q);
        b[t] = mulmod(b[t], uinv, Q);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == t || A[i][t] == 0) continue;
            const i64 f = A[i][t] / qv;
            for (std::size_t j = 0; j < cols; ++j) A[i][j] = mod(A[i][j] - mulmod(f, A[t][j], Q), Q);
            b[i] = mod(b[i] - mulmod(f, b[t], Q), Q);
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (j == t || A[t][j] == 0) continue;
            const i64 f = A[t][j] / qv;
            for (std::size_t i = 0; i < rows; ++i) A[i][j] = mod(A[i][j] - mulmod(f, A[i][t], Q), Q);
            for (std::size_t i = 0; i < cols; ++i) U[i][j] = mod(U[i][j] - mulmod(f, U[i][t], Q), Q);
        }
        vals.push_back(best);
    }
    const std::size_t rank = t;
    for (std::size_t i = rank; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;

    IVec y(cols, 0);
    std::vector<IVec> ygens;
    for (std::size_t i = 0; i < rank; ++i) {
        const i64 qv = ipow(q, vals[i]);
        if (b[i] % qv != 0) return std::nullopt;
        y[i] = b[i] / qv;
        if (vals[i] > 0) {
            IVec g(cols, 0);
            g[i] = ipow(q, k - vals[i]);
            ygens.push_back(g);
        }
    }
    for (std::size_t i = rank; i < cols; ++i) {
        IVec g(cols, 0);
        g[i] = 1;
        ygens.push_back(g);
    }
    auto apply_u = [&](const IVec& v) {
        IVec x(cols, 0);
        for (std::size_t i = 0; i < cols; ++i) {
            i64 s = 0;
            for (std::size_t j = 0; j < cols; ++j) s = mod(s + mulmod(U[i][j], v[j], Q), Q);
            x[i] = s;
        }
        return x;
    };
    LocalSolution out;
    out.particular = apply_u(y);
    for (auto& g : ygens) out.homogeneous.push_back(apply_u(g));
    return out;
}

}  // namespace

std::optional<ModSolution> solve_mod(const IMat& A, const IVec& b, i64 modulus, std::size_t cols) {
    if (modulus < 1) throw std::invalid_argument("solve_mod: modulus must be positive");
    if (A.size() != b.size()) throw std::invalid_argument("solve_mod: shape mismatch");
    for (const auto& r : A)
        if (r.size() != cols) throw std::invalid_argument("solve_mod: ragged matrix");
    ModSolution sol;
    sol.modulus = modulus;
    sol.particular.assign(cols, 0);
    if (modulus == 1) return sol;
    i64 acc_mod = 1;
    for (auto [q, k] : factorize(modulus)) {
        const i64 Q = ipow(q, k);
        auto loc = solve_prime_power(A, b, q, k, cols);
        if (!loc) return std::nullopt;
        for (std::size_t i = 0; i < cols; ++i) {
            i64 r, m;
            crt(sol.particular[i], acc_mod, loc->particular[i], Q, r, m);
            sol.particular[i] = r;
        }
        acc_mod *= Q;
        const i64 co = modulus / Q;
        const i64 lift = mulmod(co, inv_mod(co % Q, Q), modulus);
        for (auto& g : loc->homogeneous) {
            IVec h(cols);
            for (std::size_t i = 0; i < cols; ++i) h[i] = mulmod(g[i], lift, modulus);
            sol.homogeneous.push_back(std::move(h));
        }
    }
    return sol;
}

IVec reduce_vec(IVec v, const IVec& moduli) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod(v[i], moduli[i]);
    return v;
}

i64 SubgroupEchelon::order() const {
    i64 o = 1;
    for (std::size_t i = 0; i < moduli.size(); ++i) o *= moduli[i] / pivots[i];
    return o;
}

IVec SubgroupEchelon::element(i64 index) const {
    const std::size_t r = moduli.size();
    IVec v(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
        const i64 radix = moduli[i] / pivots[i];
        const i64 k = index % radix;
        index /= radix;
        if (k == 0) continue;
        for (std::size_t j = i; j < r; ++j) v[j] = mod(v[j] + mulmod(k, rows[i][j], moduli[j]), moduli[j]);
    }
    return v;
}

std::optional<i64> SubgroupEchelon::index_of(const IVec& v) const {
    const std::size_t r = moduli.size();
    IVec w = reduce_vec(v, moduli);
    i64 index = 0, scale = 1;
    for (std::size_t i = 0; i < r; ++i) {
        if (w[i] % pivots[i] != 0) return std::nullopt;
        const i64 radix = moduli[i] / pivots[i];
        const i64 k = (w[i] / pivots[i]) % radix;
        for (std::size_t j = i; j < r; ++j) w[j] = mod(w[j] - mulmod(k, rows[i][j], moduli[j]), moduli[j]);
        index += k * scale;
        scale *= radix;
    }
    return index;
}

SubgroupEchelon echelon(const std::vector<IVec>& gens, const IVec& moduli) {
    const std::size_t r = moduli.size();
    std::vector<IVec> work;
    for (const auto& g : gens) {
        if (g.size() != r) throw std::invalid_argument("echelon: length mismatch");
        work.push_back(reduce_vec(g, moduli));
    }
    SubgroupEchelon E;
    E.moduli = moduli;
    for (std::size_t i = 0; i < r; ++i) {
        const i64 mi = moduli[i];
        IVec piv(r, 0);
        piv[i] = mi;
        for (auto& v : work) {
            if (v[i] == 0) continue;
            i64 s, t;
            const i64 a = piv[i], b = v[i];
            const i64 g = ext_gcd(a, b, s, t);
            IVec np(r, 0), nv(r, 0);
            for (std::size_t j = i + 1; j < r; ++j) {
                const i64 mj = moduli[j];
                np[j] = mod(mulmod(mod(s, mj), piv[j], mj) + mulmod(mod(t, mj), v[j], mj), mj);
                nv[j] = mod(mulmod(mod(b / g, mj), piv[j], mj) - mulmod(mod(a / g, mj), v[j], mj), mj);
            }
            np[i] = g;
            nv[i] = 0;
            piv = std::move(np);
            v = std::move(nv);
        }
        E.pivots.push_back(piv[i]);
        E.rows.push_back(std::move(piv));
    }
    return E;
}

}  // namespace galorb
