#include "galorb/residue_groups.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace galorb {

namespace {

void require_odd_prime(i64 p) {
    if (p == 2) throw std::invalid_argument("p = 2 is not supported");
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
}

}  // namespace

std::string QuadExt::name() const {
    std::ostringstream os;
    os << "Q" << p << "(sqrt(" << d << "))";
    return os.str();
}

QuadExt QuadExt::unramified(i64 p, i64 nonresidue) {
    require_odd_prime(p);
    if (nonresidue == 0) nonresidue = smallest_nonresidue(p);
    if (legendre(nonresidue, p) != -1) throw std::invalid_argument("unramified: d must be a non-residue mod p");
    return QuadExt{p, ExtKind::Unramified, nonresidue, false};
}

QuadExt QuadExt::ramified_a(i64 p, i64 s) {
    require_odd_prime(p);
    if (s % p == 0) throw std::invalid_argument("ramified_a: s must be a unit");
    return QuadExt{p, ExtKind::RamifiedA, -p * s * s, p == 3};
}

QuadExt QuadExt::ramified_b(i64 p, i64 nonresidue) {
    require_odd_prime(p);
    if (nonresidue == 0) nonresidue = smallest_nonresidue(p);
    if (legendre(nonresidue, p) != -1) throw std::invalid_argument("ramified_b: xi must be a non-residue mod p");
    return QuadExt{p, ExtKind::RamifiedB, -p * nonresidue, false};
}

std::vector<QuadExt> QuadExt::all(i64 p) { return {unramified(p), ramified_a(p), ramified_b(p)}; }

ResidueRing::ResidueRing(i64 p, int n, std::optional<QuadExt> ext) : p_(p), n_(n), ext_(std::move(ext)) {
    require_odd_prime(p);
    if (n <= 0) throw std::invalid_argument("level n must be positive");
    if (ext_ && ext_->p != p) throw std::invalid_argument("extension over a different prime");
    if (!ext_) {
        mod_a_ = ipow(p, n);
        mod_b_ = 1;
        dd_ = 0;
    } else if (!ext_->ramified()) {
        mod_a_ = mod_b_ = ipow(p, n);
        dd_ = mod(ext_->d, mod_a_);
    } else {
        mod_a_ = ipow(p, (n + 1) / 2);
        mod_b_ = ipow(p, n / 2);
        dd_ = mod(ext_->d, mod_a_);
    }
}

RingElt ResidueRing::mul(const RingElt& x, const RingElt& y) const {
    if (!ext_) return {mulmod(x.a, y.a, mod_a_), 0};
    i64 a = mod(mulmod(x.a, y.a, mod_a_) + mulmod(mulmod(x.b, y.b, mod_a_), dd_, mod_a_), mod_a_);
    i64 b = mod(mulmod(x.a, y.b, mod_b_) + mulmod(x.b, y.a, mod_b_), mod_b_);
    return {a, b};
}

RingElt ResidueRing::pow(RingElt x, i64 e) const {
    if (e < 0) {
        x = inv(x);
        e = -e;
    }
    RingElt r = one();
    while (e > 0) {
        if (e & 1) r = mul(r, x);
        x = mul(x, x);
        e >>= 1;
    }
    return r;
}

bool ResidueRing::is_unit(const RingElt& x) const {
    if (ramified() || !ext_) return x.a % p_ != 0;
    return x.a % p_ != 0 || x.b % p_ != 0;
}

bool ResidueRing::valid(const RingElt& x) const {
    return x.a >= 0 && x.a < mod_a_ && x.b >= 0 && x.b < mod_b_;
}

RingElt ResidueRing::inv(const RingElt& x) const {
    if (!is_unit(x)) throw std::domain_error("inverse of a non-unit");
    if (!ext_) return {inv_mod(x.a, mod_a_), 0};
    i64 nx = norm(x);
    i64 ni = inv_mod(nx, norm_modulus());
    RingElt c = conj(x);
    return make(mulmod(c.a, ni, mod_a_), mulmod(c.b, ni % mod_b_, mod_b_));
}

i64 ResidueRing::norm(const RingElt& x) const {
    if (!ext_) return x.a;
    return mod(mulmod(x.a, x.a, mod_a_) - mulmod(mulmod(x.b, x.b, mod_a_), dd_, mod_a_), mod_a_);
}

RingElt ResidueRing::uniformizer_power(int i) const {
    if (!ramified()) return make(powmod(p_, i, mod_a_), 0);
    return pow(make(0, 1), i);
}

int ResidueRing::depth(const RingElt& x) const {
    const i64 am = mod(x.a - 1, mod_a_);
    if (!ramified()) {
        int va = am == 0 ? n_ : valuation(am, p_, n_);
        int vb = x.b == 0 ? n_ : valuation(x.b, p_, n_);
        return std::min({va, vb, n_});
    }
    int va = am == 0 ? n_ : 2 * valuation(am, p_, n_);
    int vb = x.b == 0 ? n_ : 2 * valuation(x.b, p_, n_) + 1;
    return std::min({va, vb, n_});
}

IVec ResidueRing::layer_image(const RingElt& x, int i) const {
    const i64 am = mod(x.a - 1, mod_a_);
    if (!ext_) return {(am / ipow(p_, i)) % p_};
    if (!ramified()) return {(am / ipow(p_, i)) % p_, (x.b / ipow(p_, i)) % p_};
    if (i % 2 == 0) return {(am / ipow(p_, i / 2)) % p_};
    return {(x.b / ipow(p_, i / 2)) % p_};
}

std::vector<RingElt> ResidueRing::units() const {
    std::vector<RingElt> out;
    for (i64 a = 0; a < mod_a_; ++a)
        for (i64 b = 0; b < mod_b_; ++b) {
            RingElt x{a, b};
            if (is_unit(x)) out.push_back(x);
        }
    return out;
}

// ---------------------------------------------------------------------------

i64 GroupPresentation::order() const {
    i64 o = 1;
    for (i64 m : orders_) o *= m;
    return o;
}

RingElt GroupPresentation::exp(const IVec& e) const {
    RingElt r = ring_.one();
    for (std::size_t i = 0; i < rank(); ++i) r = ring_.mul(r, ring_.pow(gens_[i], mod(e[i], orders_[i])));
    return r;
}

IVec GroupPresentation::add(const IVec& x, const IVec& y) const {
    IVec z(rank());
    for (std::size_t i = 0; i < rank(); ++i) z[i] = mod(x[i] + y[i], orders_[i]);
    return z;
}

IVec GroupPresentation::neg(const IVec& x) const {
    IVec z(rank());
    for (std::size_t i = 0; i < rank(); ++i) z[i] = mod(-x[i], orders_[i]);
    return z;
}

IVec GroupPresentation::scale(const IVec& x, i64 k) const {
    IVec z(rank());
    for (std::size_t i = 0; i < rank(); ++i) z[i] = mulmod(mod(x[i], orders_[i]), mod(k, orders_[i]), orders_[i]);
    return z;
}

IVec GroupPresentation::unit_vector(std::size_t i) const {
    IVec z = zero();
    z[i] = 1 % orders_[i];
    return z;
}

i64 GroupPresentation::element_order(const IVec& x) const {
    i64 o = 1;
    for (std::size_t i = 0; i < rank(); ++i) o = lcm(o, orders_[i] / gcd(x[i], orders_[i]));
    return o;
}

const std::vector<IVec>& GroupPresentation::filtration(int j) const {
    if (j < 0 || j > level()) throw std::out_of_range("filtration index out of range");
    return filtration_[j];
}

const SubgroupEchelon& GroupPresentation::filtration_subgroup(int j) const {
    if (j < 0 || j > level()) throw std::out_of_range("filtration index out of range");
    return filtration_sub_[j];
}

const std::vector<IVec>& GroupPresentation::filtration_basis(int j) const {
    if (j < 0 || j > level()) throw std::out_of_range("filtration index out of range");
    return filtration_basis_[j];
}

std::string GroupPresentation::describe() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rank(); ++i) os << (i ? " x " : "") << "Z/" << orders_[i];
    if (rank() == 0) os << "1";
    return os.str();
}

RingElt GroupPresentation::teichmuller_projection(const RingElt& x) const {
    i64 e = wild_order_;
    if (tame_order_ > 1) e = static_cast<i64>(static_cast<i128>(wild_order_) * inv_mod(wild_order_ % tame_order_, tame_order_));
    return ring_.pow(x, e);
}

void GroupPresentation::build() {
    const i64 p = ring_.p();
    const int n = ring_.level();
    const auto& ext = ring_.ext();

    auto rational_teich = [&]() {
        i64 g = 2;
        while (true) {
            bool ok = true;
            for (auto [q, e] : factorize(p - 1))
                if (powmod(g, (p - 1) / q, p) == 1) ok = false;
            if (ok) break;
            ++g;
        }
        return ring_.pow(ring_.make(g, 0), ipow(p, n - 1));
    };

    std::vector<std::pair<i64, RingElt>> fac;
    i64 expected = 0;
    if (!ext) {
        fac = {{p - 1, rational_teich()}, {ipow(p, n - 1), ring_.make(1 + p, 0)}};
        expected = (p - 1) * ipow(p, n - 1);
    } else if (!ext->ramified()) {
        ResidueRing f(p, 1, ext);
        RingElt seed{};
        bool found = false;
        const i64 q1 = p * p - 1;
        for (i64 b = 0; b < p && !found; ++b)
            for (i64 a = 0; a < p && !found; ++a) {
                RingElt x{a, b};
                if (!f.is_unit(x)) continue;
                bool ok = true;
                for (auto [q, e] : factorize(q1))
                    if (f.pow(x, q1 / q) == f.one()) ok = false;
                if (ok) {
                    seed = x;
                    found = true;
                }
            }
        RingElt xi = ring_.pow(ring_.make(seed.a, seed.b), ipow(p, 2 * (n - 1)));
        fac = {{q1, xi}, {ipow(p, n - 1), ring_.make(1 + p, 0)}, {ipow(p, n - 1), ring_.make(1, p)}};
        expected = q1 * ipow(p, 2 * (n - 1));
    } else {
        const int b = (n - 1) / 2;
        const int a = n - 1 - b;
        expected = (p - 1) * ipow(p, n - 1);
        if (!ext->anomalous) {
            fac = {{p - 1, rational_teich()}, {ipow(p, a), ring_.make(1, 1)}, {ipow(p, b), ring_.make(1 + p, 0)}};
        } else if (n == 1) {
            fac = {{2, ring_.make(-1, 0)}};
        } else {
            // zeta_3 = (-1 + sqrt(-3))/2 with sqrt(-3) = pi / s when d = -3 s^2
            const i64 s2 = -ext->d / 3;
            const i64 s = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(s2))));
            if (s * s != s2) throw std::logic_error("anomalous extension needs d = -3 s^2");
            const i64 h = inv_mod(2, ring_.mod_a());
            RingElt zeta3 = ring_.make(-h, mulmod(h % ring_.mod_b(), inv_mod(s, ring_.mod_b()), ring_.mod_b()));
            fac = {{2, ring_.make(-1, 0)}, {3, zeta3}, {ipow(3, a - 1), ring_.make(1, 3)}, {ipow(3, b), ring_.make(4, 0)}};
        }
    }

    for (auto& [m, g] : fac) {
        if (m == 1) continue;
        orders_.push_back(m);
        gens_.push_back(g);
    }
    if (order() != expected) throw std::logic_error("unit group order mismatch");
    for (std::size_t i = 0; i < rank(); ++i) {
        const i64 m = orders_[i];
        if (ring_.pow(gens_[i], m) != ring_.one()) throw std::logic_error("generator order too large");
        for (auto [q, e] : factorize(m))
            if (ring_.pow(gens_[i], m / q) == ring_.one()) throw std::logic_error("generator order too small");
        exponent_ = lcm(exponent_, m);
    }
    build_dlog();

    filtration_.resize(n + 1);
    filtration_sub_.resize(n + 1);
    for (std::size_t i = 0; i < rank(); ++i) filtration_[0].push_back(unit_vector(i));
    for (int j = 1; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            if (!ext) {
                filtration_[j].push_back(dlog(ring_.make(1 + ipow(p, i), 0)));
            } else if (!ext->ramified()) {
                filtration_[j].push_back(dlog(ring_.make(1 + ipow(p, i), 0)));
                filtration_[j].push_back(dlog(ring_.make(1, ipow(p, i))));
            } else {
                RingElt pi = ring_.uniformizer_power(i);
                filtration_[j].push_back(dlog(ring_.make(1 + pi.a, pi.b)));
            }
        }
    }
    filtration_basis_.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        filtration_sub_[j] = echelon(filtration_[j], orders_);
        for (const auto& row : filtration_sub_[j].rows) {
            IVec r = reduce_vec(row, orders_);
            bool nz = false;
            for (i64 x : r) nz = nz || x != 0;
            if (nz) filtration_basis_[j].push_back(r);
        }
    }
}

void GroupPresentation::build_dlog() {
    const i64 p = ring_.p();
    const int n = ring_.level();
    for (std::size_t i = 0; i < rank(); ++i) {
        if (orders_[i] % p != 0) {
            if (tame_index_ >= 0) throw std::logic_error("more than one prime-to-p factor");
            tame_index_ = static_cast<int>(i);
            tame_order_ = orders_[i];
        } else {
            wild_order_ *= orders_[i];
        }
    }
    if (tame_index_ >= 0) {
        bsgs_m_ = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(tame_order_))));
        RingElt g = gens_[tame_index_];
        RingElt cur = ring_.one();
        for (i64 j = 0; j < bsgs_m_; ++j) {
            baby_.emplace(ring_.key(cur), j);
            cur = ring_.mul(cur, g);
        }
        giant_ = ring_.inv(ring_.pow(g, bsgs_m_));
    }

    // candidates g^(p^t) from the p-power factors, sorted into filtration layers
    struct Cand {
        int depth;
        RingElt elt;
        IVec exps;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (static_cast<int>(i) == tame_index_) continue;
        RingElt x = gens_[i];
        IVec e = unit_vector(i);
        while (x != ring_.one()) {
            cands.push_back({ring_.depth(x), x, e});
            x = ring_.pow(x, p);
            e = scale(e, p);
        }
    }
    const std::size_t f = (ring_.ext() && !ring_.ramified()) ? 2 : 1;
    layers_.assign(n, LayerBasis{});
    for (int i = 1; i < n; ++i) {
        LayerBasis lb;
        IMat cols;
        for (const auto& c : cands) {
            if (c.depth != i || cols.size() == f) continue;
            IVec img = ring_.layer_image(c.elt, i);
            bool independent;
            if (f == 1) {
                independent = img[0] != 0;
            } else if (cols.empty()) {
                independent = img[0] != 0 || img[1] != 0;
            } else {
                independent = mod(cols[0][0] * img[1] - cols[0][1] * img[0], p) != 0;
            }
            if (!independent) continue;
            cols.push_back(img);
            lb.inv_elts.push_back(ring_.inv(c.elt));
            lb.exps.push_back(c.exps);
        }
        if (cols.size() != f) throw std::logic_error("generators do not span a filtration layer");
        if (f == 1) {
            lb.solve = {{inv_mod(cols[0][0], p)}};
        } else {
            i64 det = mod(cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1], p);
            i64 di = inv_mod(det, p);
            // columns are the images; invert [[c00, c10], [c01, c11]]
            lb.solve = {{mulmod(cols[1][1], di, p), mod(-cols[1][0] * di, p)},
                        {mod(-cols[0][1] * di, p), mulmod(cols[0][0], di, p)}};
        }
        layers_[i] = std::move(lb);
    }
}

IVec GroupPresentation::dlog(const RingElt& x) const {
    if (!ring_.valid(x)) throw std::invalid_argument("dlog: element not reduced at this level");
    if (!ring_.is_unit(x)) throw std::domain_error("dlog: not a unit");
    IVec e = zero();
    RingElt w = x;
    if (tame_index_ >= 0) {
        RingElt t = teichmuller_projection(x);
        RingElt y = t;
        i64 k = -1;
        for (i64 i = 0; i <= bsgs_m_; ++i) {
            auto it = baby_.find(ring_.key(y));
            if (it != baby_.end()) {
                k = i * bsgs_m_ + it->second;
                break;
            }
            y = ring_.mul(y, giant_);
        }
        if (k < 0) throw std::logic_error("dlog: torsion part not found");
        e[tame_index_] = mod(k, tame_order_);
        w = ring_.mul(x, ring_.inv(t));
    }
    const int n = ring_.level();
    for (int i = 1; i < n; ++i) {
        int dep = ring_.depth(w);
        if (dep >= n) break;
        if (dep < i) throw std::logic_error("dlog: filtration descent failed");
        if (dep > i) continue;
        const auto& lb = layers_[i];
        IVec img = ring_.layer_image(w, i);
        for (std::size_t k = 0; k < lb.solve.size(); ++k) {
            i64 c = 0;
            for (std::size_t j = 0; j < img.size(); ++j) c = mod(c + lb.solve[k][j] * img[j], p());
            if (c == 0) continue;
            w = ring_.mul(w, ring_.pow(lb.inv_elts[k], c));
            e = add(e, scale(lb.exps[k], c));
        }
    }
    if (w != ring_.one()) throw std::logic_error("dlog: residual not trivial");
    return e;
}

GroupPtr unit_group(i64 p, int n, std::optional<QuadExt> ext) {
    auto g = std::shared_ptr<GroupPresentation>(new GroupPresentation(ResidueRing(p, n, std::move(ext))));
    g->build();
    return g;
}

// ---------------------------------------------------------------------------

IVec HomMatrix::apply(const IVec& x) const {
    IVec y = target->zero();
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (x[i] != 0) y = target->add(y, target->scale(columns[i], x[i]));
    return y;
}

void HomMatrix::check() const {
    if (columns.size() != source->rank()) throw std::logic_error("HomMatrix: wrong column count");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        IVec z = target->scale(columns[i], source->orders()[i]);
        for (i64 v : z)
            if (v != 0) throw std::logic_error("HomMatrix: column violates order relation");
    }
}

HomMatrix hom_from_map(GroupPtr source, GroupPtr target, HomTag tag,
                       const std::function<RingElt(const RingElt&)>& f) {
    HomMatrix M{source, target, {}, tag};
    for (const auto& g : source->generators()) M.columns.push_back(target->dlog(f(g)));
    M.check();
    return M;
}

HomMatrix compose(const HomMatrix& outer, const HomMatrix& inner) {
    if (inner.target != outer.source) throw std::invalid_argument("compose: groups do not match");
    HomMatrix M{inner.source, outer.target, {}, HomTag::Custom};
    for (const auto& c : inner.columns) M.columns.push_back(outer.apply(c));
    return M;
}

SubgroupEchelon kernel(const HomMatrix& M) {
    const auto& src = M.source->orders();
    const auto& tgt = M.target->orders();
    i64 E = 1;
    for (i64 m : src) E = lcm(E, m);
    for (i64 m : tgt) E = lcm(E, m);
    IMat A;
    for (std::size_t j = 0; j < tgt.size(); ++j) {
        IVec row;
        for (std::size_t i = 0; i < src.size(); ++i) row.push_back(mulmod(E / tgt[j], M.columns[i][j], E));
        A.push_back(row);
    }
    auto sol = solve_mod(A, IVec(A.size(), 0), E, src.size());
    return echelon(sol->homogeneous, src);
}

SubgroupEchelon image(const HomMatrix& M) { return echelon(M.columns, M.target->orders()); }

int rational_level(const ResidueRing& K) { return K.ramified() ? (K.level() + 1) / 2 : K.level(); }

StructureMaps structure_maps(const GroupPtr& GK, const GroupPtr& GQ) {
    const auto& K = GK->ring();
    const auto& Q = GQ->ring();
    if (!K.ext()) throw std::invalid_argument("structure_maps: first group must come from a quadratic extension");
    if (Q.ext() || Q.p() != K.p() || Q.level() != rational_level(K))
        throw std::invalid_argument("structure_maps: incompatible levels");
    StructureMaps S{
        hom_from_map(GQ, GK, HomTag::Embed, [&](const RingElt& u) { return K.make(u.a, 0); }),
        hom_from_map(GK, GQ, HomTag::Norm, [&](const RingElt& x) { return Q.make(K.norm(x), 0); }),
        hom_from_map(GK, GK, HomTag::Conj, [&](const RingElt& x) { return K.conj(x); }),
    };
    return S;
}

StructureMaps structure_maps(const GroupPtr& GK) {
    return structure_maps(GK, unit_group(GK->p(), rational_level(GK->ring())));
}

}  // namespace galorb
