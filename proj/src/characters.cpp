#include "galorb/characters.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace galorb {

std::string LocalNebentypus::describe() const {
    std::ostringstream os;
    os << (ramified ? "tame" : "unramified") << ",value_at_p=" << (value_at_p > 0 ? "+1" : "-1");
    return os.str();
}

CharacterVec::CharacterVec(GroupPtr host, IVec c) : host_(std::move(host)), c_(std::move(c)) {
    if (c_.size() != host_->rank()) throw std::invalid_argument("CharacterVec: wrong number of exponents");
    c_ = reduce_vec(std::move(c_), host_->orders());
}

CharacterVec CharacterVec::trivial(GroupPtr host) {
    IVec z = host->zero();
    return CharacterVec(std::move(host), z);
}

CharacterVec CharacterVec::dual(GroupPtr host, std::size_t i) {
    IVec z = host->unit_vector(i);
    return CharacterVec(std::move(host), z);
}

i64 CharacterVec::order() const { return host_->element_order(c_); }

i64 pair_exps(const GroupPresentation& G, const IVec& c, const IVec& v) {
    const i64 e = G.exponent();
    const auto& m = G.orders();
    i64 s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0 || v[i] == 0) continue;
        s = mod(s + static_cast<i64>(static_cast<i128>(c[i]) * v[i] % e * (e / m[i]) % e), e);
    }
    return s;
}

i64 CharacterVec::pair(const IVec& v) const { return pair_exps(*host_, c_, v); }

i64 CharacterVec::evaluate(const RingElt& x) const { return pair(host_->dlog(x)); }

CharacterVec CharacterVec::pow(i64 k) const { return CharacterVec(host_, host_->scale(c_, k)); }

CharacterVec CharacterVec::operator*(const CharacterVec& o) const {
    if (host_ != o.host_) throw std::invalid_argument("character product over different groups");
    return CharacterVec(host_, host_->add(c_, o.c_));
}

bool CharacterVec::is_trivial() const {
    for (i64 x : c_)
        if (x != 0) return false;
    return true;
}

int conductor_of(const GroupPresentation& G, const IVec& c) {
    const int n = G.level();
    for (int j = n - 1; j >= 0; --j)
        for (const auto& v : G.filtration_basis(j))
            if (pair_exps(G, c, v) != 0) return j + 1;
    return 0;
}

int conductor(const CharacterVec& chi) { return conductor_of(*chi.host(), chi.exps()); }

CharacterVec restrict(const CharacterVec& chi, const HomMatrix& M) {
    if (M.target != chi.host()) throw std::invalid_argument("restrict: map does not target the character's group");
    const auto& src = *M.source;
    const i64 e = chi.host()->exponent();
    IVec c(src.rank());
    for (std::size_t j = 0; j < src.rank(); ++j) {
        const i64 s = chi.pair(M.columns[j]);
        const i128 t = static_cast<i128>(s) * src.orders()[j];
        if (t % e != 0) throw std::logic_error("restrict: not a homomorphism");
        c[j] = static_cast<i64>(t / e);
    }
    return CharacterVec(M.source, c);
}

CharacterVec legendre_character(const GroupPtr& GQ) {
    if (GQ->ring().ext()) throw std::invalid_argument("legendre_character: rational group expected");
    IVec c(GQ->rank(), 0);
    for (std::size_t j = 0; j < GQ->rank(); ++j) {
        if (legendre(GQ->generators()[j].a, GQ->p()) == -1) c[j] = GQ->orders()[j] / 2;
    }
    return CharacterVec(GQ, c);
}

IVec CharacterCoset::exps_at(i64 index) const {
    if (empty || index < 0 || index >= size()) throw std::out_of_range("coset index");
    return host->add(base, sub.element(index));
}

std::optional<i64> CharacterCoset::index_of(const IVec& c) const {
    if (empty) return std::nullopt;
    return sub.index_of(host->add(c, host->neg(base)));
}

std::vector<CharacterVec> CharacterCoset::list() const {
    std::vector<CharacterVec> out;
    for (i64 i = 0; i < size(); ++i) out.push_back(at(i));
    return out;
}

CharacterCoset all_characters(const GroupPtr& G) {
    std::vector<IVec> gens;
    for (std::size_t i = 0; i < G->rank(); ++i) gens.push_back(G->unit_vector(i));
    return CharacterCoset{G, G->zero(), echelon(gens, G->orders()), false};
}

CharacterCoset central_fiber(const GroupPtr& GK, const LocalNebentypus& psi) {
    const auto& K = GK->ring();
    if (!K.ext()) throw std::invalid_argument("central_fiber: group of a quadratic extension expected");
    auto GQ = unit_group(K.p(), rational_level(K));
    HomMatrix embed = hom_from_map(GQ, GK, HomTag::Embed, [&](const RingElt& u) { return K.make(u.a, 0); });
    // omega_{K/Q_p} is trivial on units when K is unramified, Legendre when ramified
    const bool use_legendre = psi.ramified != K.ramified();
    CharacterVec tau = use_legendre ? legendre_character(GQ) : CharacterVec::trivial(GQ);

    const i64 E = lcm(GK->exponent(), GQ->exponent());
    const auto& m = GK->orders();
    IMat A;
    IVec b;
    for (std::size_t j = 0; j < GQ->rank(); ++j) {
        IVec row(GK->rank());
        for (std::size_t i = 0; i < GK->rank(); ++i) row[i] = mulmod(embed.columns[j][i], E / m[i], E);
        A.push_back(row);
        b.push_back(mulmod(tau.exps()[j], E / GQ->orders()[j], E));
    }
    CharacterCoset out{GK, GK->zero(), SubgroupEchelon{}, false};
    auto sol = solve_mod(A, b, E, GK->rank());
    if (!sol) {
        out.empty = true;
        out.sub = echelon({}, m);
        return out;
    }
    out.base = reduce_vec(sol->particular, m);
    out.sub = echelon(sol->homogeneous, m);
    return out;
}

bool factors_through_norm(const CharacterVec& theta, const SubgroupEchelon& norm_kernel) {
    for (const auto& row : norm_kernel.rows)
        if (!theta.kills(reduce_vec(row, norm_kernel.moduli))) return false;
    return true;
}

bool factors_through_norm(const CharacterVec& theta, const StructureMaps& maps) {
    return factors_through_norm(theta, kernel(maps.norm));
}

std::vector<std::vector<CharacterVec>> orbit_partition(const std::vector<CharacterVec>& S, bool use_iota,
                                                       const HomMatrix* conj) {
    if (use_iota && !conj) throw std::invalid_argument("orbit_partition: conjugation map required");
    std::set<IVec> members;
    for (const auto& c : S) members.insert(c.exps());
    std::set<IVec> seen;
    std::map<IVec, std::vector<CharacterVec>> orbits;
    for (const auto& chi : S) {
        if (seen.count(chi.exps())) continue;
        std::set<IVec> orbit;
        std::vector<CharacterVec> seeds{chi};
        if (use_iota) seeds.push_back(restrict(chi, *conj));
        for (const auto& s : seeds) {
            const i64 o = s.order();
            for (i64 k = 1; k <= o; ++k)
                if (gcd(k, o) == 1) orbit.insert(s.pow(k).exps());
        }
        std::vector<CharacterVec> list;
        for (const auto& v : orbit) {
            if (!members.count(v)) throw std::invalid_argument("orbit_partition: set not closed under the action");
            seen.insert(v);
            list.emplace_back(chi.host(), v);
        }
        orbits.emplace(*orbit.begin(), std::move(list));
    }
    std::vector<std::vector<CharacterVec>> out;
    for (auto& [k, v] : orbits) out.push_back(std::move(v));
    return out;
}

}  // namespace galorb
