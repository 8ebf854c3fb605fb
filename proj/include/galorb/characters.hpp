#pragma once
// Characters of the unit groups, stored as exponents against the dual basis.
#include <optional>
#include <string>
#include <vector>

#include "galorb/residue_groups.hpp"

namespace galorb {

// Local component of a quadratic nebentypus at p.
struct LocalNebentypus {
    bool ramified = true;  // conductor 1 (tame) vs 0
    int value_at_p = 1;    // Psi'(p), +1 or -1

    static LocalNebentypus tame(int value_at_p = 1) { return {true, value_at_p}; }
    static LocalNebentypus unramified(int value_at_p = 1) { return {false, value_at_p}; }
    // Psi_p^{-1} on a unit u, as +1 / -1
    int on_unit(i64 u, i64 p) const { return ramified ? legendre(u, p) : 1; }
    int conductor() const { return ramified ? 1 : 0; }
    std::string describe() const;
    bool operator==(const LocalNebentypus&) const = default;
};

class CharacterVec {
public:
    CharacterVec() = default;
    CharacterVec(GroupPtr host, IVec c);
    static CharacterVec trivial(GroupPtr host);
    // dual basis element i
    static CharacterVec dual(GroupPtr host, std::size_t i);

    const GroupPtr& host() const { return host_; }
    const IVec& exps() const { return c_; }
    i64 order() const;
    // exponent k with chi(x) = zeta_e^k, e = host exponent
    i64 evaluate(const RingElt& x) const;
    i64 pair(const IVec& v) const;
    bool kills(const IVec& v) const { return pair(v) == 0; }
    CharacterVec pow(i64 k) const;
    CharacterVec operator*(const CharacterVec& o) const;
    CharacterVec inverse() const { return pow(-1); }
    bool is_trivial() const;

    bool operator==(const CharacterVec& o) const { return host_ == o.host_ && c_ == o.c_; }
    bool operator<(const CharacterVec& o) const { return c_ < o.c_; }

private:
    GroupPtr host_;
    IVec c_;
};

// pairing of exponent vector c with group element v, in Z/e
i64 pair_exps(const GroupPresentation& G, const IVec& c, const IVec& v);
// smallest j with c trivial on U^j
int conductor_of(const GroupPresentation& G, const IVec& c);
int conductor(const CharacterVec& chi);
CharacterVec restrict(const CharacterVec& chi, const HomMatrix& M);

// Legendre symbol as a character of a rational unit group.
CharacterVec legendre_character(const GroupPtr& GQ);

// Coset base + annihilator-subgroup of characters, enumerated by index.
struct CharacterCoset {
    GroupPtr host;
    IVec base;
    SubgroupEchelon sub;
    bool empty = false;

    i64 size() const { return empty ? 0 : sub.order(); }
    IVec exps_at(i64 index) const;
    CharacterVec at(i64 index) const { return CharacterVec(host, exps_at(index)); }
    std::optional<i64> index_of(const IVec& c) const;
    std::vector<CharacterVec> list() const;
};

// every character of G
CharacterCoset all_characters(const GroupPtr& G);

// characters of G_K restricting to Psi_p^{-1} * omega_{K/Q_p} on Z_p^x
CharacterCoset central_fiber(const GroupPtr& GK, const LocalNebentypus& psi);

// characters killing ker(norm)
bool factors_through_norm(const CharacterVec& theta, const SubgroupEchelon& norm_kernel);
bool factors_through_norm(const CharacterVec& theta, const StructureMaps& maps);

// Orbits of S under power maps chi -> chi^k, optionally also chi -> chi o conj.
// Throws std::invalid_argument when S is not closed under the action.
std::vector<std::vector<CharacterVec>> orbit_partition(const std::vector<CharacterVec>& S, bool use_iota,
                                                       const HomMatrix* conj);

}  // namespace galorb
