#pragma once
// Unit groups of Z/p^n and of O_K / P^n for quadratic K over Q_p, p odd.
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "galorb/arith.hpp"
#include "galorb/linalg.hpp"

namespace galorb {

enum class ExtKind { Unramified, RamifiedA, RamifiedB };

struct QuadExt {
    i64 p = 3;
    ExtKind kind = ExtKind::Unramified;
    i64 d = 0;  // K = Q_p(sqrt d); for ramified kinds d is the uniformizer square
    bool anomalous = false;

    bool ramified() const { return kind != ExtKind::Unramified; }
    std::string name() const;

    // d = nonresidue (default: smallest)
    static QuadExt unramified(i64 p, i64 nonresidue = 0);
    // d = -p * s^2 for a unit s (default s = 1)
    static QuadExt ramified_a(i64 p, i64 s = 1);
    // d = -p * xi for a nonresidue xi (default: smallest)
    static QuadExt ramified_b(i64 p, i64 nonresidue = 0);
    // the three classes, in the order unramified, A, B
    static std::vector<QuadExt> all(i64 p);
};

// a + b*w with w = sqrt d; b is 0 in the rational ring
struct RingElt {
    i64 a = 0;
    i64 b = 0;
    bool operator==(const RingElt&) const = default;
};

class ResidueRing {
public:
    ResidueRing(i64 p, int n, std::optional<QuadExt> ext);

    i64 p() const { return p_; }
    int level() const { return n_; }
    const std::optional<QuadExt>& ext() const { return ext_; }
    bool ramified() const { return ext_ && ext_->ramified(); }
    bool rational() const { return !ext_; }
    i64 mod_a() const { return mod_a_; }
    i64 mod_b() const { return mod_b_; }
    // residue field size
    i64 q() const { return ext_ && !ext_->ramified() ? p_ * p_ : p_; }

    RingElt make(i64 a, i64 b = 0) const { return {mod(a, mod_a_), mod(b, mod_b_)}; }
    RingElt one() const { return make(1, 0); }
    RingElt mul(const RingElt& x, const RingElt& y) const;
    RingElt pow(RingElt x, i64 e) const;
    RingElt inv(const RingElt& x) const;
    bool is_unit(const RingElt& x) const;
    bool valid(const RingElt& x) const;
    RingElt conj(const RingElt& x) const { return make(x.a, -x.b); }
    // x * conj(x) as a residue modulo norm_modulus()
    i64 norm(const RingElt& x) const;
    i64 norm_modulus() const { return mod_a_; }
    // uniformizer power pi^i (p^i when unramified or rational)
    RingElt uniformizer_power(int i) const;
    // largest j <= n with x = 1 mod P^j
    int depth(const RingElt& x) const;
    // image of x in U^i / U^{i+1}, as a vector over F_p (length 1 or 2)
    IVec layer_image(const RingElt& x, int i) const;
    std::vector<RingElt> units() const;
    i64 key(const RingElt& x) const { return x.a * mod_b_ + x.b; }

private:
    i64 p_;
    int n_;
    std::optional<QuadExt> ext_;
    i64 mod_a_, mod_b_, dd_;
};

class GroupPresentation;
using GroupPtr = std::shared_ptr<const GroupPresentation>;

// Finite abelian group as a product of cyclic factors with explicit generators.
class GroupPresentation {
public:
    const ResidueRing& ring() const { return ring_; }
    i64 p() const { return ring_.p(); }
    int level() const { return ring_.level(); }
    const IVec& orders() const { return orders_; }
    const std::vector<RingElt>& generators() const { return gens_; }
    std::size_t rank() const { return orders_.size(); }
    i64 order() const;
    i64 exponent() const { return exponent_; }

    RingElt exp(const IVec& e) const;
    IVec dlog(const RingElt& x) const;
    IVec add(const IVec& x, const IVec& y) const;
    IVec neg(const IVec& x) const;
    IVec scale(const IVec& x, i64 k) const;
    IVec zero() const { return IVec(rank(), 0); }
    IVec unit_vector(std::size_t i) const;
    i64 element_order(const IVec& x) const;

    // generators of the image of U^j, j in [0, n]
    const std::vector<IVec>& filtration(int j) const;
    const SubgroupEchelon& filtration_subgroup(int j) const;
    // at most rank() nonzero generators of the same subgroup
    const std::vector<IVec>& filtration_basis(int j) const;

    std::string describe() const;

    friend GroupPtr unit_group(i64 p, int n, std::optional<QuadExt> ext);

private:
    explicit GroupPresentation(ResidueRing ring) : ring_(std::move(ring)) {}
    void build();
    void build_dlog();
    RingElt teichmuller_projection(const RingElt& x) const;

    ResidueRing ring_;
    IVec orders_;
    std::vector<RingElt> gens_;
    i64 exponent_ = 1;

    // prime-to-p part: one cyclic generator, baby-step table
    int tame_index_ = -1;
    i64 tame_order_ = 1;
    i64 wild_order_ = 1;
    i64 bsgs_m_ = 1;
    std::unordered_map<i64, i64> baby_;
    RingElt giant_;

    struct LayerBasis {
        std::vector<RingElt> inv_elts;
        std::vector<IVec> exps;
        IMat solve;  // F_p matrix sending layer image to coefficients
    };
    std::vector<LayerBasis> layers_;
    std::vector<std::vector<IVec>> filtration_;
    std::vector<SubgroupEchelon> filtration_sub_;
    std::vector<std::vector<IVec>> filtration_basis_;
};

GroupPtr unit_group(i64 p, int n, std::optional<QuadExt> ext = std::nullopt);

enum class HomTag { Embed, Norm, Conj, Inclusion, Custom };

struct HomMatrix {
    GroupPtr source;
    GroupPtr target;
    std::vector<IVec> columns;  // image of each source generator
    HomTag tag = HomTag::Custom;

    IVec apply(const IVec& x) const;
    void check() const;
};

HomMatrix hom_from_map(GroupPtr source, GroupPtr target, HomTag tag,
                       const std::function<RingElt(const RingElt&)>& f);
HomMatrix compose(const HomMatrix& outer, const HomMatrix& inner);
SubgroupEchelon kernel(const HomMatrix& M);
SubgroupEchelon image(const HomMatrix& M);

struct StructureMaps {
    HomMatrix embed;  // (Z/p^c)^x -> G_K
    HomMatrix norm;   // G_K -> (Z/p^c)^x
    HomMatrix conj;   // G_K -> G_K
};

// level of the rational unit group matching G_K: n unramified, ceil(n/2) ramified
int rational_level(const ResidueRing& K);
StructureMaps structure_maps(const GroupPtr& GK, const GroupPtr& GQ);
StructureMaps structure_maps(const GroupPtr& GK);

}  // namespace galorb
