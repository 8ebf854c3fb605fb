#pragma once
// Linear algebra over Z/M and over products of cyclic groups.
#include <optional>
#include <vector>

#include "galorb/arith.hpp"

namespace galorb {

using IVec = std::vector<i64>;
using IMat = std::vector<IVec>;  // row-major

struct ModSolution {
    i64 modulus = 1;
    IVec particular;
    std::vector<IVec> homogeneous;  // generators of the solution module of A x = 0
};

// All x in (Z/modulus)^cols with A x = b (mod modulus). nullopt if inconsistent.
std::optional<ModSolution> solve_mod(const IMat& A, const IVec& b, i64 modulus, std::size_t cols);

// Subgroup of Z/m_1 x ... x Z/m_r in triangular form.
// Row i has zeros before column i and pivot g_i | m_i at column i.
struct SubgroupEchelon {
    IVec moduli;
    std::vector<IVec> rows;
    IVec pivots;

    i64 order() const;
    // mixed radix, digit i ranges over [0, m_i / g_i)
    IVec element(i64 index) const;
    std::optional<i64> index_of(const IVec& v) const;
    bool contains(const IVec& v) const { return index_of(v).has_value(); }
};

SubgroupEchelon echelon(const std::vector<IVec>& gens, const IVec& moduli);

IVec reduce_vec(IVec v, const IVec& moduli);

}  // namespace galorb
