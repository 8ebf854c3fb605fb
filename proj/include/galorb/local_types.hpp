#pragma once
// Galois orbits of local inertial types for GL(2) with quadratic nebentypus.
#include <optional>
#include <string>
#include <vector>

#include "galorb/characters.hpp"
#include "galorb/orbit_kernels.hpp"

namespace galorb {

enum class TypeKind { PS, St, SCU, SCR };
std::string to_string(TypeKind k);

struct LocalTypeOrbit {
    TypeKind kind = TypeKind::PS;
    i64 p = 3;
    int n = 1;
    LocalNebentypus psi;
    std::optional<QuadExt> ext;  // supercuspidal only
    GroupPtr host;               // group carrying the representative
    IVec rep;                    // chi_1 (PS), mu (St), theta (SC)
    IVec partner;                // chi_2 for PS
    i64 orbit_size = 0;          // characters in the orbit
};

struct LTCount {
    i64 ps = 0, st = 0, scu = 0, scr = 0;
    i64 total() const { return ps + st + scu + scr; }
    bool operator==(const LTCount&) const = default;
};

struct LTEnumeration {
    std::vector<LocalTypeOrbit> orbits;
    LTCount count;
};

enum class EnumMode { Listing, CountOnly };

void require_valid_prime(i64 p);

// brute force over characters
LTEnumeration enumerate_orbits(i64 p, int n, const LocalNebentypus& psi, EnumMode mode = EnumMode::Listing,
                               i64 nonresidue = 0);
LTCount lt_closed_form(i64 p, int n, const LocalNebentypus& psi);

// orbits of primitive central-fiber characters under powers and conjugation
i64 primitive_orbit_count(i64 p, int n, const QuadExt& K, const LocalNebentypus& psi, bool parallel = true);
i64 primitive_orbit_closed_form(i64 p, int n, const QuadExt& K, const LocalNebentypus& psi);

// supercuspidal character data at a given conductor: fiber plus filters
struct SupercuspidalFamily {
    QuadExt ext;
    GroupPtr group;
    StructureMaps maps;
    SubgroupEchelon norm_kernel;
    CharacterCoset fiber;
    ExpFilter keep;  // primitive and not norm-factoring
    OrbitAction action;
};
SupercuspidalFamily supercuspidal_family(const QuadExt& K, int a, const LocalNebentypus& psi);

struct CrossCheckCell {
    i64 p = 3;
    int n = 1;
    LocalNebentypus psi;
    LTCount brute;
    LTCount closed;
    bool match() const { return brute == closed; }
    std::vector<LocalTypeOrbit> offending;  // filled on mismatch
};

struct CrossCheckReport {
    std::vector<CrossCheckCell> cells;
    i64 discrepancies() const;
    bool ok() const { return discrepancies() == 0; }
};

CrossCheckReport cross_check(const std::vector<i64>& primes, int n_min, int n_max,
                             const std::vector<LocalNebentypus>& psis);

}  // namespace galorb
