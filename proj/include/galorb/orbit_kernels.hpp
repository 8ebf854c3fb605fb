#pragma once
// Orbit counting over character cosets.
// The parallel kernel sums 1/|orbit| from orbit-size formulas; the serial
// reference walks every orbit explicitly.
#include <functional>
#include <map>
#include <optional>

#include "galorb/characters.hpp"

namespace galorb {

// Power maps chi -> chi^k, plus at most one extra involution commuting with them.
struct OrbitAction {
    enum class Kind { Power, Conjugation, Swap };
    Kind kind = Kind::Power;
    std::vector<IVec> conj_columns;  // matrix of the conjugation on group elements
    IVec swap_center;                // Swap: chi -> center - chi (center of order <= 2)

    static OrbitAction power() { return {}; }
    static OrbitAction conjugation(const HomMatrix& conj);
    static OrbitAction swap(IVec center);

    // image of c under the involution; nullopt for pure power action
    std::optional<IVec> apply(const GroupPresentation& G, const IVec& c) const;
};

using ExpFilter = std::function<bool(const IVec&)>;

struct OrbitTally {
    i64 orbits = 0;
    i64 members = 0;
    std::map<i64, i64> by_size;  // orbit size -> number of orbits
    bool operator==(const OrbitTally&) const = default;
};

struct OrbitListing {
    std::vector<IVec> representatives;  // first member in coset index order
    std::vector<i64> sizes;
};

// true iff d = k*c for some k coprime to ord(c)
bool in_power_orbit(const GroupPresentation& G, const IVec& c, const IVec& d);

// size of the orbit of c
i64 orbit_size(const GroupPresentation& G, const IVec& c, const OrbitAction& act);

OrbitTally count_orbits_parallel(const CharacterCoset& S, const ExpFilter& keep, const OrbitAction& act);
OrbitTally count_orbits_serial(const CharacterCoset& S, const ExpFilter& keep, const OrbitAction& act);
OrbitListing list_orbits(const CharacterCoset& S, const ExpFilter& keep, const OrbitAction& act);

}  // namespace galorb
