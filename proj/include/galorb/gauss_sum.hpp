#pragma once
// Gauss sums of primitive characters of residue unit groups.
#include "galorb/characters.hpp"
#include "galorb/cyclotomic.hpp"

namespace galorb {

// psi(y) = exp(sign * 2 pi i * principal part of y)
enum class AdditiveSign { Positive = 1, Negative = -1 };

struct GaussParams {
    AdditiveSign sign = AdditiveSign::Positive;
};

// Unnormalized sum over x in (O/P^a)^x of theta^{-1}(x) psi_K(x / c), a = conductor of theta,
// psi_K = psi o Tr. c = p^a for Q_p and unramified K (n(psi_K) = 0), c = pi^{a+1} for ramified K
// (n(psi_K) = 1). theta must be primitive on its host group,
// or trivial on a level-1 group.
CycElt gauss_sum(const CharacterVec& theta, GaussParams params = {}, bool parallel = true);

// cyclotomic level used for theta's Gauss sum
i64 gauss_sum_level(const GroupPresentation& G);
// p-power level of the additive character values, and the exponent of psi_K(x/c)
i64 additive_level(const ResidueRing& R);
i64 additive_exponent(const ResidueRing& R, const RingElt& x, AdditiveSign sign);

namespace kernels {
// exponent histogram of the summands at level gauss_sum_level(host)
// parallel: walks the group through its generators; serial: scans residues and takes discrete logs
std::vector<i64> gauss_histogram_parallel(const CharacterVec& theta, AdditiveSign sign);
std::vector<i64> gauss_histogram_serial(const CharacterVec& theta, AdditiveSign sign);
}  // namespace kernels

}  // namespace galorb
