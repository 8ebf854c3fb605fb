#pragma once
// Minimal Atkin-Li pseudo-eigenvalue candidates and the LO counts built from them.
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "galorb/cyclotomic.hpp"
#include "galorb/gauss_sum.hpp"
#include "galorb/local_types.hpp"

namespace galorb {

// How Psi_p(-g_pi) in the uniformizer-square formula is evaluated.
//   NormOfUniformizer: Psi_p(pi^2), pi^2 = d
//   UniformizerClass:  Psi_p(-p)
enum class UniformizerReading { NormOfUniformizer, UniformizerClass };
std::string to_string(UniformizerReading r);

struct LambdaConfig {
    UniformizerReading reading = UniformizerReading::NormOfUniformizer;
    AdditiveSign sign = AdditiveSign::Positive;
};

enum class Verdict { Symmetric, Asymmetric };
std::string to_string(Verdict v);

struct LambdaClass {
    CycElt representative;
    LocalNebentypus psi;
    std::string orbit_tag;
    bool operator==(const LambdaClass&) const = default;
};

struct LambdaPair {
    CycElt lambda;  // the other member is -lambda
    Verdict verdict = Verdict::Symmetric;
    std::vector<LambdaClass> classes;  // one if symmetric, two if asymmetric
    std::string describe() const;      // e.g. "{+-1}", "{+-i}"
    bool operator==(const LambdaPair&) const = default;
};

// exp(2 pi i k / M) rendered as 1, -1, i, -i or zeta(k/M)
std::string describe_root(const CycElt& z);

bool lambda_equiv(const CycElt& z1, const CycElt& z2, const LocalNebentypus& psi, i64 p);

LambdaPair steinberg_lambda(const LocalNebentypus& psi, i64 p);

// orbit must be an SCR orbit; its representative theta is evaluated
LambdaPair scr_lambda_pair(const LocalTypeOrbit& orbit, const LambdaConfig& cfg = {});
LambdaPair scr_lambda_pair(const CharacterVec& theta, const LocalNebentypus& psi, int n,
                           const LambdaConfig& cfg = {});

enum class AsymPolicy { Computed, Parameter, Table };

struct LOCount {
    i64 p = 3;
    int n = 1;
    LocalNebentypus psi;
    AsymPolicy policy = AsymPolicy::Computed;
    i64 lt_total = 0;
    std::optional<i64> s_sym;   // known for computed policy
    std::optional<i64> s_asym;  // absent when left symbolic
    std::optional<i64> lo_total;
    std::string expression;  // e.g. "2 + |S_asym|" or "5"
    i64 two_valued = 0;      // two-valued types (computed policy)
    bool operator==(const LOCount&) const = default;
};

// closed-form LO row: base value and whether |S_asym| is added
struct LOTableEntry {
    i64 base = 0;
    bool has_asym = false;
};
LOTableEntry lo_table(i64 p, int n, const LocalNebentypus& psi);

LOCount lo_count(i64 p, int n, const LocalNebentypus& psi, AsymPolicy policy, i64 param = 0,
                 const LambdaConfig& cfg = {});

struct BoundFactor {
    i64 p;
    int e;
    LOCount lo;
    bool operator==(const BoundFactor&) const = default;
};

struct BoundResult {
    i64 N = 1;
    std::vector<BoundFactor> factors;
    std::optional<i64> value;
    std::string expression;
    bool conjectural = false;  // hypothesis on val_p(N) not met
    bool operator==(const BoundResult&) const = default;
};

// Psi given per prime; primes without an entry get default_local_nebentypus(N, p)
BoundResult lo_lower_bound(i64 N, const std::map<i64, LocalNebentypus>& psi, AsymPolicy policy, i64 param,
                           bool strict, const LambdaConfig& cfg = {});

// product of quadratic characters of conductor p_i: tame at p, Psi'(p) = prod_{q != p} (p/q)
LocalNebentypus default_local_nebentypus(i64 N, i64 p);

struct HypothesisError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Run both readings on the level-27 tame cell and compare with pairs {+-1}, {+-i}.
struct ReadingCalibration {
    UniformizerReading reading;
    std::vector<std::string> pairs;
    std::vector<Verdict> verdicts;
    bool matches = false;
    bool operator==(const ReadingCalibration&) const = default;
};
std::vector<ReadingCalibration> calibrate_readings(AdditiveSign sign = AdditiveSign::Positive);
UniformizerReading select_reading(const std::vector<ReadingCalibration>& cal);

}  // namespace galorb
