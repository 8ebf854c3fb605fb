#pragma once
// Result records for the command line front end and their JSON forms.
#include <string>
#include <vector>

#include "galorb/lmfdb.hpp"
#include "galorb/pseudo_eigenvalues.hpp"
#include "json.hpp"

namespace galorb {

struct LTRow {
    i64 p = 3;
    int n = 1;
    LocalNebentypus psi;
    LTCount brute;
    LTCount closed;
    bool match = false;
    std::vector<std::string> offending;
    bool operator==(const LTRow&) const = default;
};
LTRow lt_row(i64 p, int n, const LocalNebentypus& psi);
std::string describe(const LocalTypeOrbit& o);

struct PrimitiveRow {
    i64 p = 3;
    int n = 1;
    std::string ext;
    LocalNebentypus psi;
    i64 brute = 0;
    i64 closed = 0;
    bool match = false;
    bool operator==(const PrimitiveRow&) const = default;
};

struct LORow {
    LOCount computed;
    LOCount table;
    bool match = false;  // vacuous when the table row is symbolic
    bool operator==(const LORow&) const = default;
};
LORow lo_row(i64 p, int n, const LocalNebentypus& psi, const LambdaConfig& cfg);

struct SteinbergRow {
    i64 p = 3;
    int value_at_p = 1;
    std::string pair;
    Verdict verdict = Verdict::Symmetric;
    bool match = false;
    bool operator==(const SteinbergRow&) const = default;
};

struct VerifyGrid {
    std::vector<i64> primes{3, 5, 7, 11, 13};
    int n_min = 1;
    int n_max = 6;
    std::vector<i64> lo_primes{3, 5, 7};
    int lo_n_max = 5;
};

struct VerifyReport {
    std::vector<ReadingCalibration> calibration;
    UniformizerReading selected = UniformizerReading::NormOfUniformizer;
    std::vector<PrimitiveRow> primitive;
    std::vector<LTRow> lt;
    std::vector<LORow> lo;
    std::vector<SteinbergRow> steinberg;
    i64 mismatches = 0;
    bool operator==(const VerifyReport&) const = default;
};

// the cells are independent and run in parallel; row order is fixed by the grid
VerifyReport verify_all(const VerifyGrid& grid = {});

// Psi states swept by the tables: tame / unramified, Psi'(p) = +1 / -1
std::vector<LocalNebentypus> table_nebentypus_states();

std::string to_string(AsymPolicy p);

void to_json(nlohmann::json& j, const LocalNebentypus& v);
void from_json(const nlohmann::json& j, LocalNebentypus& v);
void to_json(nlohmann::json& j, const LTCount& v);
void from_json(const nlohmann::json& j, LTCount& v);
void to_json(nlohmann::json& j, const CycElt& v);
void from_json(const nlohmann::json& j, CycElt& v);
void to_json(nlohmann::json& j, const LambdaClass& v);
void from_json(const nlohmann::json& j, LambdaClass& v);
void to_json(nlohmann::json& j, const LambdaPair& v);
void from_json(const nlohmann::json& j, LambdaPair& v);
void to_json(nlohmann::json& j, const LOCount& v);
void from_json(const nlohmann::json& j, LOCount& v);
void to_json(nlohmann::json& j, const BoundResult& v);
void from_json(const nlohmann::json& j, BoundResult& v);
void to_json(nlohmann::json& j, const ReadingCalibration& v);
void from_json(const nlohmann::json& j, ReadingCalibration& v);
void to_json(nlohmann::json& j, const LTRow& v);
void from_json(const nlohmann::json& j, LTRow& v);
void to_json(nlohmann::json& j, const PrimitiveRow& v);
void from_json(const nlohmann::json& j, PrimitiveRow& v);
void to_json(nlohmann::json& j, const LORow& v);
void from_json(const nlohmann::json& j, LORow& v);
void to_json(nlohmann::json& j, const SteinbergRow& v);
void from_json(const nlohmann::json& j, SteinbergRow& v);
void to_json(nlohmann::json& j, const VerifyReport& v);
void from_json(const nlohmann::json& j, VerifyReport& v);

namespace lmfdb {
void to_json(nlohmann::json& j, const ObservedLambda& v);
void from_json(const nlohmann::json& j, ObservedLambda& v);
void to_json(nlohmann::json& j, const NewformRecord& v);
void from_json(const nlohmann::json& j, NewformRecord& v);
void to_json(nlohmann::json& j, const ComparisonRow& v);
void from_json(const nlohmann::json& j, ComparisonRow& v);
}  // namespace lmfdb

// compact, sorted keys, trailing newline
std::string emit_json(const nlohmann::json& j);

}  // namespace galorb
