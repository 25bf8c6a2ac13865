#pragma once

#include <map>
#include <string>
#include <vector>

#include "dmc/matching.hpp"
#include "dmc/model.hpp"

namespace dmc {

enum class InconsistencyCategory {
    NFCon,    // inconsistent functionalities
    NCCon,    // not compliant with the intended model
    NDRCon,   // dangling references
    NASCon,   // abstract syntax violations
    NUMECon,  // meaningless (surplus) model elements
    NBFCon,   // behavioral feature deviations
    MV1,      // conflicting relationships across views
    MV2,      // around-advice return type vs advised operation
    MV3,      // object without class/aspect
    MV4,      // weaving into an element with no crosscut relationship
    MV5,      // message without name
    MV6,      // message without method
    MV7,      // message with wrong return type
    MV8,      // message in the wrong direction
    MV9,      // class without meaning (heuristic, warning)
    MV10,     // instance of abstract class
};

std::string to_string(InconsistencyCategory c);
bool is_multiview(InconsistencyCategory c);

enum class FindingSeverity { Error, Warning };

struct Inconsistency {
    InconsistencyCategory category = InconsistencyCategory::NCCon;
    std::vector<std::string> locations;  // qualified names
    std::string detail;
    FindingSeverity severity = FindingSeverity::Error;

    bool operator==(const Inconsistency&) const = default;
};

struct InconsistencyReport {
    std::vector<Inconsistency> findings;
    std::map<InconsistencyCategory, std::int64_t> counts_by_category;
    double rate = 0.0;
};

// Well-formedness: NASCon for duplicate attribute names, an abstract class
// inheriting from a concrete class, and interfaces with duplicate operation
// signatures; NDRCon for every dangling reference (relationship endpoints,
// provides/requires entries, lifeline classifiers).
std::vector<Inconsistency> check_wellformed(const Model& m);

// Semantic deviations against the intended model. Surplus composed elements
// are NUMECon; intended operations missing from provided interfaces are
// NFCon; paired operations deviating in returnType/params are NBFCon; every
// other paired-property deviation or missing intended element is NCCon.
std::vector<Inconsistency> check_against_intended(const Model& composed, const Model& intended,
                                                  const MatchPolicy& policy = {});

// The ten structure-vs-interaction rules (MV1..MV10). Returns empty when the
// model has no interactions.
std::vector<Inconsistency> check_multiview(const Model& m);

// findings / census total; 0 for an empty model.
double inconsistency_rate(const std::vector<Inconsistency>& findings, const Model& m);

InconsistencyReport make_report(std::vector<Inconsistency> findings, const Model& m);

}  // namespace dmc
