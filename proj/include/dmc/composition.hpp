#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dmc/matching.hpp"
#include "dmc/model.hpp"

namespace dmc {

enum class Algorithm { Override, Merge, Union, ThreeWay };
enum class WinnerSide { Left, Right, NA };
enum class ConflictResolution { LeftWins, RightWins, Unresolved };
enum class ThreeWayPolicy { PreferMine, PreferTheirs, Fail };

std::string to_string(Algorithm a);
std::string to_string(WinnerSide w);
std::string to_string(ConflictResolution r);

// A contradicting value assignment between corresponding elements.
struct Conflict {
    std::string left_element;   // qualified name on the left input
    std::string right_element;  // qualified name on the right input
    std::string property;       // e.g. "isAbstract", "operation getName().returnType"
    std::string left_value;
    std::string right_value;
    ConflictResolution resolution = ConflictResolution::Unresolved;

    bool operator==(const Conflict&) const = default;
};

struct CompositionResult {
    Model output;
    std::vector<Conflict> conflicts;
    Algorithm algorithm = Algorithm::Override;
    WinnerSide winner = WinnerSide::NA;
};

class ThreeWayConflictError : public std::runtime_error {
public:
    explicit ThreeWayConflictError(std::vector<Conflict> conflicts);

    const std::vector<Conflict>& conflicts() const { return conflicts_; }

private:
    std::vector<Conflict> conflicts_;
};

// One Conflict per (pair, property) whose values differ, over the closed
// property set: isAbstract, stereotypes, attribute type/visibility, operation
// returnType/params/visibility, relationship kind/stereotypes, advice
// kind/pointcut. Deterministic order; resolution left Unresolved.
std::vector<Conflict> detect_conflicts(const Model& a, const Model& b,
                                       const CorrespondenceMap& corr);

// Winner's element replaces the loser's wholesale for every pair (the loser's
// members of a matched container are dropped); unmatched elements of both
// sides are inserted unchanged.
CompositionResult compose_override(const Model& winner, const Model& loser,
                                   const CorrespondenceMap& corr);

// Paired elements are combined recursively: scalar property conflicts resolve
// toward the winner and are recorded; member sets union by correspondence.
// Stereotype sets union silently: contradicting stereotypes are not treated
// as conflicts here, both survive for the consistency checks to flag.
CompositionResult compose_merge(const Model& winner, const Model& loser,
                                const CorrespondenceMap& corr);

// Both copies of every paired element are kept under source-prefixed names
// (BaseModel.Researcher / DeltaModel.Researcher); each side's references are
// retargeted to its own renamed copies. Never conflicts.
CompositionResult compose_union(const Model& a, const Model& b, const CorrespondenceMap& corr);

// Merge(M_P, M_A, M_B): per element and property, a change on one side wins,
// identical changes collapse, divergent changes conflict and resolve per the
// policy. Delete-vs-modify and divergent renames of an operation slot are
// conflicts. The Fail policy throws ThreeWayConflictError when any conflict
// exists.
CompositionResult three_way_merge(const Model& parent, const Model& mine, const Model& theirs,
                                  ThreeWayPolicy on_conflict,
                                  const MatchPolicy& match_policy = {});

}  // namespace dmc
