#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dmc/model.hpp"

namespace dmc {

struct MatchPolicy {
    enum class ClassifierRule { ByName };
    enum class MemberRule { ByName, BySignature };

    ClassifierRule classifier_rule = ClassifierRule::ByName;
    MemberRule member_rule = MemberRule::BySignature;
    bool case_sensitive = true;
};

// Per-element member pairing. Indices refer to the normalized element's
// attribute/operation/advice vectors.
struct MemberMatch {
    std::vector<std::pair<std::size_t, std::size_t>> attributes;
    std::vector<std::size_t> left_only_attributes;
    std::vector<std::size_t> right_only_attributes;
    std::vector<std::pair<std::size_t, std::size_t>> operations;
    std::vector<std::size_t> left_only_operations;
    std::vector<std::size_t> right_only_operations;
    std::vector<std::pair<std::size_t, std::size_t>> advices;
    std::vector<std::size_t> left_only_advices;
    std::vector<std::size_t> right_only_advices;
};

MemberMatch match_members(const Element& left, const Element& right, const MatchPolicy& policy,
                          std::vector<std::string>* warnings = nullptr);

// Relationship pairing between two models given the element correspondence
// (left local name -> right local name). Relationships pair when kind and
// both mapped endpoints coincide; duplicates pair by occurrence order.
struct RelationshipMatch {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> left_only;
    std::vector<std::size_t> right_only;
};

RelationshipMatch match_relationships(const Model& a, const Model& b,
                                      const std::map<std::string, std::string>& element_map,
                                      const MatchPolicy& policy);

// The matching result over two models: a partial bijection between their
// census elements (classifiers, attributes, operations, relationships).
struct CorrespondenceMap {
    std::vector<std::pair<std::string, std::string>> pairs;  // qualified names
    std::vector<std::string> unmatched_left;
    std::vector<std::string> unmatched_right;
    std::vector<std::string> warnings;
    MatchPolicy policy;

    // classifier pairing by local name, for the composition algorithms
    std::vector<std::pair<std::string, std::string>> element_pairs;

    std::map<std::string, std::string> element_map() const;
};

CorrespondenceMap match_models(const Model& a, const Model& b, const MatchPolicy& policy = {});

// Stable textual identity of a relationship inside its model, used in
// correspondence pairs and reports.
std::string relationship_key(const Model& m, const Relationship& r, std::size_t occurrence);

}  // namespace dmc
