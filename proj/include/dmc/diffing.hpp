#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmc/matching.hpp"
#include "dmc/model.hpp"

namespace dmc {

enum class EditAction { Create, Remove, Modify };

std::string to_string(EditAction a);

// One edit step. Creates/removes carry the affected item as payload; modifies
// carry both value renderings plus, for structured values, the new value in
// set_value/params_value. Member ops name their owner and locate the member
// by target key (attribute name, operation signature, advice "kind:name").
struct EditOp {
    EditAction action = EditAction::Modify;
    std::string path;
    std::string property;
    std::string old_value;
    std::string new_value;
    std::string owner;
    std::string target;
    std::optional<Element> element;
    std::optional<AttributeDecl> attribute;
    std::optional<OperationDecl> operation;
    std::optional<AdviceDecl> advice;
    std::optional<Relationship> relationship;
    std::optional<Interaction> interaction;
    std::optional<std::vector<std::string>> set_value;
    std::optional<std::vector<Param>> params_value;
};

struct ChangeTally {
    std::int64_t additions = 0;
    std::int64_t removals = 0;
    std::int64_t modifications = 0;
    std::int64_t derivations = 0;
    std::vector<std::size_t> derivation_group_sizes;

    bool operator==(const ChangeTally&) const = default;
};

struct EditScript {
    std::vector<EditOp> ops;
    ChangeTally tally;
};

class ApplyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Minimal under the matching: element-level create/remove, member-level
// create/remove inside paired containers, property-level modify. Applying to
// `from` yields `to`.
EditScript diff_models(const Model& from, const Model& to, const MatchPolicy& policy = {});

// Applies ops in order. Throws ApplyError for unresolvable paths and
// duplicate creations.
Model apply_edits(const Model& m, const EditScript& script);

// Creates are additions, removes removals, modifies modifications, except
// that a removed element whose member names reappear under two or more
// created elements forms one derivation group.
ChangeTally classify_changes(const EditScript& script);

// g: the number of edit operations transforming composed into intended.
std::int64_t resolution_effort(const Model& composed, const Model& intended,
                               const MatchPolicy& policy = {});

}  // namespace dmc
