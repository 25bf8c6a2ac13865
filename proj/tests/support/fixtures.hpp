#pragma once

#include <string>
#include <vector>

#include "dmc/model.hpp"

namespace dmc::testing {

// Small builder helpers shared across the suites.
AttributeDecl attr(const std::string& name, const std::string& type,
                   Visibility vis = Visibility::Public);
OperationDecl op(const std::string& name, const std::string& return_type,
                 std::vector<Param> params = {}, Visibility vis = Visibility::Public);
Element classifier(ElementKind kind, const std::string& name, bool is_abstract = false);
Relationship rel(RelationshipKind kind, const std::string& source, const std::string& target,
                 std::vector<std::string> stereotypes = {});

// The running example: a concrete Researcher in the base model, an abstract
// Researcher plus Assistant/Professor in the delta, and the intended result
// of applying the delta onto the base.
Model figure1_base();
Model figure1_delta();
Model figure1_intended();

// Change-category example: Researcher loses salary:int, gains name:String,
// and becomes abstract. Both models carry the same model name.
Model researcher_from();
Model researcher_to();

// Inheritance chain A <- B <- C with two operations on A.
Model chain_model();

// A class/aspect model with one interaction that satisfies all ten
// multi-view rules.
Model multiview_clean();

// The clean fixture with exactly one rule's defect injected (1..10).
Model multiview_defect(int rule);

}  // namespace dmc::testing
