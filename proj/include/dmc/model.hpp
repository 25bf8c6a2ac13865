#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dmc {

enum class ModelKind { ClassDiagram, ComponentDiagram, Mixed };
enum class ElementKind { Class, Interface, Component, Aspect };
enum class Visibility { Public, Private, Protected, Package };
enum class RelationshipKind {
    Association,
    Inheritance,
    Dependency,
    Realization,
    Aggregation,
    Crosscut,
    Use,
    Instance
};
enum class AdviceKind { Before, After, Around };

std::string to_string(ModelKind k);
std::string to_string(ElementKind k);
std::string to_string(Visibility v);
std::string to_string(RelationshipKind k);
std::string to_string(AdviceKind k);

std::optional<ModelKind> model_kind_from_string(const std::string& s);
std::optional<ElementKind> element_kind_from_string(const std::string& s);
std::optional<Visibility> visibility_from_string(const std::string& s);
std::optional<RelationshipKind> relationship_kind_from_string(const std::string& s);
std::optional<AdviceKind> advice_kind_from_string(const std::string& s);

struct AttributeDecl {
    std::string name;
    std::string type_name;
    Visibility visibility = Visibility::Public;

    bool operator==(const AttributeDecl&) const = default;
};

struct Param {
    std::string name;
    std::string type_name;

    bool operator==(const Param&) const = default;
};

struct OperationDecl {
    std::string name;
    std::string return_type;
    std::vector<Param> params;
    Visibility visibility = Visibility::Public;

    // name + ordered parameter types; identifies the operation within its element
    std::string signature() const;

    bool operator==(const OperationDecl&) const = default;
};

struct AdviceDecl {
    AdviceKind kind = AdviceKind::Before;
    std::string name;
    std::string pointcut;
    std::string return_type;  // around advices only

    bool operator==(const AdviceDecl&) const = default;
};

// Element references (provides/requires, relationship endpoints, lifeline
// classifiers) are stored model-locally: "Researcher", not "M::Researcher".
// The DMF layer adds/strips the owning model's prefix, so models with
// different names compare structurally without rewriting.
struct Element {
    ElementKind kind = ElementKind::Class;
    std::string name;
    bool is_abstract = false;
    std::vector<std::string> stereotypes;     // set, kept sorted
    std::vector<AttributeDecl> attributes;
    std::vector<OperationDecl> operations;
    std::vector<std::string> provides;        // interface refs, sorted
    std::vector<std::string> requires_ifaces; // interface refs, sorted
    std::vector<AdviceDecl> advices;          // aspects only

    bool operator==(const Element&) const = default;
};

struct Relationship {
    RelationshipKind kind = RelationshipKind::Association;
    std::string source;
    std::string target;
    std::vector<std::string> stereotypes;  // set, kept sorted

    bool operator==(const Relationship&) const = default;
};

struct Lifeline {
    std::string id;
    std::string name;
    std::string classifier;

    bool operator==(const Lifeline&) const = default;
};

struct MessageDecl {
    std::string name;  // may be empty; rule MV5 reports that
    std::string from;
    std::string to;
    std::string return_type;

    bool operator==(const MessageDecl&) const = default;
};

struct Interaction {
    std::string name;
    std::vector<Lifeline> lifelines;   // sorted by id after normalization
    std::vector<MessageDecl> messages; // message order is semantic, preserved

    bool operator==(const Interaction&) const = default;
};

struct Model {
    std::string name;
    ModelKind kind = ModelKind::Mixed;
    std::vector<Element> elements;
    std::vector<Relationship> relationships;
    std::vector<Interaction> interactions;

    bool operator==(const Model&) const = default;
};

// Canonical form: elements sorted by name, members by (kind, name, signature),
// sets sorted and deduplicated, relationships sorted, interactions sorted by
// name. Idempotent.
Model normalize(Model m);

bool structurally_equal(const Model& a, const Model& b);

// "M::Researcher" for top-level elements; members get "::<member>" appended,
// operations keyed by signature so overloads stay distinct.
std::string qualified_name(const Model& m, const Element& e);

// Accepts "Model::Name" (prefix stripped when it matches m.name) or a bare
// local name. Absent is a value, not an error.
const Element* resolve(const Model& m, const std::string& qualified_or_local);

// Strips "<model name>::" when present; other prefixes are kept verbatim
// (they resolve to nothing, which the consistency checks report).
std::string local_ref(const Model& m, const std::string& ref);

struct Census {
    std::int64_t classes = 0;
    std::int64_t interfaces = 0;
    std::int64_t components = 0;
    std::int64_t aspects = 0;
    std::int64_t attributes = 0;
    std::int64_t operations = 0;
    std::int64_t relationships = 0;
    std::int64_t total = 0;

    bool operator==(const Census&) const = default;
};

// Counting rule: classifiers + attributes + operations + relationships.
// Stereotypes, advices, and interactions are not counted.
Census element_census(const Model& m);

}  // namespace dmc
