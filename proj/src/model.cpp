#include "dmc/model.hpp"

#include <algorithm>
#include <tuple>

namespace dmc {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::ClassDiagram: return "class-diagram";
        case ModelKind::ComponentDiagram: return "component-diagram";
        case ModelKind::Mixed: return "mixed";
    }
    return "mixed";
}

std::string to_string(ElementKind k) {
    switch (k) {
        case ElementKind::Class: return "class";
        case ElementKind::Interface: return "interface";
        case ElementKind::Component: return "component";
        case ElementKind::Aspect: return "aspect";
    }
    return "class";
}

std::string to_string(Visibility v) {
    switch (v) {
        case Visibility::Public: return "public";
        case Visibility::Private: return "private";
        case Visibility::Protected: return "protected";
        case Visibility::Package: return "package";
    }
    return "public";
}

std::string to_string(RelationshipKind k) {
    switch (k) {
        case RelationshipKind::Association: return "association";
        case RelationshipKind::Inheritance: return "inheritance";
        case RelationshipKind::Dependency: return "dependency";
        case RelationshipKind::Realization: return "realization";
        case RelationshipKind::Aggregation: return "aggregation";
        case RelationshipKind::Crosscut: return "crosscut";
        case RelationshipKind::Use: return "use";
        case RelationshipKind::Instance: return "instance";
    }
    return "association";
}

std::string to_string(AdviceKind k) {
    switch (k) {
        case AdviceKind::Before: return "before";
        case AdviceKind::After: return "after";
        case AdviceKind::Around: return "around";
    }
    return "before";
}

std::optional<ModelKind> model_kind_from_string(const std::string& s) {
    if (s == "class-diagram") return ModelKind::ClassDiagram;
    if (s == "component-diagram") return ModelKind::ComponentDiagram;
    if (s == "mixed") return ModelKind::Mixed;
    return std::nullopt;
}

std::optional<ElementKind> element_kind_from_string(const std::string& s) {
    if (s == "class") return ElementKind::Class;
    if (s == "interface") return ElementKind::Interface;
    if (s == "component") return ElementKind::Component;
    if (s == "aspect") return ElementKind::Aspect;
    return std::nullopt;
}

std::optional<Visibility> visibility_from_string(const std::string& s) {
    if (s == "public") return Visibility::Public;
    if (s == "private") return Visibility::Private;
    if (s == "protected") return Visibility::Protected;
    if (s == "package") return Visibility::Package;
    return std::nullopt;
}

std::optional<RelationshipKind> relationship_kind_from_string(const std::string& s) {
    if (s == "association") return RelationshipKind::Association;
    if (s == "inheritance") return RelationshipKind::Inheritance;
    if (s == "dependency") return RelationshipKind::Dependency;
    if (s == "realization") return RelationshipKind::Realization;
    if (s == "aggregation") return RelationshipKind::Aggregation;
    if (s == "crosscut") return RelationshipKind::Crosscut;
    if (s == "use") return RelationshipKind::Use;
    if (s == "instance") return RelationshipKind::Instance;
    return std::nullopt;
}

std::optional<AdviceKind> advice_kind_from_string(const std::string& s) {
    if (s == "before") return AdviceKind::Before;
    if (s == "after") return AdviceKind::After;
    if (s == "around") return AdviceKind::Around;
    return std::nullopt;
}

std::string OperationDecl::signature() const {
    std::string sig = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i > 0) sig += ",";
        sig += params[i].type_name;
    }
    sig += ")";
    return sig;
}

namespace {

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Model normalize(Model m) {
    for (auto& e : m.elements) {
        sort_unique(e.stereotypes);
        sort_unique(e.provides);
        sort_unique(e.requires_ifaces);
        std::sort(e.attributes.begin(), e.attributes.end(),
                  [](const AttributeDecl& a, const AttributeDecl& b) { return a.name < b.name; });
        std::sort(e.operations.begin(), e.operations.end(),
                  [](const OperationDecl& a, const OperationDecl& b) {
                      return std::make_tuple(a.name, a.signature(), a.return_type) <
                             std::make_tuple(b.name, b.signature(), b.return_type);
                  });
        std::sort(e.advices.begin(), e.advices.end(), [](const AdviceDecl& a, const AdviceDecl& b) {
            return std::make_tuple(static_cast<int>(a.kind), a.name, a.pointcut) <
                   std::make_tuple(static_cast<int>(b.kind), b.name, b.pointcut);
        });
    }
    std::stable_sort(m.elements.begin(), m.elements.end(),
                     [](const Element& a, const Element& b) { return a.name < b.name; });
    for (auto& r : m.relationships) sort_unique(r.stereotypes);
    std::stable_sort(m.relationships.begin(), m.relationships.end(),
                     [](const Relationship& a, const Relationship& b) {
                         return std::make_tuple(static_cast<int>(a.kind), a.source, a.target,
                                                a.stereotypes) <
                                std::make_tuple(static_cast<int>(b.kind), b.source, b.target,
                                                b.stereotypes);
                     });
    for (auto& i : m.interactions) {
        std::sort(i.lifelines.begin(), i.lifelines.end(),
                  [](const Lifeline& a, const Lifeline& b) { return a.id < b.id; });
    }
    std::stable_sort(m.interactions.begin(), m.interactions.end(),
                     [](const Interaction& a, const Interaction& b) { return a.name < b.name; });
    return m;
}

bool structurally_equal(const Model& a, const Model& b) {
    return normalize(a) == normalize(b);
}

std::string qualified_name(const Model& m, const Element& e) {
    return m.name + "::" + e.name;
}

std::string local_ref(const Model& m, const std::string& ref) {
    const std::string prefix = m.name + "::";
    if (ref.size() > prefix.size() && ref.compare(0, prefix.size(), prefix) == 0) {
        return ref.substr(prefix.size());
    }
    return ref;
}

const Element* resolve(const Model& m, const std::string& qualified_or_local) {
    const std::string local = local_ref(m, qualified_or_local);
    for (const auto& e : m.elements) {
        if (e.name == local) return &e;
    }
    return nullptr;
}

Census element_census(const Model& m) {
    Census c;
    for (const auto& e : m.elements) {
        switch (e.kind) {
            case ElementKind::Class: ++c.classes; break;
            case ElementKind::Interface: ++c.interfaces; break;
            case ElementKind::Component: ++c.components; break;
            case ElementKind::Aspect: ++c.aspects; break;
        }
        c.attributes += static_cast<std::int64_t>(e.attributes.size());
        c.operations += static_cast<std::int64_t>(e.operations.size());
    }
    c.relationships = static_cast<std::int64_t>(m.relationships.size());
    c.total = c.classes + c.interfaces + c.components + c.aspects + c.attributes + c.operations +
              c.relationships;
    return c;
}

}  // namespace dmc
