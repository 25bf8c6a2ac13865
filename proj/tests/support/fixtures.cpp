#include "support/fixtures.hpp"

#include <algorithm>
#include <stdexcept>

namespace dmc::testing {

AttributeDecl attr(const std::string& name, const std::string& type, Visibility vis) {
    return AttributeDecl{name, type, vis};
}

OperationDecl op(const std::string& name, const std::string& return_type,
                 std::vector<Param> params, Visibility vis) {
    return OperationDecl{name, return_type, std::move(params), vis};
}

Element classifier(ElementKind kind, const std::string& name, bool is_abstract) {
    Element e;
    e.kind = kind;
    e.name = name;
    e.is_abstract = is_abstract;
    return e;
}

Relationship rel(RelationshipKind kind, const std::string& source, const std::string& target,
                 std::vector<std::string> stereotypes) {
    return Relationship{kind, source, target, std::move(stereotypes)};
}

Model figure1_base() {
    Model m;
    m.name = "BaseModel";
    m.kind = ModelKind::ClassDiagram;
    Element researcher = classifier(ElementKind::Class, "Researcher", false);
    researcher.operations.push_back(op("getName", "string"));
    m.elements.push_back(std::move(researcher));
    return normalize(m);
}

Model figure1_delta() {
    Model m;
    m.name = "DeltaModel";
    m.kind = ModelKind::ClassDiagram;

    Element researcher = classifier(ElementKind::Class, "Researcher", true);
    researcher.attributes.push_back(attr("name", "String"));
    m.elements.push_back(std::move(researcher));

    Element assistant = classifier(ElementKind::Class, "Assistant", false);
    assistant.operations.push_back(op("getSalary", "int"));
    m.elements.push_back(std::move(assistant));

    Element professor = classifier(ElementKind::Class, "Professor", false);
    professor.operations.push_back(op("getSalary", "int"));
    m.elements.push_back(std::move(professor));

    m.relationships.push_back(rel(RelationshipKind::Inheritance, "Assistant", "Researcher"));
    m.relationships.push_back(rel(RelationshipKind::Inheritance, "Professor", "Researcher"));
    return normalize(m);
}

Model figure1_intended() {
    // merge applied from the delta model to the base model
    Model m;
    m.name = "IntendedModel";
    m.kind = ModelKind::ClassDiagram;

    Element researcher = classifier(ElementKind::Class, "Researcher", true);
    researcher.attributes.push_back(attr("name", "String"));
    researcher.operations.push_back(op("getName", "string"));
    m.elements.push_back(std::move(researcher));

    Element assistant = classifier(ElementKind::Class, "Assistant", false);
    assistant.operations.push_back(op("getSalary", "int"));
    m.elements.push_back(std::move(assistant));

    Element professor = classifier(ElementKind::Class, "Professor", false);
    professor.operations.push_back(op("getSalary", "int"));
    m.elements.push_back(std::move(professor));

    m.relationships.push_back(rel(RelationshipKind::Inheritance, "Assistant", "Researcher"));
    m.relationships.push_back(rel(RelationshipKind::Inheritance, "Professor", "Researcher"));
    return normalize(m);
}

Model researcher_from() {
    Model m;
    m.name = "M";
    m.kind = ModelKind::ClassDiagram;
    Element researcher = classifier(ElementKind::Class, "Researcher", false);
    researcher.attributes.push_back(attr("salary", "int"));
    m.elements.push_back(std::move(researcher));
    return normalize(m);
}

Model researcher_to() {
    Model m;
    m.name = "M";
    m.kind = ModelKind::ClassDiagram;
    Element researcher = classifier(ElementKind::Class, "Researcher", true);
    researcher.attributes.push_back(attr("name", "String"));
    m.elements.push_back(std::move(researcher));
    return normalize(m);
}

Model chain_model() {
    Model m;
    m.name = "Chain";
    m.kind = ModelKind::ClassDiagram;
    Element a = classifier(ElementKind::Class, "A");
    a.operations.push_back(op("one", "void"));
    a.operations.push_back(op("two", "void"));
    m.elements.push_back(std::move(a));
    m.elements.push_back(classifier(ElementKind::Class, "B"));
    m.elements.push_back(classifier(ElementKind::Class, "C"));
    m.relationships.push_back(rel(RelationshipKind::Inheritance, "B", "A"));
    m.relationships.push_back(rel(RelationshipKind::Inheritance, "C", "B"));
    return normalize(m);
}

Model multiview_clean() {
    Model m;
    m.name = "Bank";
    m.kind = ModelKind::Mixed;

    Element account = classifier(ElementKind::Class, "Account", false);
    account.attributes.push_back(attr("id", "string"));
    account.operations.push_back(op("getBalance", "double"));
    m.elements.push_back(std::move(account));

    Element customer = classifier(ElementKind::Class, "Customer", false);
    customer.operations.push_back(op("notify", "void"));
    m.elements.push_back(std::move(customer));

    Element trace = classifier(ElementKind::Aspect, "TraceAspect", false);
    trace.stereotypes.push_back("aspect");
    trace.advices.push_back(AdviceDecl{AdviceKind::After, "logOperations",
                                       "Account.getBalance", ""});
    m.elements.push_back(std::move(trace));

    m.relationships.push_back(
        rel(RelationshipKind::Crosscut, "TraceAspect", "Account", {"crosscut"}));
    m.relationships.push_back(rel(RelationshipKind::Association, "Customer", "Account"));

    Interaction ia;
    ia.name = "balanceCheck";
    ia.lifelines.push_back(Lifeline{"a", "acc", "Account"});
    ia.lifelines.push_back(Lifeline{"c", "cust", "Customer"});
    ia.lifelines.push_back(Lifeline{"t", "trace", "TraceAspect"});
    ia.messages.push_back(MessageDecl{"getBalance", "c", "a", "double"});
    ia.messages.push_back(MessageDecl{"logOperations", "t", "a", ""});
    ia.messages.push_back(MessageDecl{"notify", "a", "c", "void"});
    m.interactions.push_back(std::move(ia));
    return normalize(m);
}

Model multiview_defect(int rule) {
    Model m = multiview_clean();
    auto find_elem = [&m](const std::string& name) -> Element& {
        for (auto& e : m.elements) {
            if (e.name == name) return e;
        }
        throw std::logic_error("fixture element missing: " + name);
    };
    auto& messages = m.interactions[0].messages;
    auto message_named = [&messages](const std::string& name) -> MessageDecl& {
        for (auto& msg : messages) {
            if (msg.name == name) return msg;
        }
        throw std::logic_error("fixture message missing: " + name);
    };

    switch (rule) {
        case 1:  // crosscut implied, structure says use
            for (auto& r : m.relationships) {
                if (r.kind == RelationshipKind::Crosscut) {
                    r.kind = RelationshipKind::Use;
                    r.stereotypes = {"use"};
                }
            }
            break;
        case 2: {  // around advice return type contradicts the advised operation
            find_elem("TraceAspect")
                .advices.push_back(
                    AdviceDecl{AdviceKind::Around, "wrapBalance", "Account.getBalance",
                               "string"});
            break;
        }
        case 3:  // lifeline classifier without class/aspect
            for (auto& l : m.interactions[0].lifelines) {
                if (l.id == "c") l.classifier = "Ghost";
            }
            break;
        case 4:  // weaving with no crosscut relationship at all
            m.relationships.erase(
                std::remove_if(m.relationships.begin(), m.relationships.end(),
                               [](const Relationship& r) {
                                   return r.kind == RelationshipKind::Crosscut;
                               }),
                m.relationships.end());
            // the aspect still participates in the structure via a dependency
            m.relationships.push_back(
                rel(RelationshipKind::Dependency, "TraceAspect", "Customer"));
            break;
        case 5:  // message without name
            message_named("notify").name = "";
            break;
        case 6:  // message without method
            message_named("getBalance").name = "getBalanceX";
            message_named("getBalanceX").return_type = "";
            break;
        case 7:  // message with wrong return type
            message_named("getBalance").return_type = "string";
            break;
        case 8:  // message in the wrong direction
            message_named("getBalance").name = "notify";
            message_named("notify").return_type = "void";
            break;
        case 9:  // class without meaning
            m.elements.push_back(classifier(ElementKind::Class, "Orphan"));
            break;
        case 10:  // instance of abstract class
            find_elem("Account").is_abstract = true;
            break;
        default: throw std::logic_error("rule out of range");
    }
    return normalize(m);
}

}  // namespace dmc::testing
