#include "dmc/consistency.hpp"

#include <algorithm>
#include <set>

namespace dmc {

namespace {

std::string render_set(const std::vector<std::string>& v) {
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",";
        out += v[i];
    }
    out += "}";
    return out;
}

Inconsistency finding(InconsistencyCategory cat, std::vector<std::string> locations,
                      std::string detail,
                      FindingSeverity severity = FindingSeverity::Error) {
    return Inconsistency{cat, std::move(locations), std::move(detail), severity};
}

const OperationDecl* find_operation(const Element& e, const std::string& name) {
    for (const auto& o : e.operations) {
        if (o.name == name) return &o;
    }
    return nullptr;
}

bool has_advice_named(const Element& e, const std::string& name) {
    for (const auto& a : e.advices) {
        if (a.name == name) return true;
    }
    return false;
}

bool has_relationship(const Model& m, RelationshipKind kind, const std::string& source,
                      const std::string& target) {
    for (const auto& r : m.relationships) {
        if (r.kind == kind && r.source == source && r.target == target) return true;
    }
    return false;
}

// Pointcuts follow the "Classifier.operation" convention; classifier names
// may themselves contain dots (union copies), so split at the last one.
bool parse_pointcut(const std::string& pointcut, std::string& classifier, std::string& op) {
    const auto pos = pointcut.rfind('.');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= pointcut.size()) return false;
    classifier = pointcut.substr(0, pos);
    op = pointcut.substr(pos + 1);
    return true;
}

}  // namespace

std::string to_string(InconsistencyCategory c) {
    switch (c) {
        case InconsistencyCategory::NFCon: return "NFCon";
        case InconsistencyCategory::NCCon: return "NCCon";
        case InconsistencyCategory::NDRCon: return "NDRCon";
        case InconsistencyCategory::NASCon: return "NASCon";
        case InconsistencyCategory::NUMECon: return "NUMECon";
        case InconsistencyCategory::NBFCon: return "NBFCon";
        case InconsistencyCategory::MV1: return "MV1";
        case InconsistencyCategory::MV2: return "MV2";
        case InconsistencyCategory::MV3: return "MV3";
        case InconsistencyCategory::MV4: return "MV4";
        case InconsistencyCategory::MV5: return "MV5";
        case InconsistencyCategory::MV6: return "MV6";
        case InconsistencyCategory::MV7: return "MV7";
        case InconsistencyCategory::MV8: return "MV8";
        case InconsistencyCategory::MV9: return "MV9";
        case InconsistencyCategory::MV10: return "MV10";
    }
    return "NCCon";
}

bool is_multiview(InconsistencyCategory c) {
    switch (c) {
        case InconsistencyCategory::MV1:
        case InconsistencyCategory::MV2:
        case InconsistencyCategory::MV3:
        case InconsistencyCategory::MV4:
        case InconsistencyCategory::MV5:
        case InconsistencyCategory::MV6:
        case InconsistencyCategory::MV7:
        case InconsistencyCategory::MV8:
        case InconsistencyCategory::MV9:
        case InconsistencyCategory::MV10: return true;
        default: return false;
    }
}

std::vector<Inconsistency> check_wellformed(const Model& m_in) {
    const Model m = normalize(m_in);
    std::vector<Inconsistency> out;

    auto dangling = [&m, &out](const std::string& ref, const std::string& where,
                               const std::string& what) {
        if (!resolve(m, ref)) {
            out.push_back(finding(InconsistencyCategory::NDRCon, {where},
                                  what + " references nonexistent element \"" + ref + "\""));
        }
    };

    for (const auto& e : m.elements) {
        const std::string qn = qualified_name(m, e);
        std::set<std::string> attr_names;
        for (const auto& a : e.attributes) {
            if (!attr_names.insert(a.name).second) {
                out.push_back(finding(InconsistencyCategory::NASCon, {qn},
                                      "duplicate attribute name \"" + a.name + "\""));
            }
        }
        if (e.kind == ElementKind::Interface) {
            std::set<std::string> sigs;
            for (const auto& o : e.operations) {
                if (!sigs.insert(o.signature()).second) {
                    out.push_back(finding(InconsistencyCategory::NASCon, {qn},
                                          "duplicate operation signature \"" + o.signature() +
                                              "\""));
                }
            }
        }
        for (const auto& p : e.provides) dangling(p, qn, "provides entry");
        for (const auto& q : e.requires_ifaces) dangling(q, qn, "requires entry");
    }

    for (const auto& r : m.relationships) {
        const std::string where = m.name + "::" + to_string(r.kind) + ":" + r.source + "->" +
                                  r.target;
        dangling(r.source, where, "relationship source");
        dangling(r.target, where, "relationship target");
        if (r.kind == RelationshipKind::Inheritance) {
            const Element* child = resolve(m, r.source);
            const Element* parent = resolve(m, r.target);
            if (child && parent && child->kind == ElementKind::Class &&
                parent->kind == ElementKind::Class && child->is_abstract &&
                !parent->is_abstract) {
                out.push_back(finding(
                    InconsistencyCategory::NASCon,
                    {qualified_name(m, *child), qualified_name(m, *parent)},
                    "abstract class \"" + child->name + "\" has concrete superclass \"" +
                        parent->name + "\""));
            }
        }
    }

    for (const auto& i : m.interactions) {
        for (const auto& l : i.lifelines) {
            dangling(l.classifier, m.name + "::" + i.name + "::" + l.id, "lifeline classifier");
        }
    }
    return out;
}

std::vector<Inconsistency> check_against_intended(const Model& composed_in,
                                                  const Model& intended_in,
                                                  const MatchPolicy& policy) {
    const Model composed = normalize(composed_in);
    const Model intended = normalize(intended_in);
    std::vector<Inconsistency> out;

    const CorrespondenceMap corr = match_models(composed, intended, policy);
    const auto emap = corr.element_map();
    std::set<std::string> paired_left, paired_right;
    for (const auto& [l, r] : corr.element_pairs) {
        paired_left.insert(l);
        paired_right.insert(r);
    }

    // Interfaces whose operations constitute promised functionality: anything
    // listed in a provides set or targeted by a realization.
    std::set<std::string> provided;
    for (const auto& e : intended.elements) {
        for (const auto& p : e.provides) provided.insert(p);
    }
    for (const auto& r : intended.relationships) {
        if (r.kind == RelationshipKind::Realization) provided.insert(r.target);
    }

    // Surplus composed elements.
    for (const auto& e : composed.elements) {
        if (!paired_left.count(e.name)) {
            out.push_back(finding(InconsistencyCategory::NUMECon, {qualified_name(composed, e)},
                                  "element has no intended correspondent"));
        }
    }

    // Paired elements: property deviations, member deviations, member gaps.
    for (const auto& [lname, rname] : corr.element_pairs) {
        const Element* ce = resolve(composed, lname);
        const Element* ie = resolve(intended, rname);
        if (!ce || !ie) continue;
        const std::string cq = qualified_name(composed, *ce);
        const std::string iq = qualified_name(intended, *ie);
        const bool iface_provided =
            ie->kind == ElementKind::Interface && provided.count(ie->name) > 0;

        if (ce->is_abstract != ie->is_abstract) {
            out.push_back(finding(InconsistencyCategory::NCCon, {cq},
                                  "isAbstract is " + std::string(ce->is_abstract ? "true" : "false") +
                                      ", intended " +
                                      std::string(ie->is_abstract ? "true" : "false")));
        }
        if (ce->stereotypes != ie->stereotypes) {
            out.push_back(finding(InconsistencyCategory::NCCon, {cq},
                                  "stereotypes " + render_set(ce->stereotypes) + ", intended " +
                                      render_set(ie->stereotypes)));
        }
        if (ce->provides != ie->provides) {
            out.push_back(finding(InconsistencyCategory::NCCon, {cq},
                                  "provides " + render_set(ce->provides) + ", intended " +
                                      render_set(ie->provides)));
        }
        if (ce->requires_ifaces != ie->requires_ifaces) {
            out.push_back(finding(InconsistencyCategory::NCCon, {cq},
                                  "requires " + render_set(ce->requires_ifaces) + ", intended " +
                                      render_set(ie->requires_ifaces)));
        }

        const MemberMatch mm = match_members(*ce, *ie, policy);
        for (const auto& [li, ri] : mm.attributes) {
            const AttributeDecl& la = ce->attributes[li];
            const AttributeDecl& ra = ie->attributes[ri];
            if (la.type_name != ra.type_name) {
                out.push_back(finding(InconsistencyCategory::NCCon, {cq + "::" + la.name},
                                      "attribute type " + la.type_name + ", intended " +
                                          ra.type_name));
            }
            if (la.visibility != ra.visibility) {
                out.push_back(finding(InconsistencyCategory::NCCon, {cq + "::" + la.name},
                                      "attribute visibility " + to_string(la.visibility) +
                                          ", intended " + to_string(ra.visibility)));
            }
        }
        for (std::size_t li : mm.left_only_attributes) {
            out.push_back(finding(InconsistencyCategory::NUMECon,
                                  {cq + "::" + ce->attributes[li].name},
                                  "attribute has no intended correspondent"));
        }
        for (std::size_t ri : mm.right_only_attributes) {
            out.push_back(finding(InconsistencyCategory::NCCon,
                                  {iq + "::" + ie->attributes[ri].name},
                                  "intended attribute missing from composed model"));
        }

        for (const auto& [li, ri] : mm.operations) {
            const OperationDecl& lo = ce->operations[li];
            const OperationDecl& ro = ie->operations[ri];
            if (lo.return_type != ro.return_type || lo.params != ro.params) {
                out.push_back(finding(InconsistencyCategory::NBFCon,
                                      {cq + "::" + lo.signature()},
                                      "operation is " + lo.signature() + ":" + lo.return_type +
                                          ", intended " + ro.signature() + ":" +
                                          ro.return_type));
            }
            if (lo.visibility != ro.visibility) {
                out.push_back(finding(InconsistencyCategory::NCCon, {cq + "::" + lo.signature()},
                                      "operation visibility " + to_string(lo.visibility) +
                                          ", intended " + to_string(ro.visibility)));
            }
        }
        for (std::size_t li : mm.left_only_operations) {
            out.push_back(finding(InconsistencyCategory::NUMECon,
                                  {cq + "::" + ce->operations[li].signature()},
                                  "operation has no intended correspondent"));
        }
        for (std::size_t ri : mm.right_only_operations) {
            const OperationDecl& ro = ie->operations[ri];
            if (iface_provided) {
                out.push_back(finding(InconsistencyCategory::NFCon, {iq + "::" + ro.signature()},
                                      "intended operation missing from provided interface"));
            } else {
                out.push_back(finding(InconsistencyCategory::NCCon, {iq + "::" + ro.signature()},
                                      "intended operation missing from composed model"));
            }
        }

        for (const auto& [li, ri] : mm.advices) {
            const AdviceDecl& la = ce->advices[li];
            const AdviceDecl& ra = ie->advices[ri];
            if (la.pointcut != ra.pointcut) {
                out.push_back(finding(InconsistencyCategory::NCCon, {cq + "::" + la.name},
                                      "advice pointcut \"" + la.pointcut + "\", intended \"" +
                                          ra.pointcut + "\""));
            }
            if (la.return_type != ra.return_type) {
                out.push_back(finding(InconsistencyCategory::NCCon, {cq + "::" + la.name},
                                      "advice returnType " + la.return_type + ", intended " +
                                          ra.return_type));
            }
        }
        for (std::size_t li : mm.left_only_advices) {
            out.push_back(finding(InconsistencyCategory::NUMECon,
                                  {cq + "::" + ce->advices[li].name},
                                  "advice has no intended correspondent"));
        }
        for (std::size_t ri : mm.right_only_advices) {
            out.push_back(finding(InconsistencyCategory::NCCon,
                                  {iq + "::" + ie->advices[ri].name},
                                  "intended advice missing from composed model"));
        }
    }

    // Missing intended elements.
    for (const auto& e : intended.elements) {
        if (paired_right.count(e.name)) continue;
        const std::string iq = qualified_name(intended, e);
        const bool iface_provided =
            e.kind == ElementKind::Interface && provided.count(e.name) > 0;
        if (iface_provided && !e.operations.empty()) {
            for (const auto& o : e.operations) {
                out.push_back(finding(InconsistencyCategory::NFCon, {iq + "::" + o.signature()},
                                      "intended operation missing: provided interface \"" +
                                          e.name + "\" absent from composed model"));
            }
        } else {
            out.push_back(finding(InconsistencyCategory::NCCon, {iq},
                                  "intended element missing from composed model"));
        }
    }

    // Relationships.
    const RelationshipMatch rm = match_relationships(composed, intended, emap, policy);
    for (const auto& [i, j] : rm.pairs) {
        const Relationship& cr = composed.relationships[i];
        const Relationship& ir = intended.relationships[j];
        if (cr.stereotypes != ir.stereotypes) {
            out.push_back(finding(InconsistencyCategory::NCCon,
                                  {relationship_key(composed, cr, 0)},
                                  "relationship stereotypes " + render_set(cr.stereotypes) +
                                      ", intended " + render_set(ir.stereotypes)));
        }
    }
    for (std::size_t i : rm.left_only) {
        out.push_back(finding(InconsistencyCategory::NUMECon,
                              {relationship_key(composed, composed.relationships[i], 0)},
                              "relationship has no intended correspondent"));
    }
    for (std::size_t j : rm.right_only) {
        out.push_back(finding(InconsistencyCategory::NCCon,
                              {relationship_key(intended, intended.relationships[j], 0)},
                              "intended relationship missing from composed model"));
    }
    return out;
}

std::vector<Inconsistency> check_multiview(const Model& m_in) {
    const Model m = normalize(m_in);
    std::vector<Inconsistency> out;
    if (m.interactions.empty()) return out;

    // MV9: classifiers with no declared content and no incident relationship.
    for (const auto& e : m.elements) {
        const bool has_content = !e.attributes.empty() || !e.operations.empty() ||
                                 !e.advices.empty() || !e.provides.empty() ||
                                 !e.requires_ifaces.empty();
        bool incident = false;
        for (const auto& r : m.relationships) {
            if (r.source == e.name || r.target == e.name) {
                incident = true;
                break;
            }
        }
        if (!has_content && !incident) {
            out.push_back(finding(InconsistencyCategory::MV9, {qualified_name(m, e)},
                                  "classifier has no features and no relationships",
                                  FindingSeverity::Warning));
        }
    }

    // MV2: around advice vs advised operation return type.
    for (const auto& e : m.elements) {
        for (const auto& a : e.advices) {
            if (a.kind != AdviceKind::Around) continue;
            std::string cls, op;
            if (!parse_pointcut(a.pointcut, cls, op)) continue;
            const Element* target = resolve(m, cls);
            if (!target) continue;
            const OperationDecl* advised = find_operation(*target, op);
            if (!advised) continue;
            if (a.return_type != advised->return_type) {
                out.push_back(finding(InconsistencyCategory::MV2,
                                      {qualified_name(m, e) + "::" + a.name,
                                       qualified_name(m, *target) + "::" + advised->signature()},
                                      "around advice returns " + a.return_type +
                                          " but advised operation returns " +
                                          advised->return_type));
            }
        }
    }

    for (const auto& ia : m.interactions) {
        std::map<std::string, const Lifeline*> by_id;
        for (const auto& l : ia.lifelines) by_id.emplace(l.id, &l);

        for (const auto& l : ia.lifelines) {
            const std::string where = m.name + "::" + ia.name + "::" + l.id;
            const Element* cls = resolve(m, l.classifier);
            if (!cls) {
                out.push_back(finding(InconsistencyCategory::MV3, {where},
                                      "lifeline classifier \"" + l.classifier +
                                          "\" has no class or aspect"));
            } else if (cls->is_abstract) {
                out.push_back(finding(InconsistencyCategory::MV10,
                                      {where, qualified_name(m, *cls)},
                                      "abstract classifier \"" + cls->name +
                                          "\" used as an object"));
            }
        }

        for (std::size_t mi = 0; mi < ia.messages.size(); ++mi) {
            const MessageDecl& msg = ia.messages[mi];
            const std::string where =
                m.name + "::" + ia.name + "::message#" + std::to_string(mi);
            if (msg.name.empty()) {
                out.push_back(
                    finding(InconsistencyCategory::MV5, {where}, "message has no name"));
                continue;
            }
            auto fit = by_id.find(msg.from);
            auto tit = by_id.find(msg.to);
            if (fit == by_id.end() || tit == by_id.end()) continue;
            const Element* sender = resolve(m, fit->second->classifier);
            const Element* receiver = resolve(m, tit->second->classifier);

            if (sender && sender->kind == ElementKind::Aspect &&
                has_advice_named(*sender, msg.name)) {
                // Advice weaving: the structural view must carry a crosscut.
                if (!receiver) continue;  // MV3 reported on the lifeline
                if (!has_relationship(m, RelationshipKind::Crosscut, sender->name,
                                      receiver->name)) {
                    if (has_relationship(m, RelationshipKind::Use, sender->name,
                                         receiver->name)) {
                        out.push_back(finding(
                            InconsistencyCategory::MV1,
                            {where, qualified_name(m, *sender), qualified_name(m, *receiver)},
                            "advice \"" + msg.name + "\" implies <<crosscut>> but structure has "
                            "<<use>> between \"" + sender->name + "\" and \"" + receiver->name +
                                "\""));
                    } else {
                        out.push_back(finding(
                            InconsistencyCategory::MV4,
                            {where, qualified_name(m, *sender), qualified_name(m, *receiver)},
                            "aspect \"" + sender->name + "\" weaves into \"" + receiver->name +
                                "\" with no crosscut relationship in the structure"));
                    }
                }
                continue;
            }

            if (!receiver) continue;  // MV3 reported on the lifeline
            const OperationDecl* op = find_operation(*receiver, msg.name);
            if (op) {
                if (sender && sender->kind == ElementKind::Aspect &&
                    !has_relationship(m, RelationshipKind::Use, sender->name, receiver->name) &&
                    has_relationship(m, RelationshipKind::Crosscut, sender->name,
                                     receiver->name)) {
                    out.push_back(finding(
                        InconsistencyCategory::MV1,
                        {where, qualified_name(m, *sender), qualified_name(m, *receiver)},
                        "call \"" + msg.name + "\" implies <<use>> but structure has "
                        "<<crosscut>> between \"" + sender->name + "\" and \"" + receiver->name +
                            "\""));
                }
                if (!msg.return_type.empty() && msg.return_type != op->return_type) {
                    out.push_back(finding(
                        InconsistencyCategory::MV7,
                        {where, qualified_name(m, *receiver) + "::" + op->signature()},
                        "message returns " + msg.return_type + " but operation returns " +
                            op->return_type));
                }
            } else if (sender && find_operation(*sender, msg.name)) {
                out.push_back(finding(
                    InconsistencyCategory::MV8,
                    {where, qualified_name(m, *sender), qualified_name(m, *receiver)},
                    "operation \"" + msg.name + "\" belongs to the sender \"" + sender->name +
                        "\", not the receiver \"" + receiver->name + "\""));
            } else {
                out.push_back(finding(InconsistencyCategory::MV6,
                                      {where, qualified_name(m, *receiver)},
                                      "message \"" + msg.name +
                                          "\" corresponds to no operation of \"" +
                                          receiver->name + "\""));
            }
        }
    }
    return out;
}

double inconsistency_rate(const std::vector<Inconsistency>& findings, const Model& m) {
    const Census census = element_census(m);
    if (census.total == 0) return 0.0;
    return static_cast<double>(findings.size()) / static_cast<double>(census.total);
}

InconsistencyReport make_report(std::vector<Inconsistency> findings, const Model& m) {
    InconsistencyReport report;
    report.rate = inconsistency_rate(findings, m);
    report.findings = std::move(findings);
    for (const auto& f : report.findings) ++report.counts_by_category[f.category];
    return report;
}

}  // namespace dmc
