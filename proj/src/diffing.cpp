#include "dmc/diffing.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dmc {

namespace {

std::string render_bool(bool b) { return b ? "true" : "false"; }

std::string render_set(const std::vector<std::string>& v) {
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",";
        out += v[i];
    }
    out += "}";
    return out;
}

std::string render_params(const std::vector<Param>& params) {
    std::string out = "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i > 0) out += ", ";
        out += params[i].name + ":" + params[i].type_name;
    }
    out += ")";
    return out;
}

std::string advice_key(const AdviceDecl& a) { return to_string(a.kind) + ":" + a.name; }

std::string rel_path(const Relationship& r) {
    return "relationship " + to_string(r.kind) + ":" + r.source + "->" + r.target;
}

EditOp member_modify(const std::string& owner, const std::string& target,
                     const std::string& property, std::string old_value,
                     std::string new_value) {
    EditOp op;
    op.action = EditAction::Modify;
    op.owner = owner;
    op.target = target;
    op.path = "element " + owner + "::" + target;
    op.property = property;
    op.old_value = std::move(old_value);
    op.new_value = std::move(new_value);
    return op;
}

void diff_element_pair(const Element& from, const Element& to, const MatchPolicy& policy,
                       std::vector<EditOp>& ops) {
    const std::string owner = from.name;
    auto elem_modify = [&](const std::string& property, std::string old_value,
                           std::string new_value) {
        EditOp op;
        op.action = EditAction::Modify;
        op.owner = owner;
        op.path = "element " + owner;
        op.property = property;
        op.old_value = std::move(old_value);
        op.new_value = std::move(new_value);
        return op;
    };

    if (from.is_abstract != to.is_abstract) {
        ops.push_back(elem_modify("isAbstract", render_bool(from.is_abstract),
                                  render_bool(to.is_abstract)));
        ops.back().new_value = render_bool(to.is_abstract);
    }
    if (from.stereotypes != to.stereotypes) {
        EditOp op = elem_modify("stereotypes", render_set(from.stereotypes),
                                render_set(to.stereotypes));
        op.set_value = to.stereotypes;
        ops.push_back(std::move(op));
    }
    if (from.provides != to.provides) {
        EditOp op = elem_modify("provides", render_set(from.provides), render_set(to.provides));
        op.set_value = to.provides;
        ops.push_back(std::move(op));
    }
    if (from.requires_ifaces != to.requires_ifaces) {
        EditOp op = elem_modify("requires", render_set(from.requires_ifaces),
                                render_set(to.requires_ifaces));
        op.set_value = to.requires_ifaces;
        ops.push_back(std::move(op));
    }

    const MemberMatch mm = match_members(from, to, policy);

    for (std::size_t li : mm.left_only_attributes) {
        EditOp op;
        op.action = EditAction::Remove;
        op.owner = owner;
        op.target = from.attributes[li].name;
        op.path = "element " + owner + "::" + op.target;
        op.attribute = from.attributes[li];
        ops.push_back(std::move(op));
    }
    for (const auto& [li, ri] : mm.attributes) {
        const AttributeDecl& fa = from.attributes[li];
        const AttributeDecl& ta = to.attributes[ri];
        if (fa.type_name != ta.type_name) {
            ops.push_back(member_modify(owner, fa.name, "type", fa.type_name, ta.type_name));
        }
        if (fa.visibility != ta.visibility) {
            ops.push_back(member_modify(owner, fa.name, "visibility", to_string(fa.visibility),
                                        to_string(ta.visibility)));
        }
    }
    for (std::size_t ri : mm.right_only_attributes) {
        EditOp op;
        op.action = EditAction::Create;
        op.owner = owner;
        op.target = to.attributes[ri].name;
        op.path = "element " + owner + "::" + op.target;
        op.attribute = to.attributes[ri];
        ops.push_back(std::move(op));
    }

    for (std::size_t li : mm.left_only_operations) {
        EditOp op;
        op.action = EditAction::Remove;
        op.owner = owner;
        op.target = from.operations[li].signature();
        op.path = "element " + owner + "::" + op.target;
        op.operation = from.operations[li];
        ops.push_back(std::move(op));
    }
    for (const auto& [li, ri] : mm.operations) {
        const OperationDecl& fo = from.operations[li];
        const OperationDecl& to_op = to.operations[ri];
        const std::string key = fo.signature();
        if (fo.return_type != to_op.return_type) {
            ops.push_back(
                member_modify(owner, key, "returnType", fo.return_type, to_op.return_type));
        }
        if (fo.visibility != to_op.visibility) {
            ops.push_back(member_modify(owner, key, "visibility", to_string(fo.visibility),
                                        to_string(to_op.visibility)));
        }
        // params last: the signature locator of this operation changes here
        if (fo.params != to_op.params) {
            EditOp op = member_modify(owner, key, "params", render_params(fo.params),
                                      render_params(to_op.params));
            op.params_value = to_op.params;
            ops.push_back(std::move(op));
        }
    }
    for (std::size_t ri : mm.right_only_operations) {
        EditOp op;
        op.action = EditAction::Create;
        op.owner = owner;
        op.target = to.operations[ri].signature();
        op.path = "element " + owner + "::" + op.target;
        op.operation = to.operations[ri];
        ops.push_back(std::move(op));
    }

    for (std::size_t li : mm.left_only_advices) {
        EditOp op;
        op.action = EditAction::Remove;
        op.owner = owner;
        op.target = advice_key(from.advices[li]);
        op.path = "element " + owner + "::" + op.target;
        op.advice = from.advices[li];
        ops.push_back(std::move(op));
    }
    for (const auto& [li, ri] : mm.advices) {
        const AdviceDecl& fa = from.advices[li];
        const AdviceDecl& ta = to.advices[ri];
        const std::string key = advice_key(fa);
        if (fa.pointcut != ta.pointcut) {
            ops.push_back(member_modify(owner, key, "pointcut", fa.pointcut, ta.pointcut));
        }
        if (fa.return_type != ta.return_type) {
            ops.push_back(
                member_modify(owner, key, "returnType", fa.return_type, ta.return_type));
        }
    }
    for (std::size_t ri : mm.right_only_advices) {
        EditOp op;
        op.action = EditAction::Create;
        op.owner = owner;
        op.target = advice_key(to.advices[ri]);
        op.path = "element " + owner + "::" + op.target;
        op.advice = to.advices[ri];
        ops.push_back(std::move(op));
    }
}

}  // namespace

std::string to_string(EditAction a) {
    switch (a) {
        case EditAction::Create: return "create";
        case EditAction::Remove: return "remove";
        case EditAction::Modify: return "modify";
    }
    return "modify";
}

EditScript diff_models(const Model& from_in, const Model& to_in, const MatchPolicy& policy) {
    const Model from = normalize(from_in);
    const Model to = normalize(to_in);
    EditScript script;
    auto& ops = script.ops;

    if (from.name != to.name) {
        EditOp op;
        op.action = EditAction::Modify;
        op.path = "model";
        op.property = "model.name";
        op.old_value = from.name;
        op.new_value = to.name;
        ops.push_back(std::move(op));
    }
    if (from.kind != to.kind) {
        EditOp op;
        op.action = EditAction::Modify;
        op.path = "model";
        op.property = "model.kind";
        op.old_value = to_string(from.kind);
        op.new_value = to_string(to.kind);
        ops.push_back(std::move(op));
    }

    const CorrespondenceMap corr = match_models(from, to, policy);
    std::set<std::string> paired_left, paired_right;
    for (const auto& [l, r] : corr.element_pairs) {
        paired_left.insert(l);
        paired_right.insert(r);
    }

    for (const auto& [lname, rname] : corr.element_pairs) {
        const Element* fe = resolve(from, lname);
        const Element* te = resolve(to, rname);
        if (fe && te) diff_element_pair(*fe, *te, policy, ops);
    }
    for (const auto& e : from.elements) {
        if (paired_left.count(e.name)) continue;
        EditOp op;
        op.action = EditAction::Remove;
        op.path = "element " + e.name;
        op.element = e;
        ops.push_back(std::move(op));
    }
    for (const auto& e : to.elements) {
        if (paired_right.count(e.name)) continue;
        EditOp op;
        op.action = EditAction::Create;
        op.path = "element " + e.name;
        op.element = e;
        ops.push_back(std::move(op));
    }

    const RelationshipMatch rm = match_relationships(from, to, corr.element_map(), policy);
    for (std::size_t i : rm.left_only) {
        EditOp op;
        op.action = EditAction::Remove;
        op.path = rel_path(from.relationships[i]);
        op.relationship = from.relationships[i];
        ops.push_back(std::move(op));
    }
    for (const auto& [i, j] : rm.pairs) {
        const Relationship& fr = from.relationships[i];
        const Relationship& tr = to.relationships[j];
        if (fr.stereotypes != tr.stereotypes) {
            EditOp op;
            op.action = EditAction::Modify;
            op.path = rel_path(fr);
            op.property = "stereotypes";
            op.old_value = render_set(fr.stereotypes);
            op.new_value = render_set(tr.stereotypes);
            op.relationship = fr;  // locator: the pre-edit state
            op.set_value = tr.stereotypes;
            ops.push_back(std::move(op));
        }
    }
    for (std::size_t j : rm.right_only) {
        EditOp op;
        op.action = EditAction::Create;
        op.path = rel_path(to.relationships[j]);
        op.relationship = to.relationships[j];
        ops.push_back(std::move(op));
    }

    std::map<std::string, const Interaction*> from_ia, to_ia;
    for (const auto& i : from.interactions) from_ia.emplace(i.name, &i);
    for (const auto& i : to.interactions) to_ia.emplace(i.name, &i);
    for (const auto& [name, fi] : from_ia) {
        if (!to_ia.count(name)) {
            EditOp op;
            op.action = EditAction::Remove;
            op.path = "interaction " + name;
            op.interaction = *fi;
            ops.push_back(std::move(op));
        }
    }
    for (const auto& [name, fi] : from_ia) {
        auto it = to_ia.find(name);
        if (it == to_ia.end() || *fi == *it->second) continue;
        EditOp op;
        op.action = EditAction::Modify;
        op.path = "interaction " + name;
        op.property = "content";
        op.old_value = std::to_string(fi->messages.size()) + " message(s)";
        op.new_value = std::to_string(it->second->messages.size()) + " message(s)";
        op.interaction = *it->second;  // replacement payload
        ops.push_back(std::move(op));
    }
    for (const auto& [name, ti] : to_ia) {
        if (!from_ia.count(name)) {
            EditOp op;
            op.action = EditAction::Create;
            op.path = "interaction " + name;
            op.interaction = *ti;
            ops.push_back(std::move(op));
        }
    }

    script.tally = classify_changes(script);
    return script;
}

namespace {

Element* find_element(Model& m, const std::string& name) {
    for (auto& e : m.elements) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

AttributeDecl* find_attribute(Element& e, const std::string& name) {
    for (auto& a : e.attributes) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

OperationDecl* find_operation_by_signature(Element& e, const std::string& sig) {
    for (auto& o : e.operations) {
        if (o.signature() == sig) return &o;
    }
    return nullptr;
}

AdviceDecl* find_advice_by_key(Element& e, const std::string& key) {
    for (auto& a : e.advices) {
        if (advice_key(a) == key) return &a;
    }
    return nullptr;
}

Element& owner_or_throw(Model& m, const EditOp& op) {
    Element* e = find_element(m, op.owner);
    if (!e) throw ApplyError("unresolvable path: no element \"" + op.owner + "\"");
    return *e;
}

void apply_member_op(Model& m, const EditOp& op) {
    Element& e = owner_or_throw(m, op);
    if (op.attribute) {
        if (op.action == EditAction::Create) {
            if (find_attribute(e, op.attribute->name)) {
                throw ApplyError("duplicate creation: attribute \"" + op.attribute->name +
                                 "\" in \"" + e.name + "\"");
            }
            e.attributes.push_back(*op.attribute);
        } else {
            auto it = std::find(e.attributes.begin(), e.attributes.end(), *op.attribute);
            if (it == e.attributes.end()) {
                throw ApplyError("unresolvable path: attribute \"" + op.attribute->name +
                                 "\" in \"" + e.name + "\"");
            }
            e.attributes.erase(it);
        }
        return;
    }
    if (op.operation) {
        if (op.action == EditAction::Create) {
            if (find_operation_by_signature(e, op.operation->signature())) {
                throw ApplyError("duplicate creation: operation \"" +
                                 op.operation->signature() + "\" in \"" + e.name + "\"");
            }
            e.operations.push_back(*op.operation);
        } else {
            auto it = std::find(e.operations.begin(), e.operations.end(), *op.operation);
            if (it == e.operations.end()) {
                throw ApplyError("unresolvable path: operation \"" +
                                 op.operation->signature() + "\" in \"" + e.name + "\"");
            }
            e.operations.erase(it);
        }
        return;
    }
    if (op.advice) {
        if (op.action == EditAction::Create) {
            if (find_advice_by_key(e, advice_key(*op.advice))) {
                throw ApplyError("duplicate creation: advice \"" + advice_key(*op.advice) +
                                 "\" in \"" + e.name + "\"");
            }
            e.advices.push_back(*op.advice);
        } else {
            auto it = std::find(e.advices.begin(), e.advices.end(), *op.advice);
            if (it == e.advices.end()) {
                throw ApplyError("unresolvable path: advice \"" + advice_key(*op.advice) +
                                 "\" in \"" + e.name + "\"");
            }
            e.advices.erase(it);
        }
        return;
    }
    throw ApplyError("malformed member op at \"" + op.path + "\"");
}

Visibility parse_visibility_or_throw(const std::string& s) {
    auto v = visibility_from_string(s);
    if (!v) throw ApplyError("bad visibility value \"" + s + "\"");
    return *v;
}

void apply_modify(Model& m, const EditOp& op) {
    if (op.property == "model.name") {
        m.name = op.new_value;
        return;
    }
    if (op.property == "model.kind") {
        auto k = model_kind_from_string(op.new_value);
        if (!k) throw ApplyError("bad model kind \"" + op.new_value + "\"");
        m.kind = *k;
        return;
    }
    if (op.relationship) {
        for (auto& r : m.relationships) {
            if (r == *op.relationship) {
                if (!op.set_value) throw ApplyError("missing stereotypes payload: " + op.path);
                r.stereotypes = *op.set_value;
                return;
            }
        }
        throw ApplyError("unresolvable path: " + op.path);
    }
    if (op.interaction) {
        for (auto& i : m.interactions) {
            if (i.name == op.interaction->name) {
                i = *op.interaction;
                return;
            }
        }
        throw ApplyError("unresolvable path: " + op.path);
    }

    Element& e = owner_or_throw(m, op);
    if (op.target.empty()) {
        if (op.property == "isAbstract") {
            e.is_abstract = op.new_value == "true";
        } else if (op.property == "stereotypes") {
            if (!op.set_value) throw ApplyError("missing set payload: " + op.path);
            e.stereotypes = *op.set_value;
        } else if (op.property == "provides") {
            if (!op.set_value) throw ApplyError("missing set payload: " + op.path);
            e.provides = *op.set_value;
        } else if (op.property == "requires") {
            if (!op.set_value) throw ApplyError("missing set payload: " + op.path);
            e.requires_ifaces = *op.set_value;
        } else {
            throw ApplyError("unknown element property \"" + op.property + "\"");
        }
        return;
    }

    if (op.property == "type" || (op.property == "visibility" && find_attribute(e, op.target))) {
        AttributeDecl* a = find_attribute(e, op.target);
        if (!a) throw ApplyError("unresolvable path: " + op.path);
        if (op.property == "type") {
            a->type_name = op.new_value;
        } else {
            a->visibility = parse_visibility_or_throw(op.new_value);
        }
        return;
    }
    if (op.property == "pointcut" ||
        (op.property == "returnType" && find_advice_by_key(e, op.target))) {
        AdviceDecl* a = find_advice_by_key(e, op.target);
        if (!a) throw ApplyError("unresolvable path: " + op.path);
        if (op.property == "pointcut") {
            a->pointcut = op.new_value;
        } else {
            a->return_type = op.new_value;
        }
        return;
    }
    OperationDecl* o = find_operation_by_signature(e, op.target);
    if (!o) throw ApplyError("unresolvable path: " + op.path);
    if (op.property == "returnType") {
        o->return_type = op.new_value;
    } else if (op.property == "visibility") {
        o->visibility = parse_visibility_or_throw(op.new_value);
    } else if (op.property == "params") {
        if (!op.params_value) throw ApplyError("missing params payload: " + op.path);
        o->params = *op.params_value;
    } else {
        throw ApplyError("unknown operation property \"" + op.property + "\"");
    }
}

}  // namespace

Model apply_edits(const Model& m_in, const EditScript& script) {
    Model m = normalize(m_in);
    for (const auto& op : script.ops) {
        switch (op.action) {
            case EditAction::Modify: {
                if (!op.owner.empty() && (op.attribute || op.operation || op.advice)) {
                    throw ApplyError("malformed modify op at \"" + op.path + "\"");
                }
                apply_modify(m, op);
                break;
            }
            case EditAction::Create: {
                if (op.element) {
                    if (find_element(m, op.element->name)) {
                        throw ApplyError("duplicate creation: element \"" + op.element->name +
                                         "\"");
                    }
                    m.elements.push_back(*op.element);
                } else if (op.relationship) {
                    m.relationships.push_back(*op.relationship);
                } else if (op.interaction) {
                    for (const auto& i : m.interactions) {
                        if (i.name == op.interaction->name) {
                            throw ApplyError("duplicate creation: interaction \"" + i.name +
                                             "\"");
                        }
                    }
                    m.interactions.push_back(*op.interaction);
                } else {
                    apply_member_op(m, op);
                }
                break;
            }
            case EditAction::Remove: {
                if (op.element) {
                    auto it = std::find_if(m.elements.begin(), m.elements.end(),
                                           [&](const Element& e) {
                                               return e.name == op.element->name;
                                           });
                    if (it == m.elements.end()) {
                        throw ApplyError("unresolvable path: " + op.path);
                    }
                    m.elements.erase(it);
                } else if (op.relationship) {
                    auto it = std::find(m.relationships.begin(), m.relationships.end(),
                                        *op.relationship);
                    if (it == m.relationships.end()) {
                        throw ApplyError("unresolvable path: " + op.path);
                    }
                    m.relationships.erase(it);
                } else if (op.interaction) {
                    auto it = std::find_if(m.interactions.begin(), m.interactions.end(),
                                           [&](const Interaction& i) {
                                               return i.name == op.interaction->name;
                                           });
                    if (it == m.interactions.end()) {
                        throw ApplyError("unresolvable path: " + op.path);
                    }
                    m.interactions.erase(it);
                } else {
                    apply_member_op(m, op);
                }
                break;
            }
        }
    }
    return normalize(std::move(m));
}

ChangeTally classify_changes(const EditScript& script) {
    ChangeTally tally;
    const auto& ops = script.ops;

    auto member_names = [](const Element& e) {
        std::set<std::string> names;
        for (const auto& a : e.attributes) names.insert(a.name);
        for (const auto& o : e.operations) names.insert(o.name);
        for (const auto& a : e.advices) names.insert(a.name);
        return names;
    };

    std::set<std::size_t> grouped;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].action != EditAction::Remove || !ops[i].element) continue;
        const auto removed_names = member_names(*ops[i].element);
        if (removed_names.empty()) continue;
        std::vector<std::size_t> hosts;
        for (std::size_t j = 0; j < ops.size(); ++j) {
            if (ops[j].action != EditAction::Create || !ops[j].element || grouped.count(j)) {
                continue;
            }
            const auto created_names = member_names(*ops[j].element);
            const bool overlaps = std::any_of(removed_names.begin(), removed_names.end(),
                                              [&](const std::string& n) {
                                                  return created_names.count(n) > 0;
                                              });
            if (overlaps) hosts.push_back(j);
        }
        if (hosts.size() >= 2) {
            grouped.insert(i);
            grouped.insert(hosts.begin(), hosts.end());
            ++tally.derivations;
            tally.derivation_group_sizes.push_back(1 + hosts.size());
        }
    }

    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (grouped.count(i)) continue;
        switch (ops[i].action) {
            case EditAction::Create: ++tally.additions; break;
            case EditAction::Remove: ++tally.removals; break;
            case EditAction::Modify: ++tally.modifications; break;
        }
    }
    return tally;
}

std::int64_t resolution_effort(const Model& composed, const Model& intended,
                               const MatchPolicy& policy) {
    return static_cast<std::int64_t>(diff_models(composed, intended, policy).ops.size());
}

}  // namespace dmc
