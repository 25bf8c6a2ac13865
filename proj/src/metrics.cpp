#include "dmc/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace dmc {

namespace {

// Inheritance edges restricted to one classifier kind, child -> parents.
std::map<std::string, std::vector<std::string>> parent_graph(const Model& m, ElementKind kind) {
    std::map<std::string, std::vector<std::string>> parents;
    for (const auto& r : m.relationships) {
        if (r.kind != RelationshipKind::Inheritance) continue;
        const Element* child = resolve(m, r.source);
        const Element* parent = resolve(m, r.target);
        if (child && parent && child->kind == kind && parent->kind == kind) {
            parents[child->name].push_back(parent->name);
        }
    }
    return parents;
}

std::map<std::string, std::vector<std::string>> child_graph(const Model& m, ElementKind kind) {
    std::map<std::string, std::vector<std::string>> children;
    for (const auto& r : m.relationships) {
        if (r.kind != RelationshipKind::Inheritance) continue;
        const Element* child = resolve(m, r.source);
        const Element* parent = resolve(m, r.target);
        if (child && parent && child->kind == kind && parent->kind == kind) {
            children[parent->name].push_back(child->name);
        }
    }
    return children;
}

void collect_reachable(const std::map<std::string, std::vector<std::string>>& graph,
                       const std::string& start, std::set<std::string>& seen) {
    auto it = graph.find(start);
    if (it == graph.end()) return;
    for (const auto& next : it->second) {
        if (seen.insert(next).second) collect_reachable(graph, next, seen);
    }
}

// Depth as the longest path to a root; roots are 0. Cycles contribute no
// extra depth.
std::int64_t depth_of(const std::map<std::string, std::vector<std::string>>& parents,
                      const std::string& node, std::set<std::string>& on_path) {
    auto it = parents.find(node);
    if (it == parents.end() || it->second.empty()) return 0;
    if (!on_path.insert(node).second) return 0;
    std::int64_t best = 0;
    for (const auto& p : it->second) {
        best = std::max(best, 1 + depth_of(parents, p, on_path));
    }
    on_path.erase(node);
    return best;
}

const Element& resolve_kind(const Model& m, const std::string& qn, ElementKind kind,
                            const char* what) {
    const Element* e = resolve(m, qn);
    if (!e) throw std::invalid_argument(std::string("no such element: ") + qn);
    if (e->kind != kind) {
        throw std::invalid_argument("\"" + qn + "\" is not " + what);
    }
    return *e;
}

bool counts_for_dependency(RelationshipKind k) {
    return k == RelationshipKind::Dependency || k == RelationshipKind::Realization ||
           k == RelationshipKind::Association;
}

std::int64_t distinct_targets(const Model& m, const std::string& name, bool outgoing,
                              bool (*pred)(RelationshipKind)) {
    std::set<std::string> partners;
    for (const auto& r : m.relationships) {
        if (!pred(r.kind)) continue;
        if (outgoing && r.source == name) partners.insert(r.target);
        if (!outgoing && r.target == name) partners.insert(r.source);
    }
    return static_cast<std::int64_t>(partners.size());
}

std::int64_t times_used_as_attribute_type(const Model& m, const std::string& name,
                                          bool external_only) {
    std::int64_t count = 0;
    for (const auto& e : m.elements) {
        if (external_only && e.name == name) continue;
        for (const auto& a : e.attributes) {
            if (a.type_name == name) ++count;
        }
    }
    return count;
}

}  // namespace

double MetricRecord::at(const std::string& metric) const {
    for (const auto& [k, v] : values) {
        if (k == metric) return v;
    }
    throw std::invalid_argument("metric \"" + metric + "\" not computed for \"" + subject + "\"");
}

bool MetricRecord::has(const std::string& metric) const {
    for (const auto& [k, v] : values) {
        if (k == metric) return true;
    }
    return false;
}

MetricRecord class_metrics(const Model& m_in, const std::string& class_qn) {
    const Model m = normalize(m_in);
    const Element& c = resolve_kind(m, class_qn, ElementKind::Class, "a class");
    const auto parents = parent_graph(m, ElementKind::Class);
    const auto children = child_graph(m, ElementKind::Class);

    std::set<std::string> ancestors, descendants;
    collect_reachable(parents, c.name, ancestors);
    collect_reachable(children, c.name, descendants);

    std::int64_t if_impl = 0;
    for (const auto& r : m.relationships) {
        if (r.kind != RelationshipKind::Realization || r.source != c.name) continue;
        const Element* t = resolve(m, r.target);
        if (t && t->kind == ElementKind::Interface) ++if_impl;
    }

    std::int64_t noc = 0;
    if (auto it = children.find(c.name); it != children.end()) {
        noc = static_cast<std::int64_t>(
            std::set<std::string>(it->second.begin(), it->second.end()).size());
    }

    std::int64_t ops_inh = 0, attr_inh = 0;
    for (const auto& a : ancestors) {
        if (const Element* ae = resolve(m, a)) {
            ops_inh += static_cast<std::int64_t>(ae->operations.size());
            attr_inh += static_cast<std::int64_t>(ae->attributes.size());
        }
    }

    std::set<std::string> on_path;
    const std::int64_t dit = depth_of(parents, c.name, on_path);

    std::int64_t ica = 0;
    for (const auto& a : c.attributes) {
        const Element* t = resolve(m, a.type_name);
        if (t && t->name != c.name &&
            (t->kind == ElementKind::Class || t->kind == ElementKind::Interface)) {
            ++ica;
        }
    }

    MetricRecord rec;
    rec.subject = qualified_name(m, c);
    rec.values = {
        {"NAttr", static_cast<double>(c.attributes.size())},
        {"NOps", static_cast<double>(c.operations.size())},
        {"IFImpl", static_cast<double>(if_impl)},
        {"NOC", static_cast<double>(noc)},
        {"NDesc", static_cast<double>(descendants.size())},
        {"NAnc", static_cast<double>(ancestors.size())},
        {"DIT", static_cast<double>(dit)},
        {"OpsInh", static_cast<double>(ops_inh)},
        {"AttrInh", static_cast<double>(attr_inh)},
        {"DepOut", static_cast<double>(distinct_targets(m, c.name, true, counts_for_dependency))},
        {"DepIn", static_cast<double>(distinct_targets(m, c.name, false, counts_for_dependency))},
        {"ECAAttr", static_cast<double>(times_used_as_attribute_type(m, c.name, true))},
        {"ICAAttr", static_cast<double>(ica)},
    };
    return rec;
}

MetricRecord interface_metrics(const Model& m_in, const std::string& interface_qn) {
    const Model m = normalize(m_in);
    const Element& i = resolve_kind(m, interface_qn, ElementKind::Interface, "an interface");
    const auto parents = parent_graph(m, ElementKind::Interface);
    const auto children = child_graph(m, ElementKind::Interface);

    std::set<std::string> ancestors, descendants;
    collect_reachable(parents, i.name, ancestors);
    collect_reachable(children, i.name, descendants);

    std::set<std::string> assoc;
    for (const auto& r : m.relationships) {
        if (r.kind != RelationshipKind::Association) continue;
        if (r.source == i.name) assoc.insert(r.target);
        if (r.target == i.name) assoc.insert(r.source);
    }

    std::int64_t ecpar = 0;
    for (const auto& e : m.elements) {
        for (const auto& o : e.operations) {
            for (const auto& p : o.params) {
                if (p.type_name == i.name) ++ecpar;
            }
        }
    }

    // Direct clients realize the interface itself; indirect clients inherit
    // from a direct client or realize a descendant interface.
    std::set<std::string> direct;
    for (const auto& r : m.relationships) {
        if (r.kind == RelationshipKind::Realization && r.target == i.name) {
            if (resolve(m, r.source)) direct.insert(r.source);
        }
    }
    const auto class_children = child_graph(m, ElementKind::Class);
    std::set<std::string> indirect;
    for (const auto& d : direct) {
        std::set<std::string> subs;
        collect_reachable(class_children, d, subs);
        indirect.insert(subs.begin(), subs.end());
    }
    for (const auto& d : descendants) {
        for (const auto& r : m.relationships) {
            if (r.kind == RelationshipKind::Realization && r.target == d &&
                resolve(m, r.source)) {
                indirect.insert(r.source);
            }
        }
    }
    for (const auto& d : direct) indirect.erase(d);

    MetricRecord rec;
    rec.subject = qualified_name(m, i);
    rec.values = {
        {"NOps", static_cast<double>(i.operations.size())},
        {"Assoc", static_cast<double>(assoc.size())},
        {"NAnc", static_cast<double>(ancestors.size())},
        {"NDesc", static_cast<double>(descendants.size())},
        {"ECAAttr", static_cast<double>(times_used_as_attribute_type(m, i.name, false))},
        {"ECPar", static_cast<double>(ecpar)},
        {"NDirClients", static_cast<double>(direct.size())},
        {"NIndClients", static_cast<double>(indirect.size())},
    };
    return rec;
}

MetricRecord component_metrics(const Model& m_in, const std::string& component_qn) {
    const Model m = normalize(m_in);
    const Element& c = resolve_kind(m, component_qn, ElementKind::Component, "a component");

    auto dep_pred = [](RelationshipKind k) {
        return k == RelationshipKind::Dependency || k == RelationshipKind::Realization;
    };
    auto assoc_pred = [](RelationshipKind k) { return k == RelationshipKind::Association; };

    std::int64_t connectors = 0;
    for (const auto& r : m.relationships) {
        if (r.kind == RelationshipKind::Crosscut &&
            (r.source == c.name || r.target == c.name)) {
            ++connectors;
        }
    }

    MetricRecord rec;
    rec.subject = qualified_name(m, c);
    rec.values = {
        {"NOps", static_cast<double>(c.operations.size())},
        {"ProvIF", static_cast<double>(c.provides.size())},
        {"ReqIF", static_cast<double>(c.requires_ifaces.size())},
        {"DepOut", static_cast<double>(distinct_targets(m, c.name, true, dep_pred))},
        {"DepIn", static_cast<double>(distinct_targets(m, c.name, false, dep_pred))},
        {"AssocOut", static_cast<double>(distinct_targets(m, c.name, true, assoc_pred))},
        {"AssocIn", static_cast<double>(distinct_targets(m, c.name, false, assoc_pred))},
        {"Connectors", static_cast<double>(connectors)},
    };
    return rec;
}

const std::vector<std::string>& model_metric_ids() {
    static const std::vector<std::string> ids = {"NClass", "NAttr", "NOps",   "NInter", "NOI",
                                                 "DIT",    "InhOps", "InhAttr", "DepOut", "DepIn"};
    return ids;
}

MetricRecord model_metrics(const Model& m_in) {
    const Model m = normalize(m_in);

    double n_class = 0, n_attr = 0, n_ops = 0, n_inter = 0, noi = 0;
    double dit = 0, inh_ops = 0, inh_attr = 0, dep_out = 0, dep_in = 0;
    for (const auto& e : m.elements) {
        n_attr += static_cast<double>(e.attributes.size());
        n_ops += static_cast<double>(e.operations.size());
        if (e.kind == ElementKind::Class) ++n_class;
        if (e.kind == ElementKind::Interface) {
            ++n_inter;
            noi += static_cast<double>(e.operations.size());
        }
    }
    for (const auto& e : m.elements) {
        if (e.kind != ElementKind::Class) continue;
        const MetricRecord c = class_metrics(m, e.name);
        dit += c.at("DIT");
        inh_ops += c.at("OpsInh");
        inh_attr += c.at("AttrInh");
        dep_out += c.at("DepOut");
        dep_in += c.at("DepIn");
    }

    MetricRecord rec;
    rec.subject = m.name;
    rec.values = {
        {"NClass", n_class}, {"NAttr", n_attr},   {"NOps", n_ops},     {"NInter", n_inter},
        {"NOI", noi},        {"DIT", dit},        {"InhOps", inh_ops}, {"InhAttr", inh_attr},
        {"DepOut", dep_out}, {"DepIn", dep_in},
    };
    return rec;
}

}  // namespace dmc
