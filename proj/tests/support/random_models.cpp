#include "support/random_models.hpp"

#include <algorithm>
#include <set>

namespace dmc::testing {

namespace {

const char* kTypePool[] = {"int", "string", "bool", "double", "void"};

std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

std::string type_name(Rng& rng, const std::vector<std::string>& classifiers) {
    if (!classifiers.empty() && chance(rng, 0.3)) {
        return classifiers[pick(rng, classifiers.size())];
    }
    return kTypePool[pick(rng, 4)];
}

Visibility random_visibility(Rng& rng) {
    switch (pick(rng, 4)) {
        case 0: return Visibility::Public;
        case 1: return Visibility::Private;
        case 2: return Visibility::Protected;
        default: return Visibility::Package;
    }
}

ElementKind random_kind(Rng& rng) {
    const std::size_t roll = pick(rng, 10);
    if (roll < 5) return ElementKind::Class;
    if (roll < 7) return ElementKind::Interface;
    if (roll < 9) return ElementKind::Component;
    return ElementKind::Aspect;
}

}  // namespace

Model random_model(Rng& rng, const RandomModelOptions& opts) {
    Model m;
    m.name = opts.name;
    m.kind = ModelKind::Mixed;

    const std::size_t count =
        opts.min_elements +
        (opts.max_elements > opts.min_elements
             ? pick(rng, opts.max_elements - opts.min_elements + 1)
             : 0);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) {
        names.push_back("E" + std::to_string(i));
    }

    std::vector<std::string> classifier_names = names;
    std::vector<std::string> interface_names;
    for (std::size_t i = 0; i < count; ++i) {
        Element e;
        e.kind = random_kind(rng);
        e.name = names[i];
        e.is_abstract = e.kind == ElementKind::Class && chance(rng, 0.25);
        if (e.kind == ElementKind::Interface) interface_names.push_back(e.name);
        const std::size_t attrs = pick(rng, opts.max_members + 1);
        for (std::size_t a = 0; a < attrs; ++a) {
            e.attributes.push_back(
                {"f" + std::to_string(a), type_name(rng, classifier_names),
                 random_visibility(rng)});
        }
        const std::size_t ops = pick(rng, opts.max_members + 1);
        for (std::size_t o = 0; o < ops; ++o) {
            OperationDecl od;
            od.name = "m" + std::to_string(o);
            od.return_type = type_name(rng, classifier_names);
            od.visibility = random_visibility(rng);
            const std::size_t params = pick(rng, 3);
            for (std::size_t p = 0; p < params; ++p) {
                od.params.push_back({"p" + std::to_string(p), type_name(rng, classifier_names)});
            }
            e.operations.push_back(std::move(od));
        }
        if (e.kind == ElementKind::Aspect && chance(rng, 0.7)) {
            AdviceDecl ad;
            ad.kind = static_cast<AdviceKind>(pick(rng, 3));
            ad.name = "adv" + std::to_string(i);
            ad.pointcut = names[pick(rng, names.size())] + ".m0";
            if (ad.kind == AdviceKind::Around) ad.return_type = "void";
            e.advices.push_back(std::move(ad));
        }
        m.elements.push_back(std::move(e));
    }

    // provides/requires only reference real interfaces
    if (!interface_names.empty()) {
        for (auto& e : m.elements) {
            if (e.kind == ElementKind::Interface) continue;
            if (chance(rng, 0.35)) {
                e.provides.push_back(interface_names[pick(rng, interface_names.size())]);
            }
            if (chance(rng, 0.35)) {
                e.requires_ifaces.push_back(
                    interface_names[pick(rng, interface_names.size())]);
            }
        }
    }

    const std::size_t rels = pick(rng, opts.max_relationships + 1);
    for (std::size_t r = 0; r < rels; ++r) {
        Relationship edge;
        const std::size_t si = pick(rng, m.elements.size());
        const std::size_t ti = pick(rng, m.elements.size());
        if (si == ti) continue;
        const Element& src = m.elements[si];
        const Element& tgt = m.elements[ti];
        edge.source = src.name;
        edge.target = tgt.name;
        switch (pick(rng, 6)) {
            case 0:
                // inheritance stays within a kind and never hangs an abstract
                // class under a concrete one
                if (src.kind != tgt.kind) continue;
                if (src.kind == ElementKind::Class && src.is_abstract && !tgt.is_abstract) {
                    continue;
                }
                edge.kind = RelationshipKind::Inheritance;
                break;
            case 1: edge.kind = RelationshipKind::Dependency; break;
            case 2: edge.kind = RelationshipKind::Association; break;
            case 3:
                if (tgt.kind != ElementKind::Interface) continue;
                edge.kind = RelationshipKind::Realization;
                break;
            case 4:
                if (src.kind != ElementKind::Aspect) continue;
                edge.kind = RelationshipKind::Crosscut;
                break;
            default: edge.kind = RelationshipKind::Aggregation; break;
        }
        if (chance(rng, 0.2)) edge.stereotypes.push_back("use");
        m.relationships.push_back(std::move(edge));
    }

    if (opts.with_interactions && !m.elements.empty() && chance(rng, 0.8)) {
        Interaction ia;
        ia.name = "scenario";
        const std::size_t lifelines = 1 + pick(rng, std::min<std::size_t>(3, count));
        for (std::size_t l = 0; l < lifelines; ++l) {
            ia.lifelines.push_back({"l" + std::to_string(l), "obj" + std::to_string(l),
                                    m.elements[pick(rng, m.elements.size())].name});
        }
        const std::size_t msgs = pick(rng, 4);
        for (std::size_t s = 0; s < msgs; ++s) {
            MessageDecl msg;
            msg.name = "m0";
            msg.from = ia.lifelines[pick(rng, ia.lifelines.size())].id;
            msg.to = ia.lifelines[pick(rng, ia.lifelines.size())].id;
            ia.messages.push_back(std::move(msg));
        }
        m.interactions.push_back(std::move(ia));
    }
    return normalize(std::move(m));
}

Model mutate_model(Rng& rng, const Model& m_in, std::size_t edits) {
    Model m = normalize(m_in);
    std::size_t fresh = 1000 + pick(rng, 1000);
    for (std::size_t i = 0; i < edits; ++i) {
        if (m.elements.empty()) {
            Element e;
            e.kind = random_kind(rng);
            e.name = "N" + std::to_string(fresh++);
            m.elements.push_back(std::move(e));
            continue;
        }
        Element& e = m.elements[pick(rng, m.elements.size())];
        switch (pick(rng, 10)) {
            case 0: e.is_abstract = !e.is_abstract; break;
            case 1:
                e.attributes.push_back({"x" + std::to_string(fresh++), "int",
                                        Visibility::Public});
                break;
            case 2:
                if (!e.attributes.empty()) {
                    e.attributes.erase(e.attributes.begin() +
                                       static_cast<std::ptrdiff_t>(
                                           pick(rng, e.attributes.size())));
                }
                break;
            case 3:
                if (!e.attributes.empty()) {
                    e.attributes[pick(rng, e.attributes.size())].type_name =
                        kTypePool[pick(rng, 4)];
                }
                break;
            case 4: {
                OperationDecl od;
                od.name = "n" + std::to_string(fresh++);
                od.return_type = kTypePool[pick(rng, 5)];
                e.operations.push_back(std::move(od));
                break;
            }
            case 5:
                if (!e.operations.empty()) {
                    e.operations[pick(rng, e.operations.size())].return_type =
                        kTypePool[pick(rng, 5)];
                }
                break;
            case 6:
                if (!e.operations.empty()) {
                    e.operations.erase(e.operations.begin() +
                                       static_cast<std::ptrdiff_t>(
                                           pick(rng, e.operations.size())));
                }
                break;
            case 7: {
                Element fresh_elem;
                fresh_elem.kind = random_kind(rng);
                fresh_elem.name = "N" + std::to_string(fresh++);
                fresh_elem.attributes.push_back({"f0", "int", Visibility::Public});
                m.elements.push_back(std::move(fresh_elem));
                break;
            }
            case 8:
                if (m.elements.size() > 1) {
                    const std::string victim = m.elements[pick(rng, m.elements.size())].name;
                    m.elements.erase(std::remove_if(m.elements.begin(), m.elements.end(),
                                                    [&victim](const Element& el) {
                                                        return el.name == victim;
                                                    }),
                                     m.elements.end());
                }
                break;
            default:
                if (m.elements.size() >= 2) {
                    const std::string s = m.elements[pick(rng, m.elements.size())].name;
                    const std::string t = m.elements[pick(rng, m.elements.size())].name;
                    if (s != t) {
                        m.relationships.push_back(
                            {RelationshipKind::Dependency, s, t, {}});
                    }
                }
                break;
        }
    }
    if (chance(rng, 0.1)) m.name = m.name + "X";
    return normalize(std::move(m));
}

std::pair<Model, Model> random_related_pair(Rng& rng) {
    RandomModelOptions opts;
    opts.name = "Base";
    Model base = random_model(rng, opts);
    Model delta = mutate_model(rng, base, 1 + pick(rng, 6));
    delta.name = "Delta";
    return {std::move(base), normalize(std::move(delta))};
}

std::int64_t naive_census_total(const Model& m) {
    std::int64_t total = 0;
    for (const auto& e : m.elements) {
        total += 1;
        for ([[maybe_unused]] const auto& a : e.attributes) total += 1;
        for ([[maybe_unused]] const auto& o : e.operations) total += 1;
    }
    for ([[maybe_unused]] const auto& r : m.relationships) total += 1;
    return total;
}

bool closure_ok(const Model& m) {
    std::set<std::string> names;
    for (const auto& e : m.elements) names.insert(e.name);
    auto ok = [&names](const std::string& ref) { return names.count(ref) > 0; };
    for (const auto& e : m.elements) {
        for (const auto& p : e.provides) {
            if (!ok(p)) return false;
        }
        for (const auto& q : e.requires_ifaces) {
            if (!ok(q)) return false;
        }
    }
    for (const auto& r : m.relationships) {
        if (!ok(r.source) || !ok(r.target)) return false;
    }
    for (const auto& i : m.interactions) {
        for (const auto& l : i.lifelines) {
            if (!ok(l.classifier)) return false;
        }
    }
    return true;
}

}  // namespace dmc::testing
