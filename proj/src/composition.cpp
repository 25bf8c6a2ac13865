#include "dmc/composition.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace dmc {

namespace {

std::string fold(const std::string& s, bool case_sensitive) {
    if (case_sensitive) return s;
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

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

bool is_empty_model(const Model& m) {
    return m.name.empty() && m.elements.empty() && m.relationships.empty() &&
           m.interactions.empty();
}

std::string pick_name(const Model& winner, const Model& loser) {
    return winner.name.empty() ? loser.name : winner.name;
}

ModelKind pick_kind(const Model& winner, const Model& loser) {
    if (is_empty_model(winner)) return loser.kind;
    if (is_empty_model(loser)) return winner.kind;
    return winner.kind == loser.kind ? winner.kind : ModelKind::Mixed;
}

std::string mapped_ref(const std::map<std::string, std::string>& name_map,
                       const std::string& ref) {
    auto it = name_map.find(ref);
    return it != name_map.end() ? it->second : ref;
}

Element rewrite_refs(Element e, const std::map<std::string, std::string>& name_map) {
    for (auto& p : e.provides) p = mapped_ref(name_map, p);
    for (auto& q : e.requires_ifaces) q = mapped_ref(name_map, q);
    return e;
}

Relationship rewrite_refs(Relationship r, const std::map<std::string, std::string>& name_map) {
    r.source = mapped_ref(name_map, r.source);
    r.target = mapped_ref(name_map, r.target);
    return r;
}

Interaction rewrite_refs(Interaction i, const std::map<std::string, std::string>& name_map) {
    for (auto& l : i.lifelines) l.classifier = mapped_ref(name_map, l.classifier);
    return i;
}

// Conflict enumeration over one element pair. `record_sets` controls whether
// stereotype-set differences are reported; merge combines sets instead.
void element_pair_conflicts(const Model& ma, const Element& ea, const Model& mb,
                            const Element& eb, const MatchPolicy& policy, bool record_sets,
                            std::vector<Conflict>& out) {
    const std::string lq = qualified_name(ma, ea);
    const std::string rq = qualified_name(mb, eb);
    auto add = [&](const std::string& property, const std::string& lv, const std::string& rv) {
        out.push_back({lq, rq, property, lv, rv, ConflictResolution::Unresolved});
    };

    if (ea.is_abstract != eb.is_abstract) {
        add("isAbstract", render_bool(ea.is_abstract), render_bool(eb.is_abstract));
    }
    if (record_sets && ea.stereotypes != eb.stereotypes) {
        add("stereotypes", render_set(ea.stereotypes), render_set(eb.stereotypes));
    }

    const MemberMatch mm = match_members(ea, eb, policy);
    for (const auto& [li, ri] : mm.attributes) {
        const AttributeDecl& la = ea.attributes[li];
        const AttributeDecl& ra = eb.attributes[ri];
        if (la.type_name != ra.type_name) {
            add("attribute " + la.name + ".type", la.type_name, ra.type_name);
        }
        if (la.visibility != ra.visibility) {
            add("attribute " + la.name + ".visibility", to_string(la.visibility),
                to_string(ra.visibility));
        }
    }
    for (const auto& [li, ri] : mm.operations) {
        const OperationDecl& lo = ea.operations[li];
        const OperationDecl& ro = eb.operations[ri];
        if (lo.return_type != ro.return_type) {
            add("operation " + lo.signature() + ".returnType", lo.return_type, ro.return_type);
        }
        if (lo.params != ro.params) {
            add("operation " + lo.name + ".params", render_params(lo.params),
                render_params(ro.params));
        }
        if (lo.visibility != ro.visibility) {
            add("operation " + lo.signature() + ".visibility", to_string(lo.visibility),
                to_string(ro.visibility));
        }
    }
    for (const auto& [li, ri] : mm.advices) {
        const AdviceDecl& la = ea.advices[li];
        const AdviceDecl& ra = eb.advices[ri];
        if (la.pointcut != ra.pointcut) {
            add("advice " + la.name + ".pointcut", la.pointcut, ra.pointcut);
        }
    }
}

void relationship_pair_conflicts(const Model& ma, const Model& mb, const CorrespondenceMap& corr,
                                 bool record_sets, std::vector<Conflict>& out) {
    if (!record_sets) return;
    const RelationshipMatch rm =
        match_relationships(ma, mb, corr.element_map(), corr.policy);
    for (const auto& [i, j] : rm.pairs) {
        const Relationship& lr = ma.relationships[i];
        const Relationship& rr = mb.relationships[j];
        if (lr.kind != rr.kind) {
            out.push_back({relationship_key(ma, lr, 0), relationship_key(mb, rr, 0),
                           "relationship.kind", to_string(lr.kind), to_string(rr.kind),
                           ConflictResolution::Unresolved});
        }
        if (lr.stereotypes != rr.stereotypes) {
            out.push_back({relationship_key(ma, lr, 0), relationship_key(mb, rr, 0),
                           "relationship.stereotypes", render_set(lr.stereotypes),
                           render_set(rr.stereotypes), ConflictResolution::Unresolved});
        }
    }
}

std::vector<std::string> set_union(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Override: return "override";
        case Algorithm::Merge: return "merge";
        case Algorithm::Union: return "union";
        case Algorithm::ThreeWay: return "3way";
    }
    return "override";
}

std::string to_string(WinnerSide w) {
    switch (w) {
        case WinnerSide::Left: return "left";
        case WinnerSide::Right: return "right";
        case WinnerSide::NA: return "n/a";
    }
    return "n/a";
}

std::string to_string(ConflictResolution r) {
    switch (r) {
        case ConflictResolution::LeftWins: return "left-wins";
        case ConflictResolution::RightWins: return "right-wins";
        case ConflictResolution::Unresolved: return "unresolved";
    }
    return "unresolved";
}

ThreeWayConflictError::ThreeWayConflictError(std::vector<Conflict> conflicts)
    : std::runtime_error("three-way merge failed with " + std::to_string(conflicts.size()) +
                         " unresolved conflict(s)"),
      conflicts_(std::move(conflicts)) {}

std::vector<Conflict> detect_conflicts(const Model& a_in, const Model& b_in,
                                       const CorrespondenceMap& corr) {
    const Model a = normalize(a_in);
    const Model b = normalize(b_in);
    std::vector<Conflict> out;
    const auto emap = corr.element_map();
    for (const auto& [lname, rname] : corr.element_pairs) {
        const Element* le = resolve(a, lname);
        const Element* re = resolve(b, rname);
        if (!le || !re) continue;
        element_pair_conflicts(a, *le, b, *re, corr.policy, /*record_sets=*/true, out);
    }
    relationship_pair_conflicts(a, b, corr, /*record_sets=*/true, out);
    return out;
}

CompositionResult compose_override(const Model& winner_in, const Model& loser_in,
                                   const CorrespondenceMap& corr) {
    const Model winner = normalize(winner_in);
    const Model loser = normalize(loser_in);

    // loser-local -> winner-local, so surviving references bind to the
    // winner's copy of each matched element
    std::map<std::string, std::string> reverse_map;
    for (const auto& [l, r] : corr.element_pairs) reverse_map.emplace(r, l);

    CompositionResult result;
    result.algorithm = Algorithm::Override;
    result.winner = WinnerSide::Left;
    result.output.name = pick_name(winner, loser);
    result.output.kind = pick_kind(winner, loser);

    std::set<std::string> paired_right;
    for (const auto& [l, r] : corr.element_pairs) paired_right.insert(r);

    for (const auto& e : winner.elements) result.output.elements.push_back(e);
    for (const auto& e : loser.elements) {
        if (!paired_right.count(e.name)) {
            result.output.elements.push_back(rewrite_refs(e, reverse_map));
        }
    }

    const RelationshipMatch rm =
        match_relationships(winner, loser, corr.element_map(), corr.policy);
    for (const auto& r : winner.relationships) result.output.relationships.push_back(r);
    for (std::size_t j : rm.right_only) {
        result.output.relationships.push_back(rewrite_refs(loser.relationships[j], reverse_map));
    }

    std::set<std::string> winner_interactions;
    for (const auto& i : winner.interactions) {
        winner_interactions.insert(i.name);
        result.output.interactions.push_back(i);
    }
    for (const auto& i : loser.interactions) {
        if (!winner_interactions.count(i.name)) {
            result.output.interactions.push_back(rewrite_refs(i, reverse_map));
        }
    }

    result.conflicts = detect_conflicts(winner, loser, corr);
    for (auto& c : result.conflicts) c.resolution = ConflictResolution::LeftWins;
    result.output = normalize(std::move(result.output));
    return result;
}

CompositionResult compose_merge(const Model& winner_in, const Model& loser_in,
                                const CorrespondenceMap& corr) {
    const Model winner = normalize(winner_in);
    const Model loser = normalize(loser_in);

    std::map<std::string, std::string> reverse_map;
    for (const auto& [l, r] : corr.element_pairs) reverse_map.emplace(r, l);

    CompositionResult result;
    result.algorithm = Algorithm::Merge;
    result.winner = WinnerSide::Left;
    result.output.name = pick_name(winner, loser);
    result.output.kind = pick_kind(winner, loser);

    const auto emap = corr.element_map();
    std::set<std::string> paired_right;
    for (const auto& [l, r] : corr.element_pairs) paired_right.insert(r);

    for (const auto& we : winner.elements) {
        auto it = emap.find(we.name);
        if (it == emap.end()) {
            result.output.elements.push_back(we);
            continue;
        }
        const Element* le = resolve(loser, it->second);
        if (!le) {
            result.output.elements.push_back(we);
            continue;
        }

        // Scalar conflicts resolve toward the winner and are recorded;
        // set-valued properties union without a conflict entry.
        element_pair_conflicts(winner, we, loser, *le, corr.policy, /*record_sets=*/false,
                               result.conflicts);

        Element merged = we;
        merged.stereotypes = set_union(we.stereotypes, le->stereotypes);
        merged.provides = set_union(we.provides, rewrite_refs(*le, reverse_map).provides);
        merged.requires_ifaces =
            set_union(we.requires_ifaces, rewrite_refs(*le, reverse_map).requires_ifaces);

        const MemberMatch mm = match_members(we, *le, corr.policy);
        for (std::size_t ri : mm.right_only_attributes) {
            merged.attributes.push_back(le->attributes[ri]);
        }
        for (std::size_t ri : mm.right_only_operations) {
            merged.operations.push_back(le->operations[ri]);
        }
        for (std::size_t ri : mm.right_only_advices) {
            merged.advices.push_back(le->advices[ri]);
        }
        result.output.elements.push_back(std::move(merged));
    }
    for (const auto& e : loser.elements) {
        if (!paired_right.count(e.name)) {
            result.output.elements.push_back(rewrite_refs(e, reverse_map));
        }
    }

    const RelationshipMatch rm =
        match_relationships(winner, loser, corr.element_map(), corr.policy);
    std::set<std::size_t> loser_rel_paired;
    for (const auto& [i, j] : rm.pairs) loser_rel_paired.insert(j);
    for (std::size_t i = 0; i < winner.relationships.size(); ++i) {
        Relationship r = winner.relationships[i];
        for (const auto& [wi, lj] : rm.pairs) {
            if (wi == i) {
                // contradicting stereotypes survive side by side; the
                // consistency checks flag them downstream
                r.stereotypes = set_union(r.stereotypes, loser.relationships[lj].stereotypes);
                break;
            }
        }
        result.output.relationships.push_back(std::move(r));
    }
    for (std::size_t j : rm.right_only) {
        result.output.relationships.push_back(rewrite_refs(loser.relationships[j], reverse_map));
    }

    std::set<std::string> winner_interactions;
    for (const auto& i : winner.interactions) {
        winner_interactions.insert(i.name);
        result.output.interactions.push_back(i);
    }
    for (const auto& i : loser.interactions) {
        if (!winner_interactions.count(i.name)) {
            result.output.interactions.push_back(rewrite_refs(i, reverse_map));
        }
    }

    for (auto& c : result.conflicts) c.resolution = ConflictResolution::LeftWins;
    result.output = normalize(std::move(result.output));
    return result;
}

CompositionResult compose_union(const Model& a_in, const Model& b_in,
                                const CorrespondenceMap& corr) {
    const Model a = normalize(a_in);
    const Model b = normalize(b_in);

    CompositionResult result;
    result.algorithm = Algorithm::Union;
    result.winner = WinnerSide::NA;
    result.output.name = is_empty_model(a) ? b.name : a.name;
    result.output.kind = pick_kind(a, b);

    std::string prefix_a = a.name;
    std::string prefix_b = b.name;
    if (prefix_a == prefix_b) {
        prefix_a += "1";
        prefix_b += "2";
    }

    std::set<std::string> paired_left, paired_right;
    for (const auto& [l, r] : corr.element_pairs) {
        paired_left.insert(l);
        paired_right.insert(r);
    }

    std::map<std::string, std::string> rename_a, rename_b;
    std::set<std::string> taken;
    auto assign = [&taken](std::map<std::string, std::string>& rename, const Element& e,
                           std::string proposed, const std::string& prefix) {
        if (taken.count(proposed)) proposed = prefix + "." + e.name;
        while (taken.count(proposed)) proposed += "'";
        taken.insert(proposed);
        rename.emplace(e.name, proposed);
    };
    for (const auto& e : a.elements) {
        assign(rename_a, e, paired_left.count(e.name) ? prefix_a + "." + e.name : e.name,
               prefix_a);
    }
    for (const auto& e : b.elements) {
        assign(rename_b, e, paired_right.count(e.name) ? prefix_b + "." + e.name : e.name,
               prefix_b);
    }

    auto emit_side = [&result](const Model& side,
                               const std::map<std::string, std::string>& rename) {
        for (const auto& e : side.elements) {
            Element copy = rewrite_refs(e, rename);
            copy.name = rename.at(e.name);
            result.output.elements.push_back(std::move(copy));
        }
        for (const auto& r : side.relationships) {
            result.output.relationships.push_back(rewrite_refs(r, rename));
        }
        for (const auto& i : side.interactions) {
            result.output.interactions.push_back(rewrite_refs(i, rename));
        }
    };
    emit_side(a, rename_a);
    emit_side(b, rename_b);

    result.output = normalize(std::move(result.output));
    return result;
}

namespace {

struct ThreeWayContext {
    ThreeWayPolicy policy;
    std::vector<Conflict>* conflicts;

    bool prefer_mine() const { return policy == ThreeWayPolicy::PreferMine; }

    ConflictResolution resolution() const {
        switch (policy) {
            case ThreeWayPolicy::PreferMine: return ConflictResolution::LeftWins;
            case ThreeWayPolicy::PreferTheirs: return ConflictResolution::RightWins;
            case ThreeWayPolicy::Fail: return ConflictResolution::Unresolved;
        }
        return ConflictResolution::Unresolved;
    }

    void record(const std::string& lq, const std::string& rq, const std::string& property,
                const std::string& lv, const std::string& rv) {
        conflicts->push_back({lq, rq, property, lv, rv, resolution()});
    }
};

template <typename T, typename Render>
T scalar3(ThreeWayContext& ctx, const T* parent, const T& mine, const T& theirs,
          const std::string& lq, const std::string& rq, const std::string& property,
          Render render) {
    if (mine == theirs) return mine;
    if (parent) {
        if (mine == *parent) return theirs;
        if (theirs == *parent) return mine;
    }
    ctx.record(lq, rq, property, render(mine), render(theirs));
    return ctx.prefer_mine() ? mine : theirs;
}

std::vector<std::string> set3(const std::vector<std::string>* parent,
                              const std::vector<std::string>& mine,
                              const std::vector<std::string>& theirs) {
    std::set<std::string> p;
    if (parent) p.insert(parent->begin(), parent->end());
    std::set<std::string> m(mine.begin(), mine.end());
    std::set<std::string> t(theirs.begin(), theirs.end());
    std::vector<std::string> out;
    for (const auto& s : m) {
        if (t.count(s) || !p.count(s)) out.push_back(s);  // kept by both, or added by mine
    }
    for (const auto& s : t) {
        if (!p.count(s) && !m.count(s)) out.push_back(s);  // added by theirs
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct MemberKeying {
    const MatchPolicy& policy;

    std::string attr_key(const AttributeDecl& a) const {
        return fold(a.name, policy.case_sensitive);
    }
    std::string op_key(const OperationDecl& o) const {
        return fold(policy.member_rule == MatchPolicy::MemberRule::BySignature ? o.signature()
                                                                               : o.name,
                    policy.case_sensitive);
    }
    std::string advice_key(const AdviceDecl& a) const {
        return to_string(a.kind) + ":" + fold(a.name, policy.case_sensitive);
    }
};

// Divergent rename of an operation slot: the parent operation disappeared on
// both sides and each side added exactly one new operation with the same
// shape (params + returnType) under a different name.
struct RenameDetection {
    std::set<std::string> claimed_mine;    // op keys consumed by a rename
    std::set<std::string> claimed_theirs;
};

template <typename Member, typename Key, typename Combine, typename Render>
void three_way_members(ThreeWayContext& ctx, const std::vector<Member>* parent,
                       const std::vector<Member>& mine, const std::vector<Member>& theirs,
                       Key key, Combine combine, Render render, const std::string& lq,
                       const std::string& rq, const std::string& what,
                       std::vector<Member>& out,
                       const std::set<std::string>* skip_mine = nullptr,
                       const std::set<std::string>* skip_theirs = nullptr) {
    std::map<std::string, const Member*> p_by, m_by, t_by;
    std::vector<std::string> order;  // parent order first, then new keys
    if (parent) {
        for (const auto& x : *parent) {
            if (p_by.emplace(key(x), &x).second) order.push_back(key(x));
        }
    }
    for (const auto& x : mine) {
        if (m_by.emplace(key(x), &x).second && !p_by.count(key(x))) order.push_back(key(x));
    }
    for (const auto& x : theirs) {
        if (t_by.emplace(key(x), &x).second && !p_by.count(key(x)) && !m_by.count(key(x))) {
            order.push_back(key(x));
        }
    }

    for (const auto& k : order) {
        const Member* p = nullptr;
        if (auto it = p_by.find(k); it != p_by.end()) p = it->second;
        const Member* m = nullptr;
        if (auto it = m_by.find(k); it != m_by.end()) m = it->second;
        const Member* t = nullptr;
        if (auto it = t_by.find(k); it != t_by.end()) t = it->second;

        if (m && skip_mine && skip_mine->count(k)) m = nullptr;
        if (t && skip_theirs && skip_theirs->count(k)) t = nullptr;

        if (m && t) {
            out.push_back(combine(p, *m, *t));
        } else if (m && !t) {
            if (p) {
                if (*m == *p) continue;  // theirs deleted an unchanged member
                ctx.record(lq, rq, what + " " + k, "modified: " + render(*m), "deleted");
                if (ctx.prefer_mine()) out.push_back(*m);
            } else {
                out.push_back(*m);  // added by mine
            }
        } else if (!m && t) {
            if (p) {
                if (*t == *p) continue;
                ctx.record(lq, rq, what + " " + k, "deleted", "modified: " + render(*t));
                if (!ctx.prefer_mine()) out.push_back(*t);
            } else {
                out.push_back(*t);
            }
        }
        // deleted on both sides: drop silently
    }
}

std::string render_attr(const AttributeDecl& a) {
    return a.name + ":" + a.type_name + " (" + to_string(a.visibility) + ")";
}

std::string render_op(const OperationDecl& o) {
    return o.signature() + ":" + o.return_type + " (" + to_string(o.visibility) + ")";
}

std::string render_advice(const AdviceDecl& a) {
    return to_string(a.kind) + " " + a.name + " pointcut=\"" + a.pointcut + "\"";
}

Element three_way_element(ThreeWayContext& ctx, const Element* p, const Element& m,
                          const Element& t, const MatchPolicy& policy, const std::string& lq,
                          const std::string& rq) {
    MemberKeying keys{policy};
    Element out;
    out.kind = m.kind;
    out.name = m.name;

    const bool* p_abs = p ? &p->is_abstract : nullptr;
    out.is_abstract = scalar3(ctx, p_abs, m.is_abstract, t.is_abstract, lq, rq, "isAbstract",
                              render_bool);
    out.stereotypes = set3(p ? &p->stereotypes : nullptr, m.stereotypes, t.stereotypes);
    out.provides = set3(p ? &p->provides : nullptr, m.provides, t.provides);
    out.requires_ifaces =
        set3(p ? &p->requires_ifaces : nullptr, m.requires_ifaces, t.requires_ifaces);

    three_way_members(
        ctx, p ? &p->attributes : nullptr, m.attributes, t.attributes,
        [&](const AttributeDecl& a) { return keys.attr_key(a); },
        [&](const AttributeDecl* pp, const AttributeDecl& mm, const AttributeDecl& tt) {
            AttributeDecl merged = mm;
            const std::string* pt = pp ? &pp->type_name : nullptr;
            merged.type_name = scalar3(ctx, pt, mm.type_name, tt.type_name, lq, rq,
                                       "attribute " + mm.name + ".type",
                                       [](const std::string& s) { return s; });
            const Visibility* pv = pp ? &pp->visibility : nullptr;
            merged.visibility = scalar3(ctx, pv, mm.visibility, tt.visibility, lq, rq,
                                        "attribute " + mm.name + ".visibility",
                                        [](Visibility v) { return to_string(v); });
            return merged;
        },
        render_attr, lq, rq, "attribute", out.attributes);

    // Detect divergent renames before the general slot merge, then keep the
    // renamed additions out of the plain-addition path.
    RenameDetection renames;
    if (p) {
        std::map<std::string, const OperationDecl*> p_by, m_by, t_by;
        for (const auto& o : p->operations) p_by.emplace(keys.op_key(o), &o);
        for (const auto& o : m.operations) m_by.emplace(keys.op_key(o), &o);
        for (const auto& o : t.operations) t_by.emplace(keys.op_key(o), &o);
        for (const auto& [k, po] : p_by) {
            if (m_by.count(k) || t_by.count(k)) continue;  // not deleted on both sides
            std::vector<const OperationDecl*> mine_adds, theirs_adds;
            for (const auto& [mk, mo] : m_by) {
                if (!p_by.count(mk) && !renames.claimed_mine.count(mk) &&
                    mo->params == po->params && mo->return_type == po->return_type) {
                    mine_adds.push_back(mo);
                }
            }
            for (const auto& [tk, to] : t_by) {
                if (!p_by.count(tk) && !renames.claimed_theirs.count(tk) &&
                    to->params == po->params && to->return_type == po->return_type) {
                    theirs_adds.push_back(to);
                }
            }
            if (mine_adds.size() == 1 && theirs_adds.size() == 1 &&
                mine_adds[0]->name != theirs_adds[0]->name) {
                ctx.record(lq, rq, "operation " + po->signature() + " rename",
                           render_op(*mine_adds[0]), render_op(*theirs_adds[0]));
                renames.claimed_mine.insert(keys.op_key(*mine_adds[0]));
                renames.claimed_theirs.insert(keys.op_key(*theirs_adds[0]));
                out.operations.push_back(ctx.prefer_mine() ? *mine_adds[0] : *theirs_adds[0]);
            }
        }
    }

    three_way_members(
        ctx, p ? &p->operations : nullptr, m.operations, t.operations,
        [&](const OperationDecl& o) { return keys.op_key(o); },
        [&](const OperationDecl* pp, const OperationDecl& mm, const OperationDecl& tt) {
            OperationDecl merged = mm;
            const std::string* pr = pp ? &pp->return_type : nullptr;
            merged.return_type = scalar3(ctx, pr, mm.return_type, tt.return_type, lq, rq,
                                         "operation " + mm.signature() + ".returnType",
                                         [](const std::string& s) { return s; });
            const std::vector<Param>* ppar = pp ? &pp->params : nullptr;
            merged.params = scalar3(ctx, ppar, mm.params, tt.params, lq, rq,
                                    "operation " + mm.name + ".params", render_params);
            const Visibility* pv = pp ? &pp->visibility : nullptr;
            merged.visibility = scalar3(ctx, pv, mm.visibility, tt.visibility, lq, rq,
                                        "operation " + mm.signature() + ".visibility",
                                        [](Visibility v) { return to_string(v); });
            return merged;
        },
        render_op, lq, rq, "operation", out.operations, &renames.claimed_mine,
        &renames.claimed_theirs);

    three_way_members(
        ctx, p ? &p->advices : nullptr, m.advices, t.advices,
        [&](const AdviceDecl& a) { return keys.advice_key(a); },
        [&](const AdviceDecl* pp, const AdviceDecl& mm, const AdviceDecl& tt) {
            AdviceDecl merged = mm;
            const std::string* ppc = pp ? &pp->pointcut : nullptr;
            merged.pointcut = scalar3(ctx, ppc, mm.pointcut, tt.pointcut, lq, rq,
                                      "advice " + mm.name + ".pointcut",
                                      [](const std::string& s) { return s; });
            const std::string* prt = pp ? &pp->return_type : nullptr;
            merged.return_type = scalar3(ctx, prt, mm.return_type, tt.return_type, lq, rq,
                                         "advice " + mm.name + ".returnType",
                                         [](const std::string& s) { return s; });
            return merged;
        },
        render_advice, lq, rq, "advice", out.advices);

    return out;
}

std::string interaction_summary(const Interaction& i) {
    return "interaction with " + std::to_string(i.lifelines.size()) + " lifeline(s), " +
           std::to_string(i.messages.size()) + " message(s)";
}

}  // namespace

CompositionResult three_way_merge(const Model& parent_in, const Model& mine_in,
                                  const Model& theirs_in, ThreeWayPolicy on_conflict,
                                  const MatchPolicy& match_policy) {
    const Model parent = normalize(parent_in);
    const Model mine = normalize(mine_in);
    const Model theirs = normalize(theirs_in);

    CompositionResult result;
    result.algorithm = Algorithm::ThreeWay;
    switch (on_conflict) {
        case ThreeWayPolicy::PreferMine: result.winner = WinnerSide::Left; break;
        case ThreeWayPolicy::PreferTheirs: result.winner = WinnerSide::Right; break;
        case ThreeWayPolicy::Fail: result.winner = WinnerSide::NA; break;
    }
    ThreeWayContext ctx{on_conflict, &result.conflicts};

    result.output.name = scalar3(ctx, &parent.name, mine.name, theirs.name, mine.name,
                                 theirs.name, "model.name",
                                 [](const std::string& s) { return s; });
    result.output.kind = scalar3(ctx, &parent.kind, mine.kind, theirs.kind, mine.name,
                                 theirs.name, "model.kind",
                                 [](ModelKind k) { return to_string(k); });

    // Elements keyed by (kind, name); parent order first, then additions.
    auto elem_key = [&match_policy](const Element& e) {
        return to_string(e.kind) + ":" + fold(e.name, match_policy.case_sensitive);
    };
    std::map<std::string, const Element*> p_by, m_by, t_by;
    std::vector<std::string> order;
    for (const auto& e : parent.elements) {
        if (p_by.emplace(elem_key(e), &e).second) order.push_back(elem_key(e));
    }
    for (const auto& e : mine.elements) {
        if (m_by.emplace(elem_key(e), &e).second && !p_by.count(elem_key(e))) {
            order.push_back(elem_key(e));
        }
    }
    for (const auto& e : theirs.elements) {
        if (t_by.emplace(elem_key(e), &e).second && !p_by.count(elem_key(e)) &&
            !m_by.count(elem_key(e))) {
            order.push_back(elem_key(e));
        }
    }

    for (const auto& k : order) {
        const Element* p = nullptr;
        if (auto it = p_by.find(k); it != p_by.end()) p = it->second;
        const Element* m = nullptr;
        if (auto it = m_by.find(k); it != m_by.end()) m = it->second;
        const Element* t = nullptr;
        if (auto it = t_by.find(k); it != t_by.end()) t = it->second;

        if (m && t) {
            const std::string lq = qualified_name(mine, *m);
            const std::string rq = qualified_name(theirs, *t);
            result.output.elements.push_back(
                three_way_element(ctx, p, *m, *t, match_policy, lq, rq));
        } else if (m && !t) {
            if (p) {
                if (*m == *p) continue;
                ctx.record(qualified_name(mine, *m), parent.name + "::" + p->name, "element",
                           "modified", "deleted");
                if (ctx.prefer_mine()) result.output.elements.push_back(*m);
            } else {
                result.output.elements.push_back(*m);
            }
        } else if (!m && t) {
            if (p) {
                if (*t == *p) continue;
                ctx.record(parent.name + "::" + p->name, qualified_name(theirs, *t), "element",
                           "deleted", "modified");
                if (!ctx.prefer_mine()) result.output.elements.push_back(*t);
            } else {
                result.output.elements.push_back(*t);
            }
        }
    }

    // Relationships keyed by (kind, source, target) with occurrence index.
    auto rel_keys = [](const Model& mo) {
        std::map<std::tuple<int, std::string, std::string>, std::size_t> occ;
        std::map<std::string, const Relationship*> by_key;
        std::vector<std::string> ord;
        for (const auto& r : mo.relationships) {
            auto base = std::make_tuple(static_cast<int>(r.kind), r.source, r.target);
            std::string key = to_string(r.kind) + ":" + r.source + "->" + r.target + "#" +
                              std::to_string(occ[base]++);
            by_key.emplace(key, &r);
            ord.push_back(key);
        }
        return std::make_pair(by_key, ord);
    };
    auto [pr_by, pr_order] = rel_keys(parent);
    auto [mr_by, mr_order] = rel_keys(mine);
    auto [tr_by, tr_order] = rel_keys(theirs);
    std::vector<std::string> rorder = pr_order;
    for (const auto& k : mr_order) {
        if (!pr_by.count(k)) rorder.push_back(k);
    }
    for (const auto& k : tr_order) {
        if (!pr_by.count(k) && !mr_by.count(k)) rorder.push_back(k);
    }
    for (const auto& k : rorder) {
        const Relationship* p = nullptr;
        if (auto it = pr_by.find(k); it != pr_by.end()) p = it->second;
        const Relationship* m = nullptr;
        if (auto it = mr_by.find(k); it != mr_by.end()) m = it->second;
        const Relationship* t = nullptr;
        if (auto it = tr_by.find(k); it != tr_by.end()) t = it->second;

        if (m && t) {
            Relationship merged = *m;
            merged.stereotypes = set3(p ? &p->stereotypes : nullptr, m->stereotypes,
                                      t->stereotypes);
            result.output.relationships.push_back(std::move(merged));
        } else if (m && !t) {
            if (p) {
                if (*m == *p) continue;
                ctx.record(mine.name + "::" + k, parent.name + "::" + k, "relationship",
                           "modified", "deleted");
                if (ctx.prefer_mine()) result.output.relationships.push_back(*m);
            } else {
                result.output.relationships.push_back(*m);
            }
        } else if (!m && t) {
            if (p) {
                if (*t == *p) continue;
                ctx.record(parent.name + "::" + k, theirs.name + "::" + k, "relationship",
                           "deleted", "modified");
                if (!ctx.prefer_mine()) result.output.relationships.push_back(*t);
            } else {
                result.output.relationships.push_back(*t);
            }
        }
    }

    // Interactions three-way at whole-interaction granularity.
    std::map<std::string, const Interaction*> pi_by, mi_by, ti_by;
    std::vector<std::string> iorder;
    for (const auto& i : parent.interactions) {
        if (pi_by.emplace(i.name, &i).second) iorder.push_back(i.name);
    }
    for (const auto& i : mine.interactions) {
        if (mi_by.emplace(i.name, &i).second && !pi_by.count(i.name)) iorder.push_back(i.name);
    }
    for (const auto& i : theirs.interactions) {
        if (ti_by.emplace(i.name, &i).second && !pi_by.count(i.name) && !mi_by.count(i.name)) {
            iorder.push_back(i.name);
        }
    }
    for (const auto& k : iorder) {
        const Interaction* p = nullptr;
        if (auto it = pi_by.find(k); it != pi_by.end()) p = it->second;
        const Interaction* m = nullptr;
        if (auto it = mi_by.find(k); it != mi_by.end()) m = it->second;
        const Interaction* t = nullptr;
        if (auto it = ti_by.find(k); it != ti_by.end()) t = it->second;

        if (m && t) {
            if (*m == *t) {
                result.output.interactions.push_back(*m);
            } else if (p && *m == *p) {
                result.output.interactions.push_back(*t);
            } else if (p && *t == *p) {
                result.output.interactions.push_back(*m);
            } else {
                ctx.record(mine.name + "::" + k, theirs.name + "::" + k, "interaction",
                           interaction_summary(*m), interaction_summary(*t));
                result.output.interactions.push_back(ctx.prefer_mine() ? *m : *t);
            }
        } else if (m && !t) {
            if (p) {
                if (*m == *p) continue;
                ctx.record(mine.name + "::" + k, parent.name + "::" + k, "interaction",
                           "modified", "deleted");
                if (ctx.prefer_mine()) result.output.interactions.push_back(*m);
            } else {
                result.output.interactions.push_back(*m);
            }
        } else if (!m && t) {
            if (p) {
                if (*t == *p) continue;
                ctx.record(parent.name + "::" + k, theirs.name + "::" + k, "interaction",
                           "deleted", "modified");
                if (!ctx.prefer_mine()) result.output.interactions.push_back(*t);
            } else {
                result.output.interactions.push_back(*t);
            }
        }
    }

    if (on_conflict == ThreeWayPolicy::Fail && !result.conflicts.empty()) {
        throw ThreeWayConflictError(result.conflicts);
    }
    result.output = normalize(std::move(result.output));
    return result;
}

}  // namespace dmc
