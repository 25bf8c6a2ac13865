#include "dmc/matching.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

namespace dmc {

namespace {

std::string fold_case(const std::string& s, bool case_sensitive) {
    if (case_sensitive) return s;
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string member_op_qn(const Model& m, const Element& e, const OperationDecl& o) {
    return qualified_name(m, e) + "::" + o.signature();
}

std::string member_attr_qn(const Model& m, const Element& e, const AttributeDecl& a) {
    return qualified_name(m, e) + "::" + a.name;
}

}  // namespace

std::string relationship_key(const Model& m, const Relationship& r, std::size_t occurrence) {
    std::string key =
        m.name + "::" + to_string(r.kind) + ":" + r.source + "->" + r.target;
    if (occurrence > 0) key += "#" + std::to_string(occurrence);
    return key;
}

MemberMatch match_members(const Element& left, const Element& right, const MatchPolicy& policy,
                          std::vector<std::string>* warnings) {
    MemberMatch mm;
    const bool cs = policy.case_sensitive;

    // Attributes pair by name.
    std::map<std::string, std::size_t> right_attrs;
    for (std::size_t j = 0; j < right.attributes.size(); ++j) {
        right_attrs.emplace(fold_case(right.attributes[j].name, cs), j);
    }
    std::set<std::size_t> right_attr_used;
    for (std::size_t i = 0; i < left.attributes.size(); ++i) {
        auto it = right_attrs.find(fold_case(left.attributes[i].name, cs));
        if (it != right_attrs.end()) {
            mm.attributes.emplace_back(i, it->second);
            right_attr_used.insert(it->second);
        } else {
            mm.left_only_attributes.push_back(i);
        }
    }
    for (std::size_t j = 0; j < right.attributes.size(); ++j) {
        if (!right_attr_used.count(j)) mm.right_only_attributes.push_back(j);
    }

    // Operations pair by signature or by name per policy. Under by-name,
    // same-named overloads make the pairing ambiguous; the pair is dropped
    // and a warning reported.
    auto op_key = [&](const OperationDecl& o) {
        return policy.member_rule == MatchPolicy::MemberRule::BySignature
                   ? fold_case(o.signature(), cs)
                   : fold_case(o.name, cs);
    };
    std::map<std::string, std::vector<std::size_t>> left_ops, right_ops;
    for (std::size_t i = 0; i < left.operations.size(); ++i) {
        left_ops[op_key(left.operations[i])].push_back(i);
    }
    for (std::size_t j = 0; j < right.operations.size(); ++j) {
        right_ops[op_key(right.operations[j])].push_back(j);
    }
    std::set<std::size_t> left_op_paired, right_op_paired;
    for (const auto& [key, lidx] : left_ops) {
        auto it = right_ops.find(key);
        if (it == right_ops.end()) continue;
        const auto& ridx = it->second;
        if (lidx.size() == 1 && ridx.size() == 1) {
            mm.operations.emplace_back(lidx[0], ridx[0]);
            left_op_paired.insert(lidx[0]);
            right_op_paired.insert(ridx[0]);
        } else if (warnings) {
            warnings->push_back("ambiguous operation match for \"" + key + "\" in \"" +
                                left.name + "\"; pair dropped");
        }
    }
    for (std::size_t i = 0; i < left.operations.size(); ++i) {
        if (!left_op_paired.count(i)) mm.left_only_operations.push_back(i);
    }
    for (std::size_t j = 0; j < right.operations.size(); ++j) {
        if (!right_op_paired.count(j)) mm.right_only_operations.push_back(j);
    }

    // Advices pair by (kind, name).
    std::map<std::pair<int, std::string>, std::size_t> right_advs;
    for (std::size_t j = 0; j < right.advices.size(); ++j) {
        right_advs.emplace(
            std::make_pair(static_cast<int>(right.advices[j].kind),
                           fold_case(right.advices[j].name, cs)),
            j);
    }
    std::set<std::size_t> right_adv_used;
    for (std::size_t i = 0; i < left.advices.size(); ++i) {
        auto it = right_advs.find(std::make_pair(static_cast<int>(left.advices[i].kind),
                                                 fold_case(left.advices[i].name, cs)));
        if (it != right_advs.end()) {
            mm.advices.emplace_back(i, it->second);
            right_adv_used.insert(it->second);
        } else {
            mm.left_only_advices.push_back(i);
        }
    }
    for (std::size_t j = 0; j < right.advices.size(); ++j) {
        if (!right_adv_used.count(j)) mm.right_only_advices.push_back(j);
    }
    return mm;
}

RelationshipMatch match_relationships(const Model& a, const Model& b,
                                      const std::map<std::string, std::string>& element_map,
                                      const MatchPolicy& policy) {
    RelationshipMatch rm;
    const bool cs = policy.case_sensitive;

    auto mapped = [&](const std::string& endpoint) {
        auto it = element_map.find(endpoint);
        return it != element_map.end() ? it->second : endpoint;
    };
    auto key_of = [&](const Relationship& r, bool map_endpoints) {
        const std::string src = map_endpoints ? mapped(r.source) : r.source;
        const std::string tgt = map_endpoints ? mapped(r.target) : r.target;
        return std::make_tuple(static_cast<int>(r.kind), fold_case(src, cs), fold_case(tgt, cs));
    };

    std::map<std::tuple<int, std::string, std::string>, std::vector<std::size_t>> right_by_key;
    for (std::size_t j = 0; j < b.relationships.size(); ++j) {
        right_by_key[key_of(b.relationships[j], false)].push_back(j);
    }
    std::map<std::tuple<int, std::string, std::string>, std::size_t> consumed;
    std::set<std::size_t> right_used;
    for (std::size_t i = 0; i < a.relationships.size(); ++i) {
        const auto key = key_of(a.relationships[i], true);
        auto it = right_by_key.find(key);
        if (it != right_by_key.end() && consumed[key] < it->second.size()) {
            const std::size_t j = it->second[consumed[key]++];
            rm.pairs.emplace_back(i, j);
            right_used.insert(j);
        } else {
            rm.left_only.push_back(i);
        }
    }
    for (std::size_t j = 0; j < b.relationships.size(); ++j) {
        if (!right_used.count(j)) rm.right_only.push_back(j);
    }
    return rm;
}

std::map<std::string, std::string> CorrespondenceMap::element_map() const {
    std::map<std::string, std::string> out;
    for (const auto& [l, r] : element_pairs) out.emplace(l, r);
    return out;
}

CorrespondenceMap match_models(const Model& a_in, const Model& b_in, const MatchPolicy& policy) {
    const Model a = normalize(a_in);
    const Model b = normalize(b_in);
    CorrespondenceMap cm;
    cm.policy = policy;
    const bool cs = policy.case_sensitive;

    // Classifiers pair by (kind, name).
    std::map<std::pair<int, std::string>, std::size_t> right_elems;
    for (std::size_t j = 0; j < b.elements.size(); ++j) {
        right_elems.emplace(std::make_pair(static_cast<int>(b.elements[j].kind),
                                           fold_case(b.elements[j].name, cs)),
                            j);
    }
    std::set<std::size_t> right_used;
    std::vector<std::pair<std::size_t, std::size_t>> elem_pairs;
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        auto it = right_elems.find(std::make_pair(static_cast<int>(a.elements[i].kind),
                                                  fold_case(a.elements[i].name, cs)));
        if (it != right_elems.end()) {
            elem_pairs.emplace_back(i, it->second);
            right_used.insert(it->second);
        } else {
            cm.unmatched_left.push_back(qualified_name(a, a.elements[i]));
            for (const auto& at : a.elements[i].attributes) {
                cm.unmatched_left.push_back(member_attr_qn(a, a.elements[i], at));
            }
            for (const auto& op : a.elements[i].operations) {
                cm.unmatched_left.push_back(member_op_qn(a, a.elements[i], op));
            }
        }
    }
    for (std::size_t j = 0; j < b.elements.size(); ++j) {
        if (!right_used.count(j)) {
            cm.unmatched_right.push_back(qualified_name(b, b.elements[j]));
            for (const auto& at : b.elements[j].attributes) {
                cm.unmatched_right.push_back(member_attr_qn(b, b.elements[j], at));
            }
            for (const auto& op : b.elements[j].operations) {
                cm.unmatched_right.push_back(member_op_qn(b, b.elements[j], op));
            }
        }
    }

    for (const auto& [i, j] : elem_pairs) {
        const Element& le = a.elements[i];
        const Element& re = b.elements[j];
        cm.element_pairs.emplace_back(le.name, re.name);
        cm.pairs.emplace_back(qualified_name(a, le), qualified_name(b, re));

        const MemberMatch mm = match_members(le, re, policy, &cm.warnings);
        for (const auto& [li, ri] : mm.attributes) {
            cm.pairs.emplace_back(member_attr_qn(a, le, le.attributes[li]),
                                  member_attr_qn(b, re, re.attributes[ri]));
        }
        for (std::size_t li : mm.left_only_attributes) {
            cm.unmatched_left.push_back(member_attr_qn(a, le, le.attributes[li]));
        }
        for (std::size_t ri : mm.right_only_attributes) {
            cm.unmatched_right.push_back(member_attr_qn(b, re, re.attributes[ri]));
        }
        for (const auto& [li, ri] : mm.operations) {
            cm.pairs.emplace_back(member_op_qn(a, le, le.operations[li]),
                                  member_op_qn(b, re, re.operations[ri]));
        }
        for (std::size_t li : mm.left_only_operations) {
            cm.unmatched_left.push_back(member_op_qn(a, le, le.operations[li]));
        }
        for (std::size_t ri : mm.right_only_operations) {
            cm.unmatched_right.push_back(member_op_qn(b, re, re.operations[ri]));
        }
    }

    const RelationshipMatch rm = match_relationships(a, b, cm.element_map(), policy);
    std::map<std::tuple<int, std::string, std::string>, std::size_t> occ_a, occ_b;
    auto occurrence = [](auto& occ, const Model& m, const Relationship& r) {
        auto key = std::make_tuple(static_cast<int>(r.kind), r.source, r.target);
        (void)m;
        return occ[key]++;
    };
    std::vector<std::string> rel_keys_a(a.relationships.size());
    std::vector<std::string> rel_keys_b(b.relationships.size());
    for (std::size_t i = 0; i < a.relationships.size(); ++i) {
        rel_keys_a[i] = relationship_key(a, a.relationships[i],
                                         occurrence(occ_a, a, a.relationships[i]));
    }
    for (std::size_t j = 0; j < b.relationships.size(); ++j) {
        rel_keys_b[j] = relationship_key(b, b.relationships[j],
                                         occurrence(occ_b, b, b.relationships[j]));
    }
    for (const auto& [i, j] : rm.pairs) cm.pairs.emplace_back(rel_keys_a[i], rel_keys_b[j]);
    for (std::size_t i : rm.left_only) cm.unmatched_left.push_back(rel_keys_a[i]);
    for (std::size_t j : rm.right_only) cm.unmatched_right.push_back(rel_keys_b[j]);

    std::sort(cm.pairs.begin(), cm.pairs.end());
    std::sort(cm.unmatched_left.begin(), cm.unmatched_left.end());
    std::sort(cm.unmatched_right.begin(), cm.unmatched_right.end());
    std::sort(cm.warnings.begin(), cm.warnings.end());
    cm.warnings.erase(std::unique(cm.warnings.begin(), cm.warnings.end()), cm.warnings.end());
    return cm;
}

}  // namespace dmc
