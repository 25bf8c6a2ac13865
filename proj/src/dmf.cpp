#include "dmc/dmf.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dmc {

namespace {

using json = nlohmann::ordered_json;

std::pair<int, int> line_col_at(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

class DocReader {
public:
    DocReader(std::vector<ParseDiagnostic>& errors, std::vector<ParseDiagnostic>* warnings)
        : errors_(errors), warnings_(warnings) {}

    void error(const std::string& where, const std::string& message) {
        errors_.push_back({Severity::Error, 0, 0, where + ": " + message});
    }

    void warn(const std::string& where, const std::string& message) {
        if (warnings_) warnings_->push_back({Severity::Warning, 0, 0, where + ": " + message});
    }

    void check_keys(const json& obj, const std::string& where,
                    const std::set<std::string>& known) {
        if (!obj.is_object()) {
            error(where, "expected an object");
            return;
        }
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!known.count(it.key())) {
                warn(where, "unknown field \"" + it.key() + "\" dropped");
            }
        }
    }

    std::string req_string(const json& obj, const std::string& where, const std::string& key) {
        if (!obj.contains(key)) {
            error(where, "missing required field \"" + key + "\"");
            return "";
        }
        if (!obj[key].is_string()) {
            error(where, "field \"" + key + "\" must be a string");
            return "";
        }
        return obj[key].get<std::string>();
    }

    std::string opt_string(const json& obj, const std::string& where, const std::string& key) {
        if (!obj.contains(key)) return "";
        if (!obj[key].is_string()) {
            error(where, "field \"" + key + "\" must be a string");
            return "";
        }
        return obj[key].get<std::string>();
    }

    bool opt_bool(const json& obj, const std::string& where, const std::string& key) {
        if (!obj.contains(key)) return false;
        if (!obj[key].is_boolean()) {
            error(where, "field \"" + key + "\" must be a boolean");
            return false;
        }
        return obj[key].get<bool>();
    }

    std::vector<std::string> opt_string_array(const json& obj, const std::string& where,
                                              const std::string& key) {
        std::vector<std::string> out;
        if (!obj.contains(key)) return out;
        if (!obj[key].is_array()) {
            error(where, "field \"" + key + "\" must be an array");
            return out;
        }
        for (const auto& v : obj[key]) {
            if (!v.is_string()) {
                error(where, "entries of \"" + key + "\" must be strings");
                return out;
            }
            out.push_back(v.get<std::string>());
        }
        return out;
    }

    Visibility opt_visibility(const json& obj, const std::string& where) {
        if (!obj.contains("visibility")) return Visibility::Public;
        const std::string s = obj["visibility"].is_string() ? obj["visibility"].get<std::string>() : "";
        auto v = visibility_from_string(s);
        if (!v) {
            error(where, "unknown visibility \"" + s + "\"");
            return Visibility::Public;
        }
        return *v;
    }

private:
    std::vector<ParseDiagnostic>& errors_;
    std::vector<ParseDiagnostic>* warnings_;
};

AttributeDecl read_attribute(DocReader& r, const json& a, const std::string& where) {
    AttributeDecl decl;
    r.check_keys(a, where, {"name", "type", "visibility"});
    decl.name = r.req_string(a, where, "name");
    decl.type_name = r.req_string(a, where, "type");
    decl.visibility = r.opt_visibility(a, where);
    if (decl.name.empty()) r.error(where, "attribute name must be non-empty");
    return decl;
}

OperationDecl read_operation(DocReader& r, const json& o, const std::string& where) {
    OperationDecl decl;
    r.check_keys(o, where, {"name", "returnType", "params", "visibility"});
    decl.name = r.req_string(o, where, "name");
    decl.return_type = r.opt_string(o, where, "returnType");
    decl.visibility = r.opt_visibility(o, where);
    if (decl.name.empty()) r.error(where, "operation name must be non-empty");
    if (o.contains("params")) {
        if (!o["params"].is_array()) {
            r.error(where, "\"params\" must be an array");
        } else {
            for (const auto& p : o["params"]) {
                const std::string pw = where + ".params";
                r.check_keys(p, pw, {"name", "type"});
                Param param;
                param.name = r.req_string(p, pw, "name");
                param.type_name = r.req_string(p, pw, "type");
                decl.params.push_back(std::move(param));
            }
        }
    }
    return decl;
}

AdviceDecl read_advice(DocReader& r, const json& a, const std::string& where) {
    AdviceDecl decl;
    r.check_keys(a, where, {"kind", "name", "pointcut", "returnType"});
    const std::string kind = r.req_string(a, where, "kind");
    auto k = advice_kind_from_string(kind);
    if (!k) {
        r.error(where, "unknown advice kind \"" + kind + "\"");
    } else {
        decl.kind = *k;
    }
    decl.name = r.req_string(a, where, "name");
    decl.pointcut = r.opt_string(a, where, "pointcut");
    decl.return_type = r.opt_string(a, where, "returnType");
    if (decl.kind != AdviceKind::Around && !decl.return_type.empty()) {
        r.warn(where, "returnType on a non-around advice dropped");
        decl.return_type.clear();
    }
    return decl;
}

Element read_element(DocReader& r, const json& e, const std::string& model_name) {
    Element elem;
    const std::string name = e.contains("name") && e["name"].is_string()
                                 ? e["name"].get<std::string>()
                                 : "";
    const std::string where = "element \"" + name + "\"";
    r.check_keys(e, where, {"kind", "name", "isAbstract", "stereotypes", "attributes",
                            "operations", "provides", "requires", "advices"});
    const std::string kind = r.req_string(e, where, "kind");
    auto k = element_kind_from_string(kind);
    if (!k) {
        r.error(where, "unknown element kind \"" + kind + "\"");
    } else {
        elem.kind = *k;
    }
    elem.name = r.req_string(e, where, "name");
    if (elem.name.empty()) r.error(where, "element name must be non-empty");
    elem.is_abstract = r.opt_bool(e, where, "isAbstract");
    elem.stereotypes = r.opt_string_array(e, where, "stereotypes");
    elem.provides = r.opt_string_array(e, where, "provides");
    elem.requires_ifaces = r.opt_string_array(e, where, "requires");
    if (e.contains("attributes")) {
        for (const auto& a : e["attributes"]) {
            elem.attributes.push_back(read_attribute(r, a, where + ".attributes"));
        }
    }
    if (e.contains("operations")) {
        for (const auto& o : e["operations"]) {
            elem.operations.push_back(read_operation(r, o, where + ".operations"));
        }
    }
    if (e.contains("advices")) {
        for (const auto& a : e["advices"]) {
            elem.advices.push_back(read_advice(r, a, where + ".advices"));
        }
    }

    if (elem.kind == ElementKind::Interface &&
        (!elem.provides.empty() || !elem.requires_ifaces.empty())) {
        r.error(where, "interfaces cannot carry provides/requires");
    }
    if (elem.kind != ElementKind::Aspect && !elem.advices.empty()) {
        r.error(where, "advices are only legal on aspects");
    }
    std::set<std::string> attr_names;
    for (const auto& a : elem.attributes) {
        if (!attr_names.insert(a.name).second) {
            r.error(where, "duplicate attribute name \"" + a.name + "\"");
        }
    }
    std::set<std::string> op_sigs;
    for (const auto& o : elem.operations) {
        if (!op_sigs.insert(o.signature()).second) {
            r.error(where, "duplicate operation signature \"" + o.signature() + "\"");
        }
    }

    // References in the document are model-qualified; store them locally.
    Model scope;
    scope.name = model_name;
    for (auto& p : elem.provides) p = local_ref(scope, p);
    for (auto& q : elem.requires_ifaces) q = local_ref(scope, q);
    return elem;
}

Relationship read_relationship(DocReader& r, const json& rel, const std::string& model_name,
                               std::size_t index) {
    Relationship out;
    const std::string where = "relationship #" + std::to_string(index);
    r.check_keys(rel, where, {"kind", "source", "target", "stereotypes"});
    const std::string kind = r.req_string(rel, where, "kind");
    auto k = relationship_kind_from_string(kind);
    if (!k) {
        r.error(where, "unknown relationship kind \"" + kind + "\"");
    } else {
        out.kind = *k;
    }
    out.source = r.req_string(rel, where, "source");
    out.target = r.req_string(rel, where, "target");
    out.stereotypes = r.opt_string_array(rel, where, "stereotypes");
    if (out.source.empty()) r.error(where, "source must be non-empty");
    if (out.target.empty()) r.error(where, "target must be non-empty");
    Model scope;
    scope.name = model_name;
    out.source = local_ref(scope, out.source);
    out.target = local_ref(scope, out.target);
    return out;
}

Interaction read_interaction(DocReader& r, const json& i, const std::string& model_name) {
    Interaction out;
    const std::string name = i.contains("name") && i["name"].is_string()
                                 ? i["name"].get<std::string>()
                                 : "";
    const std::string where = "interaction \"" + name + "\"";
    r.check_keys(i, where, {"name", "lifelines", "messages"});
    out.name = r.req_string(i, where, "name");
    Model scope;
    scope.name = model_name;
    std::set<std::string> ids;
    if (i.contains("lifelines")) {
        for (const auto& l : i["lifelines"]) {
            const std::string lw = where + ".lifelines";
            r.check_keys(l, lw, {"id", "name", "classifier"});
            Lifeline ll;
            ll.id = r.req_string(l, lw, "id");
            ll.name = r.opt_string(l, lw, "name");
            ll.classifier = local_ref(scope, r.req_string(l, lw, "classifier"));
            if (!ids.insert(ll.id).second) {
                r.error(where, "duplicate lifeline id \"" + ll.id + "\"");
            }
            out.lifelines.push_back(std::move(ll));
        }
    }
    if (i.contains("messages")) {
        for (const auto& m : i["messages"]) {
            const std::string mw = where + ".messages";
            r.check_keys(m, mw, {"name", "from", "to", "returnType"});
            MessageDecl msg;
            msg.name = m.contains("name") && m["name"].is_string() ? m["name"].get<std::string>()
                                                                   : "";
            msg.from = r.req_string(m, mw, "from");
            msg.to = r.req_string(m, mw, "to");
            msg.return_type = r.opt_string(m, mw, "returnType");
            if (!ids.count(msg.from)) {
                r.error(where, "message references unknown lifeline id \"" + msg.from + "\"");
            }
            if (!ids.count(msg.to)) {
                r.error(where, "message references unknown lifeline id \"" + msg.to + "\"");
            }
            out.messages.push_back(std::move(msg));
        }
    }
    return out;
}

json write_element(const Model& m, const Element& e) {
    json out;
    out["kind"] = to_string(e.kind);
    out["name"] = e.name;
    if (e.is_abstract) out["isAbstract"] = true;
    if (!e.stereotypes.empty()) out["stereotypes"] = e.stereotypes;
    if (!e.attributes.empty()) {
        json arr = json::array();
        for (const auto& a : e.attributes) {
            json ja;
            ja["name"] = a.name;
            ja["type"] = a.type_name;
            ja["visibility"] = to_string(a.visibility);
            arr.push_back(std::move(ja));
        }
        out["attributes"] = std::move(arr);
    }
    if (!e.operations.empty()) {
        json arr = json::array();
        for (const auto& o : e.operations) {
            json jo;
            jo["name"] = o.name;
            jo["returnType"] = o.return_type;
            if (!o.params.empty()) {
                json jp = json::array();
                for (const auto& p : o.params) {
                    jp.push_back(json{{"name", p.name}, {"type", p.type_name}});
                }
                jo["params"] = std::move(jp);
            }
            jo["visibility"] = to_string(o.visibility);
            arr.push_back(std::move(jo));
        }
        out["operations"] = std::move(arr);
    }
    auto qualify = [&m](const std::string& ref) {
        return ref.find("::") == std::string::npos ? m.name + "::" + ref : ref;
    };
    if (!e.provides.empty()) {
        json arr = json::array();
        for (const auto& p : e.provides) arr.push_back(qualify(p));
        out["provides"] = std::move(arr);
    }
    if (!e.requires_ifaces.empty()) {
        json arr = json::array();
        for (const auto& q : e.requires_ifaces) arr.push_back(qualify(q));
        out["requires"] = std::move(arr);
    }
    if (!e.advices.empty()) {
        json arr = json::array();
        for (const auto& a : e.advices) {
            json ja;
            ja["kind"] = to_string(a.kind);
            ja["name"] = a.name;
            ja["pointcut"] = a.pointcut;
            if (!a.return_type.empty()) ja["returnType"] = a.return_type;
            arr.push_back(std::move(ja));
        }
        out["advices"] = std::move(arr);
    }
    return out;
}

}  // namespace

std::string format_diagnostic(const ParseDiagnostic& d) {
    std::ostringstream os;
    os << (d.severity == Severity::Error ? "error" : "warning");
    if (d.line > 0) os << " at " << d.line << ":" << d.column;
    os << ": " << d.message;
    return os.str();
}

ParseError::ParseError(std::vector<ParseDiagnostic> diags)
    : std::runtime_error(diags.empty() ? "parse error" : format_diagnostic(diags.front())),
      diags_(std::move(diags)) {}

Model parse_model(const std::string& text, std::vector<ParseDiagnostic>* warnings) {
    std::vector<ParseDiagnostic> errors;

    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = line_col_at(text, e.byte > 0 ? e.byte - 1 : 0);
        errors.push_back({Severity::Error, line, col, e.what()});
        throw ParseError(std::move(errors));
    }

    DocReader r(errors, warnings);
    if (!doc.is_object()) {
        r.error("document", "top level must be an object");
        throw ParseError(std::move(errors));
    }
    r.check_keys(doc, "document",
                 {"dmf", "model", "kind", "elements", "relationships", "interactions"});
    if (!doc.contains("dmf") || !doc["dmf"].is_number_integer() ||
        doc["dmf"].get<int>() != 1) {
        r.error("document", "missing or unsupported \"dmf\" version (expected 1)");
        throw ParseError(std::move(errors));
    }

    Model m;
    m.name = r.req_string(doc, "document", "model");
    const std::string kind = r.req_string(doc, "document", "kind");
    auto mk = model_kind_from_string(kind);
    if (!mk) {
        r.error("document", "unknown model kind \"" + kind + "\"");
    } else {
        m.kind = *mk;
    }

    if (doc.contains("elements")) {
        if (!doc["elements"].is_array()) {
            r.error("document", "\"elements\" must be an array");
        } else {
            for (const auto& e : doc["elements"]) {
                m.elements.push_back(read_element(r, e, m.name));
            }
        }
    }
    if (doc.contains("relationships")) {
        if (!doc["relationships"].is_array()) {
            r.error("document", "\"relationships\" must be an array");
        } else {
            std::size_t idx = 0;
            for (const auto& rel : doc["relationships"]) {
                m.relationships.push_back(read_relationship(r, rel, m.name, idx++));
            }
        }
    }
    if (doc.contains("interactions")) {
        if (!doc["interactions"].is_array()) {
            r.error("document", "\"interactions\" must be an array");
        } else {
            for (const auto& i : doc["interactions"]) {
                m.interactions.push_back(read_interaction(r, i, m.name));
            }
        }
    }

    std::set<std::string> names;
    for (const auto& e : m.elements) {
        if (!names.insert(e.name).second) {
            r.error("document", "duplicate qualified name \"" + m.name + "::" + e.name + "\"");
        }
    }

    if (!errors.empty()) throw ParseError(std::move(errors));
    return normalize(std::move(m));
}

std::string serialize_model(const Model& model) {
    const Model m = normalize(model);
    json doc;
    doc["dmf"] = 1;
    doc["model"] = m.name;
    doc["kind"] = to_string(m.kind);

    json elements = json::array();
    for (const auto& e : m.elements) elements.push_back(write_element(m, e));
    doc["elements"] = std::move(elements);

    json rels = json::array();
    for (const auto& rel : m.relationships) {
        json jr;
        jr["kind"] = to_string(rel.kind);
        auto qualify = [&m](const std::string& ref) {
            return ref.find("::") == std::string::npos ? m.name + "::" + ref : ref;
        };
        jr["source"] = qualify(rel.source);
        jr["target"] = qualify(rel.target);
        if (!rel.stereotypes.empty()) jr["stereotypes"] = rel.stereotypes;
        rels.push_back(std::move(jr));
    }
    doc["relationships"] = std::move(rels);

    json interactions = json::array();
    for (const auto& i : m.interactions) {
        json ji;
        ji["name"] = i.name;
        json lls = json::array();
        auto qualify = [&m](const std::string& ref) {
            return ref.find("::") == std::string::npos ? m.name + "::" + ref : ref;
        };
        for (const auto& l : i.lifelines) {
            json jl;
            jl["id"] = l.id;
            jl["name"] = l.name;
            jl["classifier"] = qualify(l.classifier);
            lls.push_back(std::move(jl));
        }
        ji["lifelines"] = std::move(lls);
        json msgs = json::array();
        for (const auto& msg : i.messages) {
            json jm;
            jm["name"] = msg.name;
            jm["from"] = msg.from;
            jm["to"] = msg.to;
            if (!msg.return_type.empty()) jm["returnType"] = msg.return_type;
            msgs.push_back(std::move(jm));
        }
        ji["messages"] = std::move(msgs);
        interactions.push_back(std::move(ji));
    }
    doc["interactions"] = std::move(interactions);

    return doc.dump(2) + "\n";
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError({{Severity::Error, 0, 0, "cannot open \"" + path + "\""}});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

void save_model_file(const Model& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << serialize_model(m);
}

}  // namespace dmc
