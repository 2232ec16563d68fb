#include "mixflow/json_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mixflow {

using nlohmann::json;
using nlohmann::ordered_json;

std::string volume_to_string(const Volume& v) {
    Rational r = v.amount();
    std::int64_t den = r.den();
    int twos = 0, fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    int digits = std::max(twos, fives);
    if (den != 1 || digits > 12) return r.str(); // not a finite decimal
    if (digits == 0) return std::to_string(r.num());

    __int128 scaled = r.num();
    for (int i = 0; i < digits; ++i) scaled *= 10;
    scaled /= r.den();
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string raw;
    while (scaled > 0) {
        raw.insert(raw.begin(), char('0' + int(scaled % 10)));
        scaled /= 10;
    }
    while (static_cast<int>(raw.size()) <= digits) raw.insert(raw.begin(), '0');
    std::string out = raw.substr(0, raw.size() - digits) + "." + raw.substr(raw.size() - digits);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
    return neg ? "-" + out : out;
}

namespace {

ordered_json composition_to_json(const Composition& c) {
    ordered_json out = ordered_json::object();
    for (const auto& [reagent, vol] : c.parts()) out[reagent] = volume_to_string(Volume(vol));
    return out;
}

Composition composition_from_json(const json& j) {
    Composition c;
    for (auto it = j.begin(); it != j.end(); ++it) {
        c.add(it.key(), Rational::parse(it.value().get<std::string>()));
    }
    return c;
}

ordered_json architecture_to_json(const ArchitectureSpec& arch) {
    ordered_json a;
    a["unit"] = arch.unit;
    a["htr"] = volume_to_string(arch.htr);
    ordered_json classes = ordered_json::array();
    for (const auto& cls : arch.ffu_classes) {
        ordered_json c;
        c["name"] = cls.name;
        c["mhc"] = volume_to_string(cls.mhc);
        c["mvr"] = volume_to_string(cls.mvr);
        c["chambers"] = cls.chamber_count;
        classes.push_back(c);
    }
    a["ffu_classes"] = classes;
    a["mixer_technology"] = to_string(arch.mixer_technology);
    return a;
}

ordered_json application_to_json(const ApplicationGraph& app) {
    ordered_json a;
    if (!app.inputs.empty()) {
        ordered_json ins = ordered_json::object();
        for (const auto& [id, reagent] : app.inputs) ins[id] = reagent;
        a["inputs"] = ins;
    }
    ordered_json nodes = ordered_json::array();
    for (const auto& n : app.nodes) {
        ordered_json nj;
        nj["id"] = n.id;
        nj["kind"] = to_string(n.kind);
        nj["ffu_class"] = n.ffu_class;
        if (n.fva) {
            ordered_json fva = ordered_json::object();
            for (const auto& [from, vol] : *n.fva) fva[from] = volume_to_string(vol);
            nj["fva"] = fva;
            nj["x"] = n.scale_factor;
            nj["replication_factor"] = n.replication_factor;
        } else if (n.replication_factor != 1) {
            nj["replication_factor"] = n.replication_factor;
        }
        if (n.waste_sink) nj["waste_sink"] = true;
        nodes.push_back(nj);
    }
    a["nodes"] = nodes;
    ordered_json edges = ordered_json::array();
    for (const auto& e : app.edges) {
        ordered_json ej;
        ej["from"] = e.from;
        ej["to"] = e.to;
        if (e.ratio) ej["ratio"] = e.ratio->str();
        if (e.required_volume) ej["required_volume"] = volume_to_string(*e.required_volume);
        if (e.lof) {
            ej["lof"] = true;
            if (e.lof_composition) ej["composition"] = composition_to_json(*e.lof_composition);
        }
        edges.push_back(ej);
    }
    a["edges"] = edges;
    return a;
}

ArchitectureSpec architecture_from_json(const json& a) {
    ArchitectureSpec arch;
    arch.unit = a.value("unit", std::string("nl"));
    arch.htr = Volume(Rational::parse(a.at("htr").get<std::string>()));
    for (const auto& c : a.at("ffu_classes")) {
        FfuClass cls;
        cls.name = c.at("name").get<std::string>();
        cls.mhc = Volume(Rational::parse(c.at("mhc").get<std::string>()));
        cls.mvr = Volume(Rational::parse(c.value("mvr", std::string("0"))));
        cls.chamber_count = c.value("chambers", 1);
        arch.ffu_classes.push_back(cls);
    }
    arch.mixer_technology =
        mixer_technology_from_string(a.value("mixer_technology", std::string("arbitrary_ratio")));
    return arch;
}

ApplicationGraph application_from_json(const json& a) {
    ApplicationGraph app;
    if (a.contains("inputs")) {
        for (auto it = a["inputs"].begin(); it != a["inputs"].end(); ++it) {
            app.inputs[it.key()] = it.value().get<std::string>();
        }
    }
    for (const auto& nj : a.at("nodes")) {
        OpNode n;
        n.id = nj.at("id").get<std::string>();
        n.kind = op_kind_from_string(nj.at("kind").get<std::string>());
        n.ffu_class = nj.at("ffu_class").get<std::string>();
        if (nj.contains("fva")) {
            std::map<std::string, Volume> fva;
            for (auto it = nj["fva"].begin(); it != nj["fva"].end(); ++it) {
                fva[it.key()] = Volume(Rational::parse(it.value().get<std::string>()));
            }
            n.fva = fva;
            n.scale_factor = nj.value("x", 0);
        }
        n.replication_factor = nj.value("replication_factor", 1);
        n.waste_sink = nj.value("waste_sink", false);
        app.nodes.push_back(n);
    }
    for (const auto& ej : a.at("edges")) {
        FlowEdge e;
        e.from = ej.at("from").get<std::string>();
        e.to = ej.at("to").get<std::string>();
        if (ej.contains("ratio")) e.ratio = Rational::parse(ej["ratio"].get<std::string>());
        if (ej.contains("required_volume")) {
            e.required_volume = Volume(Rational::parse(ej["required_volume"].get<std::string>()));
        }
        if (ej.contains("lof")) {
            e.lof = ej["lof"].get<bool>();
            if (ej.contains("composition")) e.lof_composition = composition_from_json(ej["composition"]);
        }
        app.edges.push_back(e);
    }
    return app;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

} // namespace

std::string serialize_architecture(const ArchitectureSpec& arch, int indent) {
    ordered_json doc;
    doc["architecture"] = architecture_to_json(arch);
    return doc.dump(indent);
}

std::string serialize_application(const ApplicationGraph& app, int indent) {
    ordered_json doc;
    doc["application"] = application_to_json(app);
    return doc.dump(indent);
}

std::string serialize_document(const ApplicationGraph& app, const ArchitectureSpec& arch,
                               int indent) {
    ordered_json doc;
    doc["architecture"] = architecture_to_json(arch);
    doc["application"] = application_to_json(app);
    return doc.dump(indent);
}

std::string serialize_optimized_document(const ApplicationGraph& app,
                                         const ArchitectureSpec& arch,
                                         const std::map<std::string, Rational>& savings,
                                         int indent) {
    ordered_json doc;
    doc["architecture"] = architecture_to_json(arch);
    doc["application"] = application_to_json(app);
    ordered_json lof_edges = ordered_json::array();
    for (const auto& e : app.edges) {
        if (!e.lof) continue;
        ordered_json ej;
        ej["from"] = e.from;
        ej["to"] = e.to;
        if (e.required_volume) ej["volume"] = volume_to_string(*e.required_volume);
        if (e.lof_composition) ej["composition"] = composition_to_json(*e.lof_composition);
        lof_edges.push_back(ej);
    }
    doc["lof_edges"] = lof_edges;
    ordered_json sav = ordered_json::object();
    for (const auto& [reagent, v] : savings) sav[reagent] = volume_to_string(Volume(v));
    doc["savings"] = sav;
    return doc.dump(indent);
}

ArchitectureSpec parse_architecture(const std::string& json_text) {
    json doc = parse_text(json_text);
    if (!doc.contains("architecture")) throw ParseError("missing 'architecture' key");
    try {
        return architecture_from_json(doc["architecture"]);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad architecture document: ") + e.what());
    }
}

ApplicationGraph parse_application(const std::string& json_text) {
    json doc = parse_text(json_text);
    if (!doc.contains("application")) throw ParseError("missing 'application' key");
    try {
        return application_from_json(doc["application"]);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad application document: ") + e.what());
    }
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

ArchitectureSpec load_architecture_file(const std::string& path) {
    return parse_architecture(read_file(path));
}

ApplicationGraph load_application_file(const std::string& path) {
    return parse_application(read_file(path));
}

} // namespace mixflow
