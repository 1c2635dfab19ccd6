#include "gifs/system_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gifs {

using nlohmann::json;

namespace {

Rational parse_field(const json& j, const std::string& what) {
    if (!j.is_string()) throw SystemIoError(what + ": rational values must be strings like \"a/b\"");
    try {
        return rational_parse(j.get<std::string>());
    } catch (const ParseError& e) {
        throw SystemIoError(what + ": " + e.what());
    }
}

}  // namespace

GraphIFS parse_system_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SystemIoError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SystemIoError("top level must be an object");
    if (j.value("version", 0) != 1) throw SystemIoError("unsupported or missing version (expect 1)");

    GraphIFS g;
    g.ambient_dim = j.value("dimension", 1);
    if (g.ambient_dim != 1 && g.ambient_dim != 2)
        throw SystemIoError("dimension must be 1 or 2");

    if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
        throw SystemIoError("vertices must be a nonempty array of ids");
    for (const auto& v : j["vertices"]) {
        if (!v.is_string()) throw SystemIoError("vertex ids must be strings");
        g.vertices.push_back(v.get<std::string>());
    }

    if (!j.contains("edges") || !j["edges"].is_array())
        throw SystemIoError("edges must be an array");
    for (const auto& je : j["edges"]) {
        Edge e;
        if (!je.contains("id") || !je["id"].is_string())
            throw SystemIoError("edge id must be a string");
        e.id = je["id"].get<std::string>();
        auto vertex_of = [&](const char* key) {
            if (!je.contains(key) || !je[key].is_string())
                throw SystemIoError("edge '" + e.id + "': missing vertex field '" + key + "'");
            int idx = g.vertex_index(je[key].get<std::string>());
            if (idx < 0)
                throw SystemIoError("edge '" + e.id + "': unknown vertex '" +
                                    je[key].get<std::string>() + "'");
            return idx;
        };
        e.from = vertex_of("from");
        e.to = vertex_of("to");
        e.ratio = parse_field(je.at("ratio"), "edge '" + e.id + "' ratio");
        e.prob = parse_field(je.at("prob"), "edge '" + e.id + "' prob");

        e.map.dim = g.ambient_dim;
        e.map.scale = e.ratio;  // ratio doubles as the map scale, cross-checked in validate()
        if (je.contains("map")) {
            const json& jm = je["map"];
            if (jm.contains("reflect") && jm["reflect"].is_boolean() && jm["reflect"].get<bool>()) {
                if (g.ambient_dim == 1)
                    e.map.sign = -1;
                else
                    e.map.reflect = true;
            }
            if (jm.contains("rotate_deg")) {
                if (g.ambient_dim != 2)
                    throw SystemIoError("edge '" + e.id + "': rotate_deg needs dimension 2");
                e.map.angle_deg = parse_field(jm["rotate_deg"], "edge '" + e.id + "' rotate_deg");
            }
            if (!jm.contains("translate") || !jm["translate"].is_array() ||
                static_cast<int>(jm["translate"].size()) != g.ambient_dim)
                throw SystemIoError("edge '" + e.id + "': translate must list " +
                                    std::to_string(g.ambient_dim) + " rationals");
            for (const auto& t : jm["translate"])
                e.map.translate.push_back(parse_field(t, "edge '" + e.id + "' translate"));
        } else {
            throw SystemIoError("edge '" + e.id + "': missing map");
        }
        g.edges.push_back(std::move(e));
    }

    g.open_sets.resize(g.vertices.size());
    if (j.contains("open_sets")) {
        if (!j["open_sets"].is_object()) throw SystemIoError("open_sets must be an object");
        for (const auto& [name, jb] : j["open_sets"].items()) {
            int u = g.vertex_index(name);
            if (u < 0) throw SystemIoError("open_sets: unknown vertex '" + name + "'");
            RationalBox box;
            if (!jb.contains("lo") || !jb.contains("hi") || !jb["lo"].is_array() ||
                !jb["hi"].is_array() ||
                static_cast<int>(jb["lo"].size()) != g.ambient_dim ||
                static_cast<int>(jb["hi"].size()) != g.ambient_dim)
                throw SystemIoError("open_sets." + name + ": lo/hi must list " +
                                    std::to_string(g.ambient_dim) + " rationals");
            for (const auto& v : jb["lo"]) box.lo.push_back(parse_field(v, "open_sets." + name));
            for (const auto& v : jb["hi"]) box.hi.push_back(parse_field(v, "open_sets." + name));
            g.open_sets[u] = std::move(box);
        }
    }

    g.index();
    return g;
}

GraphIFS parse_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SystemIoError("cannot open system file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system_text(buf.str());
}

std::string system_to_json(const GraphIFS& g) {
    json j;
    j["version"] = 1;
    j["dimension"] = g.ambient_dim;
    j["vertices"] = g.vertices;
    j["edges"] = json::array();
    for (const auto& e : g.edges) {
        json je;
        je["id"] = e.id;
        je["from"] = g.vertices[e.from];
        je["to"] = g.vertices[e.to];
        je["ratio"] = rational_str(e.ratio);
        je["prob"] = rational_str(e.prob);
        json jm;
        jm["translate"] = json::array();
        for (const auto& t : e.map.translate) jm["translate"].push_back(rational_str(t));
        if (g.ambient_dim == 1 ? e.map.sign < 0 : e.map.reflect) jm["reflect"] = true;
        if (g.ambient_dim == 2 && e.map.angle_deg != 0)
            jm["rotate_deg"] = rational_str(e.map.angle_deg);
        je["map"] = std::move(jm);
        j["edges"].push_back(std::move(je));
    }
    json jo = json::object();
    for (int u = 0; u < g.vertex_count(); ++u) {
        if (u >= static_cast<int>(g.open_sets.size()) || !g.open_sets[u]) continue;
        json jb;
        jb["lo"] = json::array();
        jb["hi"] = json::array();
        for (const auto& v : g.open_sets[u]->lo) jb["lo"].push_back(rational_str(v));
        for (const auto& v : g.open_sets[u]->hi) jb["hi"].push_back(rational_str(v));
        jo[g.vertices[u]] = std::move(jb);
    }
    if (!jo.empty()) j["open_sets"] = std::move(jo);
    return j.dump(2) + "\n";
}

}  // namespace gifs
