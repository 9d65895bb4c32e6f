#pragma once

#include "udgembed/den.hpp"
#include "udgembed/errors.hpp"
#include "udgembed/feasibility.hpp"
#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/lattice.hpp"
#include "udgembed/types.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace udg {

using json = nlohmann::json;

namespace io_detail {

inline json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace io_detail

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Write-then-rename so concurrent readers never observe a partial document.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw MalformedInputError("cannot write file: " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

// ---- graphs -----------------------------------------------------------

// Edge-list document. JSON form: {"n": 3, "edges": [[0,1],[1,2]]}.
// Line form: a header "n <count>" followed by "u v" lines; '#' starts a
// comment. The parser sniffs the format from the first non-space character.
inline Graph parse_graph(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw MalformedInputError("empty graph document");

    if (text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw MalformedInputError(std::string("bad graph JSON: ") + e.what());
        }
        if (!doc.contains("n") || !doc["n"].is_number_integer())
            throw MalformedInputError("graph document missing integer field 'n'");
        const int n = doc["n"].get<int>();
        std::vector<std::pair<int, int>> edges;
        if (doc.contains("edges")) {
            if (!doc["edges"].is_array()) throw MalformedInputError("'edges' must be an array");
            for (const json& e : doc["edges"]) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
                    throw MalformedInputError("each edge must be a 2-element integer array");
                edges.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
        }
        return Graph(n, edges);
    }

    std::istringstream in(text);
    std::string line;
    std::optional<int> n;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (!n) {
            std::string tag;
            int count = 0;
            if (!(ls >> tag)) continue; // blank line before header
            if (tag != "n" || !(ls >> count)) throw MalformedInputError("expected header line 'n <count>'");
            n = count;
            continue;
        }
        int u = 0, v = 0;
        if (!(ls >> u)) continue; // blank line
        if (!(ls >> v)) throw MalformedInputError("edge line must contain two vertex ids");
        edges.emplace_back(u, v);
    }
    if (!n) throw MalformedInputError("missing header line 'n <count>'");
    return Graph(*n, edges);
}

inline Graph load_graph(const std::filesystem::path& path) { return parse_graph(read_text_file(path)); }

inline json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
    return json{{"n", g.n()}, {"edges", std::move(edges)}};
}

// ---- embeddings -------------------------------------------------------

// Embedding document: an ordered JSON array of [x, y] pairs in micrometers.
inline Embedding parse_embedding(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw MalformedInputError(std::string("bad embedding JSON: ") + e.what());
    }
    if (!doc.is_array()) throw MalformedInputError("embedding document must be a JSON array");
    Embedding out;
    out.reserve(doc.size());
    for (const json& c : doc) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
            throw MalformedInputError("each coordinate must be a 2-element numeric array");
        out.push_back({c[0].get<double>(), c[1].get<double>()});
        if (!std::isfinite(out.back().x) || !std::isfinite(out.back().y))
            throw MalformedInputError("coordinates must be finite");
    }
    return out;
}

inline Embedding load_embedding(const std::filesystem::path& path) {
    return parse_embedding(read_text_file(path));
}

inline json embedding_to_json(const Embedding& e) {
    json arr = json::array();
    for (const Vec2& c : e) arr.push_back(json::array({c.x, c.y}));
    return arr;
}

// ---- trap lattices ----------------------------------------------------

// Lattice document: {"spacing": 5.0, "traps": [[x,y],...]}; a bare array is
// accepted with the spacing inferred as the minimum pairwise distance.
inline TrapLattice parse_lattice(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw MalformedInputError(std::string("bad lattice JSON: ") + e.what());
    }
    TrapLattice lattice;
    const json* arr = nullptr;
    if (doc.is_array()) {
        arr = &doc;
    } else if (doc.is_object() && doc.contains("traps")) {
        arr = &doc["traps"];
        if (doc.contains("spacing") && doc["spacing"].is_number())
            lattice.spacing = doc["spacing"].get<double>();
    } else {
        throw MalformedInputError("lattice document must be an array or contain 'traps'");
    }
    for (const json& c : *arr) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
            throw MalformedInputError("each trap must be a 2-element numeric array");
        lattice.traps.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    if (lattice.traps.empty()) throw MalformedInputError("lattice has no traps");
    if (lattice.spacing <= 0.0) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < lattice.traps.size(); ++i)
            for (std::size_t j = i + 1; j < lattice.traps.size(); ++j)
                best = std::min(best, distance(lattice.traps[i], lattice.traps[j]));
        lattice.spacing = std::isfinite(best) ? best : 0.0;
    }
    return lattice;
}

inline json lattice_to_json(const TrapLattice& t) {
    json traps = json::array();
    for (const Vec2& c : t.traps) traps.push_back(json::array({c.x, c.y}));
    return json{{"spacing", t.spacing}, {"traps", std::move(traps)}};
}

// ---- register profiles ------------------------------------------------

inline json profile_to_json(const RegisterProfile& p) {
    json doc{{"name", p.name},
             {"r_b", p.r_b},
             {"d_min", p.d_min},
             {"coord_bound", p.coord_bound},
             {"capacity", p.capacity}};
    if (p.d_max) doc["d_max"] = *p.d_max;
    if (p.row_spacing) doc["row_spacing"] = *p.row_spacing;
    if (const auto* rect = p.rectangle()) {
        doc["shape"] = json{{"type", "rectangle"}, {"width", rect->width}, {"height", rect->height}};
    } else {
        doc["shape"] = json{{"type", "lattice"}, {"lattice", lattice_to_json(*p.lattice())}};
    }
    return doc;
}

inline RegisterProfile parse_profile(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw MalformedInputError(std::string("bad profile JSON: ") + e.what());
    }
    RegisterProfile p;
    p.name = doc.value("name", "custom");
    if (!doc.contains("shape") || !doc["shape"].is_object())
        throw MalformedInputError("profile document missing 'shape'");
    const json& shape = doc["shape"];
    const std::string type = shape.value("type", "");
    if (type == "rectangle") {
        p.shape = RectangleShape{shape.value("width", 0.0), shape.value("height", 0.0)};
    } else if (type == "lattice") {
        p.shape = parse_lattice(shape.value("lattice", json::array()).dump());
    } else {
        throw MalformedInputError("profile shape type must be 'rectangle' or 'lattice'");
    }
    p.r_b = doc.value("r_b", 10.26);
    p.d_min = doc.value("d_min", 0.0);
    if (doc.contains("d_max")) p.d_max = doc["d_max"].get<double>();
    if (doc.contains("row_spacing")) p.row_spacing = doc["row_spacing"].get<double>();
    p.coord_bound = doc.value("coord_bound", 0.0);
    p.capacity = doc.value("capacity", 0);
    if (p.capacity == 0 && p.lattice()) p.capacity = static_cast<int>(p.lattice()->traps.size());
    validate_profile(p);
    return p;
}

inline RegisterProfile load_profile(const std::filesystem::path& path) {
    return parse_profile(read_text_file(path));
}

// ---- reports ----------------------------------------------------------

inline json feasibility_report_to_json(const FeasibilityReport& r) {
    json violations = json::array();
    for (const Violation& v : r.violations) {
        const char* kind = "";
        switch (v.kind) {
        case ViolationKind::min_distance: kind = "min_distance"; break;
        case ViolationKind::max_distance: kind = "max_distance"; break;
        case ViolationKind::adjacent_too_far: kind = "adjacent_too_far"; break;
        case ViolationKind::nonadjacent_too_close: kind = "nonadjacent_too_close"; break;
        case ViolationKind::row_spacing: kind = "row_spacing"; break;
        case ViolationKind::out_of_register: kind = "out_of_register"; break;
        }
        violations.push_back(json{{"pair", json::array({v.i, v.j})}, {"kind", kind}, {"value", v.value}});
    }
    return json{{"d_adj_max", io_detail::finite_or_null(r.d_adj_max)},
                {"d_nonadj_min", io_detail::finite_or_null(r.d_nonadj_min)},
                {"gap", io_detail::finite_or_null(r.gap)},
                {"min_pair_distance", io_detail::finite_or_null(r.min_pair_distance)},
                {"hardware_feasible", r.hardware_feasible},
                {"udg_feasible", r.udg_feasible},
                {"row_feasible", r.row_feasible},
                {"violations", std::move(violations)}};
}

inline json train_report_to_json(const TrainReport& r, const TrainConfig& tc) {
    return json{{"coords", embedding_to_json(r.final_embedding)},
                {"loss", r.final_loss},
                {"component_losses",
                 json{{"elf_min", r.component_losses.elf_min},
                      {"elf_max", r.component_losses.elf_max},
                      {"elf_row", r.component_losses.elf_row}}},
                {"iterations", r.iterations_used},
                {"attempts", r.attempts_used},
                {"feasible", r.feasible},
                {"check", feasibility_report_to_json(r.final_check)},
                {"loss_trace", r.loss_trace},
                {"config", json{{"learning_rate", tc.learning_rate},
                                {"weight_decay", tc.weight_decay},
                                {"max_iterations", tc.max_iterations},
                                {"feasibility_check_period", tc.feasibility_check_period},
                                {"restarts", tc.restarts},
                                {"rng_seed", tc.rng_seed},
                                {"loss_tolerance", tc.loss_tolerance}}}};
}

} // namespace udg
