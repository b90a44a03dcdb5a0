#include "rlift/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rlift/error.hpp"

namespace rlift {

using nlohmann::json;

BaseGraph read_base_graph_text(std::istream& in) {
    int h = 0, m = 0;
    if (!(in >> h >> m) || h <= 0 || m < 0) throw Error(ErrorCode::ParseError, "expected header 'h m'");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (int k = 0; k < m; ++k) {
        int u, v;
        if (!(in >> u >> v)) throw Error(ErrorCode::ParseError, "expected " + std::to_string(m) + " edge lines");
        edges.emplace_back(u, v);
    }
    return make_base_graph(h, edges);
}

BaseGraph read_base_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    return read_base_graph_text(in);
}

void write_base_graph_text(std::ostream& out, const BaseGraph& g) {
    out << g.h() << ' ' << g.edges().size() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

static std::string edge_key(const Edge& e) { return std::to_string(e.u) + "-" + std::to_string(e.v); }

std::string lift_to_json(const Lift& lift) {
    json j;
    json edges = json::array();
    for (const Edge& e : lift.base().edges()) edges.push_back({e.u, e.v});
    j["base"] = {{"h", lift.h()}, {"edges", edges}};
    j["n"] = lift.n();
    json perms = json::object();
    for (std::size_t k = 0; k < lift.base().edges().size(); ++k)
        perms[edge_key(lift.base().edges()[k])] = lift.perm(static_cast<int>(k));
    j["perms"] = perms;
    return j.dump();
}

Lift lift_from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("base").at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        BaseGraph base = make_base_graph(j.at("base").at("h").get<int>(), edges);
        int n = j.at("n").get<int>();
        std::vector<std::vector<int>> perms;
        for (const Edge& e : base.edges()) perms.push_back(j.at("perms").at(edge_key(e)).get<std::vector<int>>());
        return Lift(std::move(base), n, std::move(perms));
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("lift JSON: ") + ex.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

void save_lift(const std::string& path, const Lift& lift) { write_text_file(path, lift_to_json(lift) + "\n"); }

Lift load_lift(const std::string& path) { return lift_from_json(read_text_file(path)); }

}  // namespace rlift
