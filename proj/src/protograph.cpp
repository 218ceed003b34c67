#include "scldpc/protograph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace scldpc {

Protograph::Protograph(std::string name, int num_checks, int num_vars)
    : name_(std::move(name)), num_checks_(num_checks), num_vars_(num_vars),
      check_deg_(num_checks, 0), var_deg_(num_vars, 0) {
    if (num_checks < 1 || num_vars < 1)
        throw std::invalid_argument("protograph needs at least one check and one variable class");
}

void Protograph::add_edge(int check, int var, int mult) {
    if (check < 0 || check >= num_checks_ || var < 0 || var >= num_vars_)
        throw std::invalid_argument("edge endpoint out of range");
    if (mult < 1) throw std::invalid_argument("edge multiplicity must be positive");
    edges_[{check, var}] += mult;
    check_deg_[check] += mult;
    var_deg_[var] += mult;
}

int Protograph::multiplicity(int check, int var) const {
    auto it = edges_.find({check, var});
    return it == edges_.end() ? 0 : it->second;
}

std::vector<ProtoEdge> Protograph::edges() const {
    std::vector<ProtoEdge> out;
    out.reserve(edges_.size());
    for (const auto& [cv, m] : edges_) out.push_back({cv.first, cv.second, m});
    return out;
}

int Protograph::num_edge_slots() const {
    int n = 0;
    for (const auto& [cv, m] : edges_) n += m;
    return n;
}

int Protograph::check_degree(int check) const { return check_deg_.at(check); }
int Protograph::var_degree(int var) const { return var_deg_.at(var); }

void Protograph::set_punctured(int var) {
    if (var < 0 || var >= num_vars_) throw std::invalid_argument("punctured index out of range");
    punctured_.insert(var);
}

bool Protograph::is_punctured(int var) const { return punctured_.count(var) != 0; }

void Protograph::set_position(int var, NodePosition pos) {
    if (var < 0 || var >= num_vars_) throw std::invalid_argument("position index out of range");
    positions_[var] = pos;
}

std::optional<NodePosition> Protograph::position(int var) const {
    auto it = positions_.find(var);
    if (it == positions_.end()) return std::nullopt;
    return it->second;
}

bool operator==(const Protograph& a, const Protograph& b) {
    return a.name_ == b.name_ && a.num_checks_ == b.num_checks_ && a.num_vars_ == b.num_vars_ &&
           a.edges_ == b.edges_ && a.punctured_ == b.punctured_ && a.positions_ == b.positions_;
}

DesignRate design_rate(const Protograph& pg) {
    long long num = pg.num_vars() - pg.num_checks();
    long long den = pg.num_vars() - static_cast<long long>(pg.punctured().size());
    if (den <= 0) throw std::invalid_argument("no transmitted variable classes");
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 0) { num /= g; den /= g; }
    return {num, den, static_cast<double>(num) / static_cast<double>(den)};
}

ValidationReport validate(const Protograph& pg) {
    ValidationReport rep;
    rep.check_degrees.resize(pg.num_checks());
    rep.var_degrees.resize(pg.num_vars());
    for (int c = 0; c < pg.num_checks(); ++c) rep.check_degrees[c] = pg.check_degree(c);
    for (int v = 0; v < pg.num_vars(); ++v) rep.var_degrees[v] = pg.var_degree(v);

    for (int c = 0; c < pg.num_checks(); ++c)
        if (rep.check_degrees[c] == 0)
            rep.failures.push_back("isolated check node " + std::to_string(c));
    for (int v = 0; v < pg.num_vars(); ++v)
        if (rep.var_degrees[v] == 0)
            rep.failures.push_back("isolated variable node " + std::to_string(v));

    // single-component check over the bipartite graph (checks then vars)
    int n = pg.num_checks() + pg.num_vars();
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : pg.edges()) {
        adj[e.check].push_back(pg.num_checks() + e.var);
        adj[pg.num_checks() + e.var].push_back(e.check);
    }
    std::vector<char> seen(n, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int w : adj[u])
            if (!seen[w]) { seen[w] = 1; ++reached; bfs.push(w); }
    }
    rep.connected = (reached == n);
    if (!rep.connected) rep.failures.push_back("graph is not a single connected component");
    rep.ok = rep.failures.empty();
    return rep;
}

void write_protograph(const Protograph& pg, std::ostream& os) {
    nlohmann::json j;
    j["version"] = 1;
    j["name"] = pg.name();
    j["num_checks"] = pg.num_checks();
    j["num_vars"] = pg.num_vars();
    auto edges = nlohmann::json::array();
    for (const auto& e : pg.edges()) edges.push_back({e.check, e.var, e.mult});
    j["edges"] = std::move(edges);
    j["punctured"] = pg.punctured();
    auto pos = nlohmann::json::object();
    for (const auto& [v, p] : pg.positions())
        pos[std::to_string(v)] = {p.chain, p.position};
    j["positions"] = std::move(pos);
    os << j.dump(1) << '\n';
}

Protograph read_protograph(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("protograph parse error: ") + e.what());
    }
    try {
        if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != 1)
            throw std::runtime_error("unsupported protograph file version");
        Protograph pg(j.value("name", std::string("unnamed")),
                      j.at("num_checks").get<int>(), j.at("num_vars").get<int>());
        std::set<std::pair<int, int>> seen;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3)
                throw std::runtime_error("edge entries must be [check, var, mult]");
            int c = e[0].get<int>(), v = e[1].get<int>(), m = e[2].get<int>();
            if (m < 1) throw std::runtime_error("edge multiplicity must be positive");
            if (!seen.insert({c, v}).second)
                throw std::runtime_error("duplicate (check, var) edge entry");
            pg.add_edge(c, v, m);
        }
        for (const auto& v : j.value("punctured", std::vector<int>{})) pg.set_punctured(v);
        if (j.contains("positions")) {
            for (const auto& [key, val] : j["positions"].items()) {
                if (!val.is_array() || val.size() != 2)
                    throw std::runtime_error("position entries must be [chain, position]");
                pg.set_position(std::stoi(key), {val[0].get<int>(), val[1].get<int>()});
            }
        }
        return pg;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("protograph parse error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("protograph parse error: ") + e.what());
    }
}

void save_protograph(const Protograph& pg, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_protograph(pg, f);
    if (!f) throw std::runtime_error("write failed for " + path);
}

Protograph load_protograph(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_protograph(f);
}

InstanceGraph InstanceGraph::from(const Protograph& pg) {
    InstanceGraph g;
    g.num_checks = pg.num_checks();
    g.num_vars = pg.num_vars();
    g.check_edges.resize(g.num_checks);
    g.var_edges.resize(g.num_vars);
    for (const auto& e : pg.edges()) {
        for (int i = 0; i < e.mult; ++i) {
            int id = g.num_edges();
            g.edge_check.push_back(e.check);
            g.edge_var.push_back(e.var);
            g.check_edges[e.check].push_back(id);
            g.var_edges[e.var].push_back(id);
        }
    }
    return g;
}

}  // namespace scldpc
