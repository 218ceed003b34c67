#ifndef SCLDPC_PROTOGRAPH_HPP
#define SCLDPC_PROTOGRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace scldpc {

// (chain id, 1-based position along that chain); used for per-position traces
struct NodePosition {
    int chain = 0;
    int position = 0;
    friend bool operator==(const NodePosition&, const NodePosition&) = default;
};

struct ProtoEdge {
    int check = 0;
    int var = 0;
    int mult = 1;
    friend bool operator==(const ProtoEdge&, const ProtoEdge&) = default;
};

// Multigraph template of check/variable node classes. Parallel edges are kept
// as a single (check, var) entry with multiplicity; nodes are 0-based.
class Protograph {
public:
    Protograph(std::string name, int num_checks, int num_vars);

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }
    int num_checks() const { return num_checks_; }
    int num_vars() const { return num_vars_; }

    // merges multiplicity into an existing (check, var) pair
    void add_edge(int check, int var, int mult = 1);
    int multiplicity(int check, int var) const;
    std::vector<ProtoEdge> edges() const;  // sorted by (check, var)
    int num_edge_slots() const;            // sum of multiplicities

    int check_degree(int check) const;
    int var_degree(int var) const;

    void set_punctured(int var);
    bool is_punctured(int var) const;
    const std::set<int>& punctured() const { return punctured_; }

    void set_position(int var, NodePosition pos);
    std::optional<NodePosition> position(int var) const;
    const std::map<int, NodePosition>& positions() const { return positions_; }

    friend bool operator==(const Protograph&, const Protograph&);

private:
    std::string name_;
    int num_checks_;
    int num_vars_;
    std::map<std::pair<int, int>, int> edges_;
    std::vector<int> check_deg_, var_deg_;
    std::set<int> punctured_;
    std::map<int, NodePosition> positions_;
};

struct DesignRate {
    long long num = 0;
    long long den = 1;  // reduced, den > 0
    double value = 0.0;
};

// (num_vars - num_checks) / (num_vars - |punctured|), exact rational
DesignRate design_rate(const Protograph& pg);

struct ValidationReport {
    bool ok = true;
    bool connected = true;
    std::vector<int> check_degrees;
    std::vector<int> var_degrees;
    std::vector<std::string> failures;
};

ValidationReport validate(const Protograph& pg);

// UTF-8 JSON file, format version 1 (see README). Writer emits edges sorted
// by (check, var); reader rejects unknown versions and malformed entries.
void save_protograph(const Protograph& pg, const std::string& path);
Protograph load_protograph(const std::string& path);
void write_protograph(const Protograph& pg, std::ostream& os);
Protograph read_protograph(std::istream& is);

// Directed-edge instance view with multiplicities expanded; instance e
// connects check edge_check[e] to variable edge_var[e]. Instances are ordered
// by (check, var), so parallel edges occupy consecutive ids.
struct InstanceGraph {
    int num_checks = 0;
    int num_vars = 0;
    std::vector<int> edge_check, edge_var;
    std::vector<std::vector<int>> check_edges, var_edges;

    int num_edges() const { return static_cast<int>(edge_check.size()); }
    static InstanceGraph from(const Protograph& pg);
};

}  // namespace scldpc

#endif
