#include "tcam/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "tcam/errors.hpp"

namespace tcam {

Dag::Dag(std::size_t node_count)
    : parents_(node_count, boost::dynamic_bitset<>(node_count)),
      descendants_(node_count, boost::dynamic_bitset<>(node_count)) {}

void Dag::check_node(std::size_t node) const {
    if (node >= size()) throw std::out_of_range("node index " + std::to_string(node) + " out of range");
}

bool Dag::has_edge(std::size_t from, std::size_t to) const {
    check_node(from);
    check_node(to);
    return parents_[to].test(from);
}

bool Dag::reaches(std::size_t from, std::size_t to) const {
    check_node(from);
    check_node(to);
    return descendants_[from].test(to);
}

bool Dag::can_add(std::size_t from, std::size_t to) const {
    check_node(from);
    check_node(to);
    return from != to && !parents_[to].test(from) && !descendants_[to].test(from);
}

void Dag::add_edge(std::size_t from, std::size_t to) {
    check_node(from);
    check_node(to);
    if (from == to) throw CycleError("self-loop on node " + std::to_string(from));
    if (parents_[to].test(from)) {
        throw DuplicateEdgeError("edge " + std::to_string(from) + "->" + std::to_string(to) + " already present");
    }
    if (descendants_[to].test(from)) {
        throw CycleError("edge " + std::to_string(from) + "->" + std::to_string(to) + " closes a cycle");
    }
    parents_[to].set(from);
    ++edge_count_;

    // Everything that reaches `from` (and `from` itself) now reaches `to` and
    // all of its descendants.
    boost::dynamic_bitset<> gained = descendants_[to];
    gained.set(to);
    for (std::size_t node = 0; node < size(); ++node) {
        if (node == from || descendants_[node].test(from)) descendants_[node] |= gained;
    }
}

std::vector<std::size_t> Dag::parents(std::size_t node) const {
    check_node(node);
    std::vector<std::size_t> out;
    for (auto k = parents_[node].find_first(); k != boost::dynamic_bitset<>::npos; k = parents_[node].find_next(k)) {
        out.push_back(k);
    }
    return out;
}

std::vector<std::size_t> Dag::children(std::size_t node) const {
    check_node(node);
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < size(); ++l) {
        if (parents_[l].test(node)) out.push_back(l);
    }
    return out;
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t k = 0; k < size(); ++k) {
        for (std::size_t l = 0; l < size(); ++l) {
            if (parents_[l].test(k)) out.emplace_back(k, l);
        }
    }
    return out;
}

EdgeSet Dag::edge_set() const {
    auto list = edges();
    return {list.begin(), list.end()};
}

Dag Dag::from_edges(std::size_t node_count, const std::vector<Edge>& edges) {
    Dag dag(node_count);
    for (const auto& [k, l] : edges) dag.add_edge(k, l);
    return dag;
}

bool operator==(const Dag& a, const Dag& b) {
    return a.size() == b.size() && a.edges() == b.edges();
}

PriorKnowledge PriorKnowledge::trivial(std::size_t p) {
    PriorKnowledge prior;
    prior.tiers.assign(p, 1);
    prior.forbidden = BoolMatrix(p, false);
    prior.normalize();
    return prior;
}

int PriorKnowledge::tier_count() const {
    if (tiers.empty()) return 0;
    return *std::max_element(tiers.begin(), tiers.end());
}

bool PriorKnowledge::is_root(std::size_t node) const {
    return std::find(roots.begin(), roots.end(), node) != roots.end();
}

bool PriorKnowledge::is_informative() const {
    if (!roots.empty()) return true;
    for (std::size_t i = 1; i < tiers.size(); ++i) {
        if (tiers[i] != tiers[0]) return true;
    }
    for (std::size_t k = 0; k < size(); ++k) {
        for (std::size_t l = 0; l < size(); ++l) {
            if (k != l && forbidden(k, l)) return true;
        }
    }
    return false;
}

void PriorKnowledge::normalize() {
    const std::size_t p = size();
    if (forbidden.size() != p) throw InputError("forbidden matrix size does not match tier map");
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    for (std::size_t k = 0; k < p; ++k) {
        forbidden.set(k, k, true);
        for (std::size_t l = 0; l < p; ++l) {
            if (tiers[k] > tiers[l]) forbidden.set(k, l, true);
        }
    }
    for (auto r : roots) {
        if (r >= p) throw InputError("root index out of range");
        for (std::size_t k = 0; k < p; ++k) forbidden.set(k, r, true);
    }
}

bool PriorKnowledge::is_normalized() const {
    const std::size_t p = size();
    if (forbidden.size() != p) return false;
    for (std::size_t k = 0; k < p; ++k) {
        if (!forbidden(k, k)) return false;
        for (std::size_t l = 0; l < p; ++l) {
            if (tiers[k] > tiers[l] && !forbidden(k, l)) return false;
        }
    }
    for (auto r : roots) {
        for (std::size_t k = 0; k < p; ++k) {
            if (!forbidden(k, r)) return false;
        }
    }
    return true;
}

PriorKnowledge PriorKnowledge::select(const std::vector<std::size_t>& keep) const {
    PriorKnowledge out;
    out.forbidden = BoolMatrix(keep.size(), false);
    std::map<std::size_t, std::size_t> remap;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        remap[keep[i]] = i;
        out.tiers.push_back(tiers.at(keep[i]));
    }
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (std::size_t j = 0; j < keep.size(); ++j) out.forbidden.set(i, j, forbidden(keep[i], keep[j]));
    }
    for (auto r : roots) {
        if (auto it = remap.find(r); it != remap.end()) out.roots.push_back(it->second);
    }
    out.normalize();
    return out;
}

PriorKnowledge load_prior_json(const std::string& text, const std::vector<std::string>& columns) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("prior knowledge: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("prior knowledge: top level must be an object");

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i) index[columns[i]] = i;
    auto lookup = [&](const json& name) -> std::size_t {
        if (!name.is_string()) throw InputError("prior knowledge: column names must be strings");
        auto it = index.find(name.get<std::string>());
        if (it == index.end()) throw InputError("prior knowledge: unknown column '" + name.get<std::string>() + "'");
        return it->second;
    };

    PriorKnowledge prior = PriorKnowledge::trivial(columns.size());
    if (doc.contains("tiers")) {
        const auto& tiers = doc["tiers"];
        if (!tiers.is_object()) throw InputError("prior knowledge: 'tiers' must map names to integers");
        std::vector<bool> seen(columns.size(), false);
        for (const auto& [name, tier] : tiers.items()) {
            const auto k = lookup(json(name));
            if (!tier.is_number_integer() || tier.get<int>() < 1) {
                throw InputError("prior knowledge: tier of '" + name + "' must be a positive integer");
            }
            prior.tiers[k] = tier.get<int>();
            seen[k] = true;
        }
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (!seen[k]) throw InputError("prior knowledge: no tier given for column '" + columns[k] + "'");
        }
    }
    if (doc.contains("forbidden")) {
        for (const auto& pair : doc["forbidden"]) {
            if (!pair.is_array() || pair.size() != 2) {
                throw InputError("prior knowledge: forbidden entries must be [source, target]");
            }
            prior.forbidden.set(lookup(pair[0]), lookup(pair[1]), true);
        }
    }
    if (doc.contains("roots")) {
        for (const auto& name : doc["roots"]) prior.roots.push_back(lookup(name));
    }
    prior.normalize();
    return prior;
}

PriorKnowledge load_prior_file(const std::string& path, const std::vector<std::string>& columns) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open prior knowledge file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_prior_json(buffer.str(), columns);
}

Ordering::Ordering(std::vector<std::size_t> sequence) : sequence_(std::move(sequence)) {
    position_.assign(sequence_.size(), sequence_.size());
    for (std::size_t i = 0; i < sequence_.size(); ++i) {
        const auto node = sequence_[i];
        if (node >= sequence_.size() || position_[node] != sequence_.size()) {
            throw std::invalid_argument("ordering is not a permutation");
        }
        position_[node] = i;
    }
}

Ordering Ordering::identity(std::size_t p) {
    std::vector<std::size_t> seq(p);
    for (std::size_t i = 0; i < p; ++i) seq[i] = i;
    return Ordering(std::move(seq));
}

EdgeSet addable_edges(const Dag& dag, const PriorKnowledge& prior) {
    EdgeSet out;
    for (std::size_t k = 0; k < dag.size(); ++k) {
        for (std::size_t l = 0; l < dag.size(); ++l) {
            if (!prior.forbidden(k, l) && dag.can_add(k, l)) out.emplace(k, l);
        }
    }
    return out;
}

Ordering topological_order(const Dag& dag) {
    const std::size_t p = dag.size();
    std::vector<std::size_t> indegree(p);
    std::vector<std::vector<std::size_t>> children(p);
    for (const auto& [k, l] : dag.edges()) {
        ++indegree[l];
        children[k].push_back(l);
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t node = 0; node < p; ++node) {
        if (indegree[node] == 0) ready.push(node);
    }
    std::vector<std::size_t> sequence;
    sequence.reserve(p);
    while (!ready.empty()) {
        const auto node = ready.top();
        ready.pop();
        sequence.push_back(node);
        for (auto child : children[node]) {
            if (--indegree[child] == 0) ready.push(child);
        }
    }
    return Ordering(std::move(sequence));
}

}  // namespace tcam
