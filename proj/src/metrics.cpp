#include "tcam/metrics.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "tcam/errors.hpp"

namespace tcam {

void ExpertGraph::validate() const {
    for (const auto& e : sure) {
        if (possible.count(e)) throw InputError("expert graph: edge listed as both sure and possible");
    }
    for (const auto* set : {&sure, &possible}) {
        for (const auto& [k, l] : *set) {
            if (k >= node_count || l >= node_count) throw NodeMismatchError("expert graph: node index out of range");
            if (k == l) throw InputError("expert graph: self-loop");
        }
    }
}

std::size_t ashd(const EdgeSet& estimated, std::size_t node_count, const ExpertGraph& expert) {
    if (node_count != expert.node_count) throw NodeMismatchError("ashd: graphs have different node sets");
    std::size_t distance = 0;
    for (const auto& e : expert.sure) {
        if (!estimated.count(e)) ++distance;
    }
    for (const auto& e : estimated) {
        if (!expert.sure.count(e) && !expert.possible.count(e)) ++distance;
    }
    return distance;
}

std::size_t ashd(const Dag& estimated, const ExpertGraph& expert) {
    return ashd(estimated.edge_set(), estimated.size(), expert);
}

std::size_t shd(const EdgeSet& a, const EdgeSet& b) {
    // Per unordered pair: 0 = none, 1 = low->high, 2 = high->low.
    std::map<Edge, std::pair<int, int>> pairs;
    auto record = [&pairs](const EdgeSet& edges, bool first) {
        for (const auto& [k, l] : edges) {
            const Edge key{std::min(k, l), std::max(k, l)};
            const int dir = k < l ? 1 : 2;
            auto& slot = pairs[key];
            (first ? slot.first : slot.second) |= dir;
        }
    };
    record(a, true);
    record(b, false);
    std::size_t distance = 0;
    for (const auto& [key, dirs] : pairs) {
        if (dirs.first != dirs.second) ++distance;
    }
    return distance;
}

std::size_t shd(const Dag& a, const Dag& b) {
    if (a.size() != b.size()) throw NodeMismatchError("shd: graphs have different node sets");
    return shd(a.edge_set(), b.edge_set());
}

double EdgeCounts::precision() const {
    const auto estimated = true_positive + false_positive;
    return estimated == 0 ? 1.0 : static_cast<double>(true_positive) / static_cast<double>(estimated);
}

double EdgeCounts::recall() const {
    const auto actual = true_positive + false_negative;
    return actual == 0 ? 1.0 : static_cast<double>(true_positive) / static_cast<double>(actual);
}

EdgeCounts compare_edges(const EdgeSet& estimated, const EdgeSet& truth) {
    EdgeCounts counts;
    for (const auto& e : estimated) (truth.count(e) ? counts.true_positive : counts.false_positive)++;
    for (const auto& e : truth) {
        if (!estimated.count(e)) ++counts.false_negative;
    }
    return counts;
}

ExpertGraph load_expert_json(const std::string& text, const std::vector<std::string>& columns) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("expert graph: ") + e.what());
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i) index[columns[i]] = i;
    auto edges = [&](const char* key) {
        EdgeSet out;
        if (!doc.contains(key)) return out;
        for (const auto& pair : doc[key]) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
                throw InputError(std::string("expert graph: '") + key + "' entries must be [source, target]");
            }
            auto s = index.find(pair[0].get<std::string>());
            auto t = index.find(pair[1].get<std::string>());
            if (s == index.end() || t == index.end()) {
                throw NodeMismatchError("expert graph: edge names a column absent from the estimated graph");
            }
            out.emplace(s->second, t->second);
        }
        return out;
    };
    ExpertGraph expert;
    expert.node_count = columns.size();
    expert.sure = edges("sure");
    expert.possible = edges("possible");
    expert.validate();
    return expert;
}

}  // namespace tcam
