#pragma once

#include "task.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace lama {

enum class OrderingType { natural, greedy_necessary, reasonable, obedient_reasonable };

inline std::string_view ordering_name(OrderingType type) {
    switch (type) {
    case OrderingType::natural: return "natural";
    case OrderingType::greedy_necessary: return "greedy-necessary";
    case OrderingType::reasonable: return "reasonable";
    case OrderingType::obedient_reasonable: return "obedient-reasonable";
    }
    return "?";
}

// Higher is stronger: greedy-necessary implies natural, and both dominate the
// heuristic reasonable kinds.
inline int ordering_strength(OrderingType type) {
    switch (type) {
    case OrderingType::greedy_necessary: return 3;
    case OrderingType::natural: return 2;
    case OrderingType::reasonable: return 1;
    case OrderingType::obedient_reasonable: return 0;
    }
    return 0;
}

inline bool is_sound_ordering(OrderingType type) {
    return type == OrderingType::natural || type == OrderingType::greedy_necessary;
}

// A fact landmark (one fact) or a disjunction of 2-4 facts, facts sorted.
struct Landmark {
    std::vector<Fact> facts;

    bool disjunctive() const { return facts.size() > 1; }

    bool true_in(const State &state) const {
        return std::any_of(facts.begin(), facts.end(), [&](const Fact &f) { return state.satisfies(f); });
    }

    bool contains(const Fact &fact) const { return std::find(facts.begin(), facts.end(), fact) != facts.end(); }

    bool overlaps(const Landmark &other) const {
        return std::any_of(facts.begin(), facts.end(), [&](const Fact &f) { return other.contains(f); });
    }

    friend bool operator==(const Landmark &, const Landmark &) = default;
};

struct LandmarkNode {
    Landmark landmark;
    bool goal = false;
    std::vector<int> first_achievers;  // recorded by the restricted relaxation, may be empty
    int cost = 0;                      // minimum cost of an achiever
};

struct Ordering {
    int from = 0;
    int to = 0;
    OrderingType type = OrderingType::natural;

    friend bool operator==(const Ordering &, const Ordering &) = default;
};

class LandmarkGraph {
public:
    int size() const { return static_cast<int>(nodes_.size()); }
    bool empty() const { return nodes_.empty(); }

    const LandmarkNode &node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    LandmarkNode &node(int id) { return nodes_[static_cast<std::size_t>(id)]; }
    const Landmark &landmark(int id) const { return node(id).landmark; }
    const std::vector<LandmarkNode> &nodes() const { return nodes_; }

    int add_landmark(LandmarkNode node) {
        int id = size();
        for (const Fact &f : node.landmark.facts)
            by_fact_[f] = id;
        nodes_.push_back(std::move(node));
        parents_.emplace_back();
        children_.emplace_back();
        return id;
    }

    // Landmark containing the fact, if any.
    std::optional<int> find(const Fact &fact) const {
        auto it = by_fact_.find(fact);
        if (it == by_fact_.end())
            return std::nullopt;
        return it->second;
    }

    std::optional<int> find(const Landmark &landmark) const {
        auto id = find(landmark.facts.front());
        if (id && this->landmark(*id) == landmark)
            return id;
        return std::nullopt;
    }

    std::optional<OrderingType> ordering(int from, int to) const {
        auto it = arcs_.find({from, to});
        if (it == arcs_.end())
            return std::nullopt;
        return it->second;
    }

    // Adds the ordering unless an equal or stronger one is already present.
    bool add_ordering(int from, int to, OrderingType type) {
        auto it = arcs_.find({from, to});
        if (it != arcs_.end()) {
            if (ordering_strength(it->second) >= ordering_strength(type))
                return false;
            it->second = type;
            retype(parents_[static_cast<std::size_t>(to)], from, type);
            retype(children_[static_cast<std::size_t>(from)], to, type);
            return true;
        }
        arcs_.emplace(std::pair{from, to}, type);
        parents_[static_cast<std::size_t>(to)].emplace_back(from, type);
        children_[static_cast<std::size_t>(from)].emplace_back(to, type);
        return true;
    }

    void remove_ordering(int from, int to) {
        if (arcs_.erase({from, to}) == 0)
            return;
        auto drop = [](std::vector<std::pair<int, OrderingType>> &list, int other) {
            std::erase_if(list, [other](const auto &entry) { return entry.first == other; });
        };
        drop(parents_[static_cast<std::size_t>(to)], from);
        drop(children_[static_cast<std::size_t>(from)], to);
    }

    const std::vector<std::pair<int, OrderingType>> &parents(int id) const {
        return parents_[static_cast<std::size_t>(id)];
    }
    const std::vector<std::pair<int, OrderingType>> &children(int id) const {
        return children_[static_cast<std::size_t>(id)];
    }

    // All orderings sorted by (from, to).
    std::vector<Ordering> orderings() const {
        std::vector<Ordering> result;
        result.reserve(arcs_.size());
        for (const auto &[key, type] : arcs_)
            result.push_back({key.first, key.second, type});
        return result;
    }

    int num_orderings() const { return static_cast<int>(arcs_.size()); }

    int count_orderings(OrderingType type) const {
        return static_cast<int>(std::count_if(arcs_.begin(), arcs_.end(),
                                              [type](const auto &arc) { return arc.second == type; }));
    }

    int num_disjunctive() const {
        return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                              [](const LandmarkNode &n) { return n.landmark.disjunctive(); }));
    }

private:
    static void retype(std::vector<std::pair<int, OrderingType>> &list, int other, OrderingType type) {
        for (auto &entry : list) {
            if (entry.first == other)
                entry.second = type;
        }
    }

    std::vector<LandmarkNode> nodes_;
    std::map<Fact, int> by_fact_;
    std::map<std::pair<int, int>, OrderingType> arcs_;
    std::vector<std::vector<std::pair<int, OrderingType>>> parents_;
    std::vector<std::vector<std::pair<int, OrderingType>>> children_;
};

// Finds one directed cycle over arcs accepted by `use`, as a list of arcs.
template <typename ArcFilter>
std::vector<Ordering> find_cycle(const LandmarkGraph &graph, ArcFilter use) {
    const int n = graph.size();
    std::vector<int> color(static_cast<std::size_t>(n), 0);  // 0 new, 1 on stack, 2 done
    std::vector<Ordering> path;
    std::vector<Ordering> cycle;

    auto dfs = [&](auto &&self, int v) -> bool {
        color[static_cast<std::size_t>(v)] = 1;
        for (const auto &[w, type] : graph.children(v)) {
            if (!use(type))
                continue;
            path.push_back({v, w, type});
            if (color[static_cast<std::size_t>(w)] == 1) {
                auto start = std::find_if(path.begin(), path.end(), [w](const Ordering &o) { return o.from == w; });
                cycle.assign(start, path.end());
                return true;
            }
            if (color[static_cast<std::size_t>(w)] == 0 && self(self, w))
                return true;
            path.pop_back();
        }
        color[static_cast<std::size_t>(v)] = 2;
        return false;
    };

    for (int v = 0; v < n; ++v) {
        if (color[static_cast<std::size_t>(v)] == 0 && dfs(dfs, v))
            return cycle;
    }
    return {};
}

inline bool is_acyclic(const LandmarkGraph &graph, bool sound_orderings_only = false) {
    return find_cycle(graph, [sound_orderings_only](OrderingType t) {
               return !sound_orderings_only || is_sound_ordering(t);
           }).empty();
}

}  // namespace lama
