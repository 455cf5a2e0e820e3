#pragma once

// Exhaustive reference checks over the explicit state space of small tasks.
// Plans of bounded length are explored through breadth-first layers over
// states, which covers every plan up to the bound without listing them one by
// one.

#include "landmark_graph.hpp"
#include "task.hpp"

#include <deque>
#include <limits>
#include <unordered_map>

namespace lama {

class StateSpace {
public:
    struct Edge {
        int op;
        int target;
    };

    static constexpr int unreachable = std::numeric_limits<int>::max();

    // Throws std::length_error when more than `max_states` states are reachable.
    explicit StateSpace(const Task &task, std::size_t max_states = 200000) : task_(&task) {
        intern(task.initial_state);
        for (std::size_t i = 0; i < states_.size(); ++i) {
            const State current = states_[i];
            for (int o = 0; o < task.num_operators(); ++o) {
                const Operator &op = task.operators[static_cast<std::size_t>(o)];
                if (!applicable(op, current))
                    continue;
                int target = intern(apply(op, current));
                edges_[i].push_back({o, target});
                if (states_.size() > max_states)
                    throw std::length_error("state space too large");
            }
        }
        compute_goal_distances();
    }

    const Task &task() const { return *task_; }
    int size() const { return static_cast<int>(states_.size()); }
    const State &state(int id) const { return states_[static_cast<std::size_t>(id)]; }
    const std::vector<Edge> &edges(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    // Length of a shortest plan from the state, or `unreachable`.
    int goal_distance(int id) const { return goal_distance_[static_cast<std::size_t>(id)]; }
    bool solvable() const { return goal_distance(0) != unreachable; }

    // A shortest plan from the state (operator indices).
    std::vector<int> shortest_plan(int id) const {
        std::vector<int> plan;
        while (goal_distance(id) > 0) {
            for (const Edge &e : edges(id)) {
                if (goal_distance(e.target) == goal_distance(id) - 1) {
                    plan.push_back(e.op);
                    id = e.target;
                    break;
                }
            }
        }
        return plan;
    }

private:
    int intern(const State &state) {
        auto [it, inserted] = index_.try_emplace(state, static_cast<int>(states_.size()));
        if (inserted) {
            states_.push_back(state);
            edges_.emplace_back();
        }
        return it->second;
    }

    void compute_goal_distances() {
        std::vector<std::vector<int>> predecessors(states_.size());
        for (std::size_t s = 0; s < states_.size(); ++s) {
            for (const Edge &e : edges_[s])
                predecessors[static_cast<std::size_t>(e.target)].push_back(static_cast<int>(s));
        }
        goal_distance_.assign(states_.size(), unreachable);
        std::deque<int> queue;
        for (std::size_t s = 0; s < states_.size(); ++s) {
            if (task_->is_goal_state(states_[s])) {
                goal_distance_[s] = 0;
                queue.push_back(static_cast<int>(s));
            }
        }
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            for (int p : predecessors[static_cast<std::size_t>(s)]) {
                if (goal_distance_[static_cast<std::size_t>(p)] == unreachable) {
                    goal_distance_[static_cast<std::size_t>(p)] = goal_distance_[static_cast<std::size_t>(s)] + 1;
                    queue.push_back(p);
                }
            }
        }
    }

    const Task *task_;
    std::vector<State> states_;
    std::vector<std::vector<Edge>> edges_;
    std::unordered_map<State, int, StateHash> index_;
    std::vector<int> goal_distance_;
};

struct OracleVerdict {
    enum class Kind { holds, violated, inconclusive };
    Kind kind = Kind::inconclusive;
    std::vector<int> plan;  // counterexample when violated
};

namespace detail {

struct Layered {
    std::vector<int> depth;
    std::vector<int> parent;
    std::vector<int> parent_op;
};

// Breadth-first layers from the initial state through states accepted by
// `inside`, at most `max_depth` steps.
template <typename Inside>
Layered bounded_layers(const StateSpace &space, Inside inside, int max_depth) {
    Layered layers;
    const auto n = static_cast<std::size_t>(space.size());
    layers.depth.assign(n, -1);
    layers.parent.assign(n, -1);
    layers.parent_op.assign(n, -1);
    if (!inside(0))
        return layers;
    std::deque<int> queue{0};
    layers.depth[0] = 0;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        if (layers.depth[static_cast<std::size_t>(s)] == max_depth)
            continue;
        for (const StateSpace::Edge &e : space.edges(s)) {
            auto t = static_cast<std::size_t>(e.target);
            if (layers.depth[t] >= 0 || !inside(e.target))
                continue;
            layers.depth[t] = layers.depth[static_cast<std::size_t>(s)] + 1;
            layers.parent[t] = s;
            layers.parent_op[t] = e.op;
            queue.push_back(e.target);
        }
    }
    return layers;
}

inline std::vector<int> path_to(const Layered &layers, int s) {
    std::vector<int> ops;
    while (layers.parent[static_cast<std::size_t>(s)] >= 0) {
        ops.push_back(layers.parent_op[static_cast<std::size_t>(s)]);
        s = layers.parent[static_cast<std::size_t>(s)];
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

}  // namespace detail

// Is the candidate true at some point of every plan of length <= max_len?
inline OracleVerdict brute_force_landmark_oracle(const StateSpace &space, const Landmark &candidate, int max_len) {
    OracleVerdict verdict;
    if (max_len < 1)
        throw std::invalid_argument("plan length bound must be at least 1");
    if (space.goal_distance(0) > max_len)
        return verdict;
    auto avoids = [&](int s) { return !candidate.true_in(space.state(s)); };
    detail::Layered layers = detail::bounded_layers(space, avoids, max_len);
    for (int s = 0; s < space.size(); ++s) {
        if (layers.depth[static_cast<std::size_t>(s)] >= 0 && space.task().is_goal_state(space.state(s))) {
            verdict.kind = OracleVerdict::Kind::violated;
            verdict.plan = detail::path_to(layers, s);
            return verdict;
        }
    }
    verdict.kind = OracleVerdict::Kind::holds;
    return verdict;
}

inline OracleVerdict brute_force_landmark_oracle(const Task &task, const Landmark &candidate, int max_len) {
    return brute_force_landmark_oracle(StateSpace(task), candidate, max_len);
}

// Does `before` hold in the state right before `after` first becomes true, in
// every plan of length <= max_len?
inline OracleVerdict greedy_necessary_oracle(const StateSpace &space, const Landmark &before, const Landmark &after,
                                             int max_len) {
    OracleVerdict verdict;
    if (space.goal_distance(0) > max_len)
        return verdict;
    verdict.kind = OracleVerdict::Kind::holds;
    if (after.true_in(space.state(0)))
        return verdict;
    auto avoids = [&](int s) { return !after.true_in(space.state(s)); };
    detail::Layered layers = detail::bounded_layers(space, avoids, max_len - 1);
    for (int s = 0; s < space.size(); ++s) {
        int depth = layers.depth[static_cast<std::size_t>(s)];
        if (depth < 0 || before.true_in(space.state(s)))
            continue;
        for (const StateSpace::Edge &e : space.edges(s)) {
            if (!after.true_in(space.state(e.target)))
                continue;
            int rest = space.goal_distance(e.target);
            if (rest == StateSpace::unreachable || depth + 1 + rest > max_len)
                continue;
            verdict.kind = OracleVerdict::Kind::violated;
            verdict.plan = detail::path_to(layers, s);
            verdict.plan.push_back(e.op);
            auto tail = space.shortest_plan(e.target);
            verdict.plan.insert(verdict.plan.end(), tail.begin(), tail.end());
            return verdict;
        }
    }
    return verdict;
}

}  // namespace lama
