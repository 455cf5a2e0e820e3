#pragma once

#include "landmark_graph.hpp"
#include "landmarks.hpp"
#include "task.hpp"

#include <set>

namespace lama {

// Pairwise inconsistency: same variable with different values, or joint
// membership in a mutex group.
class InconsistencyTable {
public:
    explicit InconsistencyTable(const Task &task) {
        for (const auto &group : task.mutex_groups) {
            for (const Fact &a : group) {
                for (const Fact &b : group) {
                    if (a != b)
                        mutex_.emplace(a, b);
                }
            }
        }
    }

    bool inconsistent(const Fact &a, const Fact &b) const {
        if (a.var == b.var)
            return a.value != b.value;
        return mutex_.contains({a, b});
    }

private:
    std::set<std::pair<Fact, Fact>> mutex_;
};

namespace detail {

// Every operator adding `fact` has an effect that clashes with `other`: an
// unconditional effect, or the adding effect itself.
inline bool achievers_interfere(const Task &task, const InconsistencyTable &table, const Fact &fact,
                                const Fact &other) {
    bool any = false;
    for (const Operator &op : task.operators) {
        for (const Effect &adding : op.effects) {
            if (adding.fact() != fact)
                continue;
            any = true;
            bool clash = table.inconsistent(adding.fact(), other);
            for (const Effect &eff : op.effects) {
                if (eff.conditions.empty() && table.inconsistent(eff.fact(), other))
                    clash = true;
            }
            if (!clash)
                return false;
        }
    }
    return any;
}

inline std::vector<Fact> landmark_goal_facts(const Task &task) {
    std::vector<Fact> goal = task.goal;
    std::sort(goal.begin(), goal.end());
    return goal;
}

// One pass of reasonable-ordering generation. Chains use sound arcs, plus
// reasonable arcs when `chain_through_reasonable` is set.
inline void add_reasonable_pass(LandmarkGraph &graph, const Task &task, const InconsistencyTable &table,
                                OrderingType type, bool chain_through_reasonable) {
    const int n = graph.size();
    auto chainable = [&](OrderingType t) {
        return is_sound_ordering(t) || (chain_through_reasonable && t == OrderingType::reasonable);
    };
    auto fact_of = [&](int id) { return graph.landmark(id).facts.front(); };
    auto is_fact = [&](int id) { return !graph.landmark(id).disjunctive(); };
    const std::vector<Fact> goal = landmark_goal_facts(task);

    // All candidate pairs are collected before any arc of this pass is added.
    std::vector<std::pair<int, int>> candidates;
    for (int l = 0; l < n; ++l) {
        if (!is_fact(l))
            continue;
        std::vector<char> reached(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{l};
        std::vector<int> order;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto &[w, t] : graph.children(v)) {
                if (chainable(t) && !reached[static_cast<std::size_t>(w)]) {
                    reached[static_cast<std::size_t>(w)] = 1;
                    order.push_back(w);
                    stack.push_back(w);
                }
            }
        }

        std::set<int> after;
        for (const Fact &g : goal) {
            if (auto id = graph.find(g); id && *id != l && is_fact(*id))
                after.insert(*id);
        }
        for (int end : order) {
            std::vector<int> chain_parents;
            for (const auto &[x, t] : graph.parents(end)) {
                if (chainable(t) && (x == l || reached[static_cast<std::size_t>(x)]))
                    chain_parents.push_back(x);
            }
            for (const auto &[lp, t] : graph.parents(end)) {
                if (t != OrderingType::greedy_necessary || lp == l || !is_fact(lp))
                    continue;
                bool other_route = std::any_of(chain_parents.begin(), chain_parents.end(),
                                               [lp](int x) { return x != lp; });
                if (other_route)
                    after.insert(lp);
            }
        }
        for (int lp : after)
            candidates.emplace_back(l, lp);
    }

    for (auto [l, lp] : candidates) {
        const Fact a = fact_of(l);
        const Fact b = fact_of(lp);
        if (task.initial_state.satisfies(a) && task.initial_state.satisfies(b))
            continue;
        if (graph.ordering(l, lp))
            continue;
        if (auto reverse = graph.ordering(lp, l); reverse && is_sound_ordering(*reverse))
            continue;
        bool interferes = table.inconsistent(a, b) || achievers_interfere(task, table, a, b);
        if (!interferes) {
            for (const auto &[pp, t] : graph.parents(l)) {
                if (t == OrderingType::greedy_necessary && is_fact(pp) && table.inconsistent(fact_of(pp), b)) {
                    interferes = true;
                    break;
                }
            }
        }
        if (interferes)
            graph.add_ordering(l, lp, type);
    }
}

inline OrderingType weakest_arc_kind(const std::vector<Ordering> &cycle) {
    OrderingType weakest = cycle.front().type;
    for (const Ordering &o : cycle) {
        if (ordering_strength(o.type) < ordering_strength(weakest))
            weakest = o.type;
    }
    return weakest;
}

}  // namespace detail

// Removes one arc per detected cycle until none remain, preferring
// obedient-reasonable arcs, then reasonable ones.
inline int break_cycles(LandmarkGraph &graph) {
    int removed = 0;
    for (;;) {
        auto cycle = find_cycle(graph, [](OrderingType) { return true; });
        if (cycle.empty())
            return removed;
        OrderingType kind = detail::weakest_arc_kind(cycle);
        auto victim = std::find_if(cycle.begin(), cycle.end(), [kind](const Ordering &o) { return o.type == kind; });
        graph.remove_ordering(victim->from, victim->to);
        ++removed;
    }
}

inline LandmarkGraph add_reasonable_orderings(LandmarkGraph graph, const Task &task) {
    InconsistencyTable table(task);
    detail::add_reasonable_pass(graph, task, table, OrderingType::reasonable, false);
    detail::add_reasonable_pass(graph, task, table, OrderingType::obedient_reasonable, true);
    break_cycles(graph);
    return graph;
}

// Full extraction: back-chaining, then reasonable orderings.
inline LandmarkGraph build_landmark_graph(const Task &task) {
    return add_reasonable_orderings(extract_landmark_graph(task), task);
}

}  // namespace lama
