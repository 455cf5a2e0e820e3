#pragma once

#include "heuristic.hpp"
#include "landmark_graph.hpp"
#include "relaxation.hpp"
#include "task.hpp"

#include <optional>

namespace lama {

// Landmarks accepted along the path that led to a state.
struct LandmarkStatus {
    std::vector<char> accepted;

    bool is_accepted(int id) const { return accepted[static_cast<std::size_t>(id)] != 0; }
    int count() const { return static_cast<int>(std::count(accepted.begin(), accepted.end(), 1)); }

    friend bool operator==(const LandmarkStatus &, const LandmarkStatus &) = default;
};

// Pass nullptr as parent for the initial state.
inline LandmarkStatus lm_status_update(const LandmarkGraph &graph, const LandmarkStatus *parent, const State &state) {
    LandmarkStatus status;
    status.accepted.assign(static_cast<std::size_t>(graph.size()), 0);
    for (int id = 0; id < graph.size(); ++id) {
        if (parent && parent->is_accepted(id)) {
            status.accepted[static_cast<std::size_t>(id)] = 1;
            continue;
        }
        if (!graph.landmark(id).true_in(state))
            continue;
        const auto &preds = graph.parents(id);
        bool ready = parent ? std::all_of(preds.begin(), preds.end(),
                                          [&](const auto &p) { return parent->is_accepted(p.first); })
                            : preds.empty();
        if (ready)
            status.accepted[static_cast<std::size_t>(id)] = 1;
    }
    return status;
}

// Landmarks still to be achieved: not yet accepted, or required again.
inline std::vector<int> required_landmarks(const LandmarkGraph &graph, const LandmarkStatus &status,
                                           const State &state, std::span<const Fact> goal) {
    std::vector<int> required;
    for (int id = 0; id < graph.size(); ++id) {
        if (!status.is_accepted(id)) {
            required.push_back(id);
            continue;
        }
        const Landmark &lm = graph.landmark(id);
        if (lm.true_in(state))
            continue;
        bool goal_landmark = std::any_of(lm.facts.begin(), lm.facts.end(), [&](const Fact &f) {
            return std::find(goal.begin(), goal.end(), f) != goal.end();
        });
        bool needed_by_child = std::any_of(graph.children(id).begin(), graph.children(id).end(), [&](const auto &c) {
            return c.second == OrderingType::greedy_necessary && !status.is_accepted(c.first);
        });
        if (goal_landmark || needed_by_child)
            required.push_back(id);
    }
    return required;
}

inline HValue lm_count(const LandmarkGraph &graph, const LandmarkStatus &status, const State &state,
                       std::span<const Fact> goal, CostMode mode) {
    std::vector<int> required = required_landmarks(graph, status, state, goal);
    const auto count = static_cast<std::int64_t>(required.size());
    std::int64_t cost = 0;
    for (int id : required)
        cost += graph.node(id).cost;
    switch (mode) {
    case CostMode::ignore: return {count, count};
    case CostMode::pure: return {cost, count};
    case CostMode::plus_one: return {cost + count, count};
    }
    return {count, count};
}

class LandmarkCountHeuristic {
public:
    LandmarkCountHeuristic(const Task &task, const LandmarkGraph &graph, CostMode mode)
        : task_(&task), graph_(&graph), mode_(mode), relaxed_(task, mode), explorer_(relaxed_) {}

    const LandmarkGraph &graph() const { return *graph_; }

    LandmarkStatus status(const LandmarkStatus *parent, const State &state) const {
        return lm_status_update(*graph_, parent, state);
    }

    HValue value(const LandmarkStatus &status, const State &state) const {
        return lm_count(*graph_, status, state, task_->goal, mode_);
    }

    std::vector<int> preferred_operators(const LandmarkStatus &status, const State &state) {
        std::vector<int> required = required_landmarks(*graph_, status, state, task_->goal);
        std::vector<char> acceptable(static_cast<std::size_t>(graph_->size()), 0);
        for (int id : required) {
            const auto &preds = graph_->parents(id);
            acceptable[static_cast<std::size_t>(id)] = std::all_of(
                preds.begin(), preds.end(), [&](const auto &p) { return status.is_accepted(p.first); });
        }

        std::vector<int> preferred;
        for (int o = 0; o < task_->num_operators(); ++o) {
            const Operator &op = task_->operators[static_cast<std::size_t>(o)];
            if (!applicable(op, state))
                continue;
            bool achieves = std::any_of(op.effects.begin(), op.effects.end(), [&](const Effect &e) {
                if (!effect_triggers(e, state) || state.satisfies(e.fact()))
                    return false;
                auto id = graph_->find(e.fact());
                return id && acceptable[static_cast<std::size_t>(*id)] && !graph_->landmark(*id).true_in(state);
            });
            if (achieves)
                preferred.push_back(o);
        }
        if (!preferred.empty())
            return preferred;
        return nearest_landmark_operators(acceptable, state);
    }

    EvalResult evaluate(const LandmarkStatus &status, const State &state, bool want_preferred = true) {
        EvalResult result;
        result.h = value(status, state);
        if (want_preferred)
            result.preferred = preferred_operators(status, state);
        return result;
    }

private:
    // Relaxed plan towards the cheapest acceptable landmark not yet true.
    std::vector<int> nearest_landmark_operators(const std::vector<char> &acceptable, const State &state) {
        const RelaxedExploration &exploration = explorer_.explore(state);
        const FactIndex &facts = relaxed_.facts();
        std::optional<int> best_fact;
        RelaxedCost best_cost;
        for (int id = 0; id < graph_->size(); ++id) {
            if (!acceptable[static_cast<std::size_t>(id)] || graph_->landmark(id).true_in(state))
                continue;
            for (const Fact &f : graph_->landmark(id).facts) {
                int fid = facts.id(f);
                const RelaxedCost &cost = exploration.fact_cost[static_cast<std::size_t>(fid)];
                if (!cost.is_infinite() && cost < best_cost) {
                    best_cost = cost;
                    best_fact = fid;
                }
            }
        }
        if (!best_fact)
            return {};
        int target = *best_fact;
        RelaxedPlan plan = extract_relaxed_plan(relaxed_, exploration, std::span<const int>(&target, 1), state);
        return applicable_plan_operators(*task_, plan, state);
    }

    const Task *task_;
    const LandmarkGraph *graph_;
    CostMode mode_;
    RelaxedTask relaxed_;
    RelaxedExplorer explorer_;
};

}  // namespace lama
