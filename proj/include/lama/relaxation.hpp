#pragma once

// Cost-sensitive FF/add heuristic. The forward phase propagates h_add costs
// through the delete relaxation with a generalised Dijkstra loop and records a
// best support per fact; the backward phase collects the union of best
// supports into a relaxed plan.

#include "heuristic.hpp"
#include "task.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <vector>

namespace lama {

// Lexicographic (cost, distance) pair propagated through the relaxation.
struct RelaxedCost {
    std::int64_t cost = infinite_cost;
    std::int64_t distance = infinite_cost;

    static RelaxedCost zero() { return {0, 0}; }
    bool is_infinite() const { return cost >= infinite_cost; }

    friend RelaxedCost operator+(const RelaxedCost &a, const RelaxedCost &b) {
        if (a.is_infinite() || b.is_infinite())
            return {};
        return {saturating_add(a.cost, b.cost), saturating_add(a.distance, b.distance)};
    }

    friend auto operator<=>(const RelaxedCost &, const RelaxedCost &) = default;
};

// One effect of one operator, with the effect condition folded into the
// precondition.
struct UnaryOperator {
    int op = 0;
    int effect = 0;
    std::vector<int> preconditions;  // fact ids
    int target = 0;                  // fact id
    RelaxedCost weight;
};

class RelaxedTask {
public:
    RelaxedTask(const Task &task, CostMode mode) : task_(&task), mode_(mode), facts_(task) {
        precondition_of_.resize(static_cast<std::size_t>(facts_.size()));
        for (int o = 0; o < task.num_operators(); ++o) {
            const Operator &op = task.operators[static_cast<std::size_t>(o)];
            for (int e = 0; e < static_cast<int>(op.effects.size()); ++e) {
                const Effect &eff = op.effects[static_cast<std::size_t>(e)];
                auto pre = merge_assignments(op.preconditions, eff.conditions);
                if (!pre)
                    continue;
                UnaryOperator unary;
                unary.op = o;
                unary.effect = e;
                for (const Fact &f : *pre)
                    unary.preconditions.push_back(facts_.id(f));
                unary.target = facts_.id(eff.fact());
                unary.weight = {operator_weight(mode, op.cost), 1};
                int index = static_cast<int>(unaries_.size());
                for (int f : unary.preconditions)
                    precondition_of_[static_cast<std::size_t>(f)].push_back(index);
                unaries_.push_back(std::move(unary));
            }
        }
    }

    const Task &task() const { return *task_; }
    CostMode mode() const { return mode_; }
    const FactIndex &facts() const { return facts_; }
    const std::vector<UnaryOperator> &unaries() const { return unaries_; }
    const std::vector<int> &precondition_of(int fact) const {
        return precondition_of_[static_cast<std::size_t>(fact)];
    }

private:
    const Task *task_;
    CostMode mode_;
    FactIndex facts_;
    std::vector<UnaryOperator> unaries_;
    std::vector<std::vector<int>> precondition_of_;
};

struct RelaxedExploration {
    std::vector<RelaxedCost> fact_cost;  // indexed by fact id
    std::vector<int> best_support;       // unary operator index, -1 if none
};

// Result of backward extraction: distinct original operators, ascending.
struct RelaxedPlan {
    std::vector<int> operators;
};

class RelaxedExplorer {
public:
    explicit RelaxedExplorer(const RelaxedTask &relaxed) : relaxed_(&relaxed) {}

    const RelaxedExploration &explore(const State &state) {
        const auto &unaries = relaxed_->unaries();
        const int num_facts = relaxed_->facts().size();
        result_.fact_cost.assign(static_cast<std::size_t>(num_facts), RelaxedCost{});
        result_.best_support.assign(static_cast<std::size_t>(num_facts), -1);
        unsatisfied_.resize(unaries.size());
        accumulated_.resize(unaries.size());
        queue_ = {};

        for (std::size_t u = 0; u < unaries.size(); ++u) {
            unsatisfied_[u] = static_cast<int>(unaries[u].preconditions.size());
            accumulated_[u] = RelaxedCost::zero();
        }
        for (int var = 0; var < state.size(); ++var)
            enqueue(relaxed_->facts().id({var, state[var]}), RelaxedCost::zero(), -1);
        for (std::size_t u = 0; u < unaries.size(); ++u) {
            if (unaries[u].preconditions.empty())
                enqueue(unaries[u].target, unaries[u].weight, static_cast<int>(u));
        }

        while (!queue_.empty()) {
            auto [cost, distance, fact] = queue_.top();
            queue_.pop();
            RelaxedCost popped{cost, distance};
            if (popped > result_.fact_cost[static_cast<std::size_t>(fact)])
                continue;
            for (int u : relaxed_->precondition_of(fact)) {
                auto uu = static_cast<std::size_t>(u);
                accumulated_[uu] = accumulated_[uu] + popped;
                if (--unsatisfied_[uu] == 0)
                    enqueue(unaries[uu].target, accumulated_[uu] + unaries[uu].weight, u);
            }
        }
        return result_;
    }

    const RelaxedExploration &exploration() const { return result_; }

private:
    void enqueue(int fact, RelaxedCost cost, int support) {
        auto f = static_cast<std::size_t>(fact);
        RelaxedCost &current = result_.fact_cost[f];
        if (cost < current) {
            current = cost;
            result_.best_support[f] = support;
            queue_.emplace(cost.cost, cost.distance, fact);
        } else if (cost == current && support >= 0 && result_.best_support[f] > support) {
            result_.best_support[f] = support;
        }
    }

    using Entry = std::tuple<std::int64_t, std::int64_t, int>;
    const RelaxedTask *relaxed_;
    RelaxedExploration result_;
    std::vector<int> unsatisfied_;
    std::vector<RelaxedCost> accumulated_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
};

// Union of best supports reached by chaining back from the given facts.
inline RelaxedPlan extract_relaxed_plan(const RelaxedTask &relaxed, const RelaxedExploration &exploration,
                                        std::span<const int> goal_facts, const State &state) {
    const auto &unaries = relaxed.unaries();
    std::vector<char> marked(exploration.fact_cost.size(), 0);
    std::vector<char> in_plan(static_cast<std::size_t>(relaxed.task().num_operators()), 0);
    std::vector<int> stack(goal_facts.begin(), goal_facts.end());
    RelaxedPlan plan;
    while (!stack.empty()) {
        int fact = stack.back();
        stack.pop_back();
        if (marked[static_cast<std::size_t>(fact)])
            continue;
        marked[static_cast<std::size_t>(fact)] = 1;
        if (state.satisfies(relaxed.facts().fact(fact)))
            continue;
        int support = exploration.best_support[static_cast<std::size_t>(fact)];
        if (support < 0)
            continue;
        const UnaryOperator &unary = unaries[static_cast<std::size_t>(support)];
        if (!in_plan[static_cast<std::size_t>(unary.op)]) {
            in_plan[static_cast<std::size_t>(unary.op)] = 1;
            plan.operators.push_back(unary.op);
        }
        for (int pre : unary.preconditions)
            stack.push_back(pre);
    }
    std::sort(plan.operators.begin(), plan.operators.end());
    return plan;
}

// Each original operator counts once, weighted per cost mode; the tie-break
// key is the plan length.
inline HValue relaxed_plan_value(const Task &task, CostMode mode, const RelaxedPlan &plan) {
    HValue h;
    for (int op : plan.operators)
        h.value += operator_weight(mode, task.operators[static_cast<std::size_t>(op)].cost);
    h.tiebreak = static_cast<std::int64_t>(plan.operators.size());
    return h;
}

inline std::vector<int> applicable_plan_operators(const Task &task, const RelaxedPlan &plan, const State &state) {
    std::vector<int> result;
    for (int op : plan.operators) {
        if (applicable(task.operators[static_cast<std::size_t>(op)], state))
            result.push_back(op);
    }
    return result;
}

class FFAddHeuristic {
public:
    FFAddHeuristic(const Task &task, CostMode mode) : relaxed_(task, mode), explorer_(relaxed_) {
        for (const Fact &g : task.goal)
            goal_facts_.push_back(relaxed_.facts().id(g));
    }

    EvalResult evaluate(const State &state) {
        const RelaxedExploration &exploration = explorer_.explore(state);
        EvalResult result;
        for (int g : goal_facts_) {
            if (exploration.fact_cost[static_cast<std::size_t>(g)].is_infinite()) {
                result.h = HValue::infinite();
                return result;
            }
        }
        RelaxedPlan plan = extract_relaxed_plan(relaxed_, exploration, goal_facts_, state);
        result.h = relaxed_plan_value(relaxed_.task(), relaxed_.mode(), plan);
        result.preferred = applicable_plan_operators(relaxed_.task(), plan, state);
        return result;
    }

    const RelaxedTask &relaxed_task() const { return relaxed_; }
    RelaxedExplorer &explorer() { return explorer_; }

private:
    RelaxedTask relaxed_;
    RelaxedExplorer explorer_;
    std::vector<int> goal_facts_;
};

// Forward phase from state s, standalone.
inline RelaxedExploration ffadd_explore(const Task &task, const State &state, CostMode mode) {
    RelaxedTask relaxed(task, mode);
    RelaxedExplorer explorer(relaxed);
    return explorer.explore(state);
}

// Backward phase on a finished exploration: heuristic value and preferred
// operators for reaching `goal` from s. Also returns the relaxed plan.
inline EvalResult ffadd_value(const RelaxedExploration &exploration, const Task &task, const State &state,
                              std::span<const Fact> goal, CostMode mode, RelaxedPlan *plan_out = nullptr) {
    RelaxedTask relaxed(task, mode);
    const FactIndex &facts = relaxed.facts();
    EvalResult result;
    std::vector<int> goal_facts;
    for (const Fact &g : goal) {
        int id = facts.id(g);
        if (exploration.fact_cost[static_cast<std::size_t>(id)].is_infinite()) {
            result.h = HValue::infinite();
            return result;
        }
        goal_facts.push_back(id);
    }
    RelaxedPlan plan = extract_relaxed_plan(relaxed, exploration, goal_facts, state);
    result.h = relaxed_plan_value(task, mode, plan);
    result.preferred = applicable_plan_operators(task, plan, state);
    if (plan_out)
        *plan_out = std::move(plan);
    return result;
}

}  // namespace lama
