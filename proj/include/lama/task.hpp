#pragma once

// Finite-domain planning tasks: facts, states, operators with conditional
// effects, operator semantics and plan validation.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lama {

struct Fact {
    int var = 0;
    int value = 0;

    friend auto operator<=>(const Fact &, const Fact &) = default;
};

using PartialAssignment = std::vector<Fact>;

// A total assignment, one value per variable. Compared and hashed by content.
class State {
public:
    State() = default;
    explicit State(std::vector<int> values) : values_(std::move(values)) {}

    int operator[](int var) const { return values_[static_cast<std::size_t>(var)]; }
    int &operator[](int var) { return values_[static_cast<std::size_t>(var)]; }
    int size() const { return static_cast<int>(values_.size()); }
    const std::vector<int> &values() const { return values_; }

    bool satisfies(const Fact &fact) const { return values_[static_cast<std::size_t>(fact.var)] == fact.value; }

    bool satisfies(std::span<const Fact> facts) const {
        return std::all_of(facts.begin(), facts.end(),
                           [this](const Fact &f) { return satisfies(f); });
    }

    friend bool operator==(const State &, const State &) = default;

private:
    std::vector<int> values_;
};

struct StateHash {
    std::size_t operator()(const State &state) const noexcept {
        std::size_t seed = 0xcbf29ce484222325ULL;
        for (int v : state.values()) {
            seed ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
        }
        return seed;
    }
};

struct Effect {
    PartialAssignment conditions;
    int var = 0;
    int value = 0;

    Fact fact() const { return {var, value}; }
};

struct Operator {
    std::string name;
    PartialAssignment preconditions;
    std::vector<Effect> effects;
    int cost = 1;
};

struct Variable {
    std::vector<std::string> fact_names;

    int domain_size() const { return static_cast<int>(fact_names.size()); }
};

enum class Metric { unit, general };

inline std::string_view metric_name(Metric metric) {
    return metric == Metric::unit ? "unit" : "general";
}

struct Task {
    std::vector<Variable> variables;
    std::vector<std::vector<Fact>> mutex_groups;
    State initial_state;
    PartialAssignment goal;
    std::vector<Operator> operators;
    Metric metric = Metric::general;

    int num_variables() const { return static_cast<int>(variables.size()); }
    int num_operators() const { return static_cast<int>(operators.size()); }

    bool valid_fact(const Fact &fact) const {
        return fact.var >= 0 && fact.var < num_variables() && fact.value >= 0 &&
               fact.value < variables[static_cast<std::size_t>(fact.var)].domain_size();
    }

    const std::string &fact_name(const Fact &fact) const {
        return variables[static_cast<std::size_t>(fact.var)].fact_names[static_cast<std::size_t>(fact.value)];
    }

    // Predicate tag of a fact: the name prefix before '(' (or the whole name).
    std::string_view predicate(const Fact &fact) const {
        std::string_view name = fact_name(fact);
        return name.substr(0, name.find('('));
    }

    bool is_goal_state(const State &state) const { return state.satisfies(goal); }

    std::optional<int> find_operator(std::string_view name) const {
        for (int i = 0; i < num_operators(); ++i) {
            if (operators[static_cast<std::size_t>(i)].name == name)
                return i;
        }
        return std::nullopt;
    }
};

// Dense numbering of all facts of a task, variable-major.
class FactIndex {
public:
    FactIndex() = default;
    explicit FactIndex(const Task &task) {
        offsets_.reserve(task.variables.size() + 1);
        int offset = 0;
        for (const Variable &var : task.variables) {
            offsets_.push_back(offset);
            offset += var.domain_size();
        }
        offsets_.push_back(offset);
    }

    int size() const { return offsets_.empty() ? 0 : offsets_.back(); }
    int id(const Fact &fact) const { return offsets_[static_cast<std::size_t>(fact.var)] + fact.value; }

    Fact fact(int id) const {
        auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
        int var = static_cast<int>(it - offsets_.begin()) - 1;
        return {var, id - offsets_[static_cast<std::size_t>(var)]};
    }

private:
    std::vector<int> offsets_;
};

// Facts of a partial assignment merged with extra facts; nullopt if they
// contradict each other.
inline std::optional<PartialAssignment> merge_assignments(std::span<const Fact> a, std::span<const Fact> b) {
    PartialAssignment merged(a.begin(), a.end());
    for (const Fact &f : b) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const Fact &g) { return g.var == f.var; });
        if (it == merged.end())
            merged.push_back(f);
        else if (it->value != f.value)
            return std::nullopt;
    }
    std::sort(merged.begin(), merged.end());
    return merged;
}

inline bool effect_triggers(const Effect &effect, const State &state) {
    return state.satisfies(effect.conditions);
}

inline bool effects_consistent(const Operator &op, const State &state) {
    for (std::size_t i = 0; i < op.effects.size(); ++i) {
        const Effect &e1 = op.effects[i];
        if (!effect_triggers(e1, state))
            continue;
        for (std::size_t j = i + 1; j < op.effects.size(); ++j) {
            const Effect &e2 = op.effects[j];
            if (e1.var == e2.var && e1.value != e2.value && effect_triggers(e2, state))
                return false;
        }
    }
    return true;
}

inline bool applicable(const Operator &op, const State &state) {
    return state.satisfies(op.preconditions) && effects_consistent(op, state);
}

class InapplicableOperator : public std::logic_error {
public:
    explicit InapplicableOperator(const std::string &name)
        : std::logic_error("operator not applicable: " + name) {}
};

inline State apply(const Operator &op, const State &state) {
    if (!applicable(op, state))
        throw InapplicableOperator(op.name);
    State next = state;
    for (const Effect &effect : op.effects) {
        if (effect_triggers(effect, state))
            next[effect.var] = effect.value;
    }
    return next;
}

class PlanError : public std::runtime_error {
public:
    enum class Kind { unknown_operator, inapplicable_at_step, goal_not_satisfied };

    PlanError(Kind kind, std::string message, int step = -1, std::optional<Fact> fact = std::nullopt)
        : std::runtime_error(std::move(message)), kind_(kind), step_(step), fact_(fact) {}

    Kind kind() const { return kind_; }
    int step() const { return step_; }
    std::optional<Fact> fact() const { return fact_; }

private:
    Kind kind_;
    int step_;
    std::optional<Fact> fact_;
};

// Resolves operator names; throws PlanError(unknown_operator) on a miss.
inline std::vector<int> resolve_plan(const Task &task, std::span<const std::string> names) {
    std::unordered_map<std::string_view, int> by_name;
    for (int i = task.num_operators() - 1; i >= 0; --i)
        by_name[task.operators[static_cast<std::size_t>(i)].name] = i;
    std::vector<int> ops;
    ops.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto it = by_name.find(names[i]);
        if (it == by_name.end())
            throw PlanError(PlanError::Kind::unknown_operator, "unknown operator '" + names[i] + "'",
                            static_cast<int>(i));
        ops.push_back(it->second);
    }
    return ops;
}

inline std::int64_t plan_cost(const Task &task, std::span<const int> plan) {
    std::int64_t cost = 0;
    for (int op : plan)
        cost += task.operators[static_cast<std::size_t>(op)].cost;
    return cost;
}

// Executes the plan from the initial state and returns its cost. Throws
// PlanError identifying the first failing step or the first unmet goal fact.
inline std::int64_t validate_plan(const Task &task, std::span<const int> plan) {
    State state = task.initial_state;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const Operator &op = task.operators[static_cast<std::size_t>(plan[i])];
        if (!applicable(op, state))
            throw PlanError(PlanError::Kind::inapplicable_at_step,
                            "step " + std::to_string(i) + ": operator '" + op.name + "' is not applicable",
                            static_cast<int>(i));
        state = apply(op, state);
    }
    for (const Fact &goal : task.goal) {
        if (!state.satisfies(goal))
            throw PlanError(PlanError::Kind::goal_not_satisfied,
                            "goal not satisfied: " + task.fact_name(goal), -1, goal);
    }
    return plan_cost(task, plan);
}

inline std::int64_t validate_plan(const Task &task, std::span<const std::string> names) {
    std::vector<int> ops = resolve_plan(task, names);
    return validate_plan(task, std::span<const int>(ops));
}

}  // namespace lama
