#pragma once

#include "lama/lama.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace lama::testing {

// Builds tasks by name, keeping fact and operator definitions readable.
class TaskBuilder {
public:
    int variable(const std::vector<std::string> &names) {
        task_.variables.push_back(Variable{names});
        int var = task_.num_variables() - 1;
        for (int d = 0; d < static_cast<int>(names.size()); ++d)
            facts_[names[static_cast<std::size_t>(d)]] = {var, d};
        return var;
    }

    Fact fact(const std::string &name) const { return facts_.at(name); }

    void init(const std::vector<std::string> &names) {
        std::vector<int> values(static_cast<std::size_t>(task_.num_variables()), 0);
        for (const auto &name : names)
            values[static_cast<std::size_t>(fact(name).var)] = fact(name).value;
        task_.initial_state = State(values);
    }

    void goal(const std::vector<std::string> &names) {
        for (const auto &name : names)
            task_.goal.push_back(fact(name));
    }

    void mutex(const std::vector<std::string> &names) {
        std::vector<Fact> group;
        for (const auto &name : names)
            group.push_back(fact(name));
        task_.mutex_groups.push_back(group);
    }

    int op(const std::string &name, const std::vector<std::string> &pre, const std::vector<std::string> &eff,
           int cost = 1) {
        Operator o;
        o.name = name;
        o.cost = cost;
        for (const auto &p : pre)
            o.preconditions.push_back(fact(p));
        for (const auto &e : eff) {
            Effect effect;
            effect.var = fact(e).var;
            effect.value = fact(e).value;
            o.effects.push_back(effect);
        }
        task_.operators.push_back(std::move(o));
        return task_.num_operators() - 1;
    }

    void conditional(int op, const std::vector<std::string> &conditions, const std::string &eff) {
        Effect effect;
        for (const auto &c : conditions)
            effect.conditions.push_back(fact(c));
        effect.var = fact(eff).var;
        effect.value = fact(eff).value;
        task_.operators[static_cast<std::size_t>(op)].effects.push_back(effect);
    }

    void metric(Metric m) { task_.metric = m; }

    Task build() const { return task_; }

private:
    Task task_;
    std::map<std::string, Fact> facts_;
};

// x in {0,1,2}; o1: 0 -> 1 (cost 2), o2: 1 -> 2 (cost 3); goal x = 2.
inline Task tiny_task() {
    TaskBuilder b;
    b.variable({"x(0)", "x(1)", "x(2)"});
    b.init({"x(0)"});
    b.goal({"x(2)"});
    b.op("o1", {"x(0)"}, {"x(1)"}, 2);
    b.op("o2", {"x(1)"}, {"x(2)"}, 3);
    b.metric(Metric::general);
    return b.build();
}

inline const char *tiny_task_text() {
    return "fdr 1\n"
           "metric general\n"
           "vars 1\n"
           "var 3\n"
           "x(0)\n"
           "x(1)\n"
           "x(2)\n"
           "mutexes 0\n"
           "init\n"
           "0\n"
           "goal 1\n"
           "0 2\n"
           "ops 2\n"
           "op 2 o1\n"
           "pre 1\n"
           "0 0\n"
           "eff 1\n"
           "0 0 1\n"
           "op 3 o2\n"
           "pre 1\n"
           "0 1\n"
           "eff 1\n"
           "0 0 2\n";
}

// Two-city logistics: the box starts at B in the left city and must reach F
// in the right city. Left city: A, B, C (airport), D with truck t1 on the
// triangle A-B-C and truck t2 on C-D. Right city: airports E and G plus F,
// truck t3 on the triangle E-F-G. Planes p1 (at C) and p2 (at E) fly between
// the airports C, E and G.
inline Task logistics_task() {
    TaskBuilder b;
    const std::vector<std::string> places{"A", "B", "C", "D", "E", "F", "G"};
    const std::vector<std::string> vehicles{"t1", "t2", "t3", "p1", "p2"};
    std::vector<std::string> box;
    for (const auto &p : places)
        box.push_back("box-at(" + p + ")");
    for (const auto &v : vehicles)
        box.push_back("box-in(" + v + ")");
    b.variable(box);

    const std::map<std::string, std::vector<std::string>> reach{
        {"t1", {"A", "B", "C"}}, {"t2", {"C", "D"}}, {"t3", {"E", "F", "G"}},
        {"p1", {"C", "E", "G"}}, {"p2", {"C", "E", "G"}}};
    auto at = [](const std::string &v, const std::string &p) {
        return std::string(v[0] == 't' ? "truck-at(" : "plane-at(") + v + "," + p + ")";
    };
    for (const auto &v : vehicles) {
        std::vector<std::string> values;
        for (const auto &p : reach.at(v))
            values.push_back(at(v, p));
        b.variable(values);
    }
    b.init({"box-at(B)", at("t1", "A"), at("t2", "D"), at("t3", "E"), at("p1", "C"), at("p2", "E")});
    b.goal({"box-at(F)"});

    for (const auto &v : vehicles) {
        const auto &stops = reach.at(v);
        for (const auto &from : stops) {
            for (const auto &to : stops) {
                if (from != to)
                    b.op((v[0] == 't' ? "drive-" : "fly-") + v + "-" + from + "-" + to, {at(v, from)}, {at(v, to)});
            }
        }
        for (const auto &p : stops) {
            b.op("load-" + v + "-" + p, {at(v, p), "box-at(" + p + ")"}, {"box-in(" + v + ")"});
            b.op("unload-" + v + "-" + p, {at(v, p), "box-in(" + v + ")"}, {"box-at(" + p + ")"});
        }
    }
    b.metric(Metric::unit);
    return b.build();
}

// Gridworld with rows 0-5 and columns 0-8, 8-connected unit-cost moves,
// start (0,5), goal cells (5,3) and (4,7). Reaching a goal cell and then
// taking the free `finish` step completes the task.
struct Grid {
    Task task;
    std::map<std::pair<int, int>, double> h;
    std::map<std::pair<int, int>, int> cell_value;

    Evaluation evaluate(const State &state) const {
        Evaluation e;
        if (state[1] == 1)
            return e;
        for (const auto &[cell, value] : cell_value) {
            if (value == state[0]) {
                e.h = h.at(cell);
                break;
            }
        }
        return e;
    }
};

inline Grid grid_task() {
    Grid grid;
    const std::map<int, std::map<int, double>> rows{
        {0, {{0, 3.8}, {1, 3.8}, {2, 3.8}, {3, 3.8}, {4, 3.8}, {5, 4.0}, {6, 4.0}, {7, 4.0}}},
        {1, {{0, 3.4}, {1, 3.4}, {2, 3.4}, {3, 3.4}, {7, 3.0}, {8, 3.0}}},
        {2, {{0, 2.6}, {1, 2.6}, {2, 2.6}, {3, 2.6}, {4, 2.6}, {5, 1.9}, {6, 2.0}, {7, 2.0}, {8, 2.0}}},
        {3, {{0, 2.6}, {1, 1.8}, {2, 1.8}, {3, 1.8}, {4, 1.8}, {5, 1.9}, {6, 1.0}, {7, 1.0}, {8, 1.0}}},
        {4, {{0, 2.6}, {1, 1.8}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.9}, {6, 1.0}, {7, 0.0}, {8, 1.0}}},
        {5, {{0, 2.6}, {1, 1.8}, {2, 1.0}, {3, 0.0}, {4, 1.0}, {5, 1.9}, {6, 1.0}, {7, 1.0}, {8, 1.0}}}};
    auto name = [](int r, int c) { return "at(" + std::to_string(r) + "," + std::to_string(c) + ")"; };

    TaskBuilder b;
    std::vector<std::string> cells;
    for (const auto &[r, row] : rows) {
        for (const auto &[c, value] : row) {
            grid.h[{r, c}] = value;
            grid.cell_value[{r, c}] = static_cast<int>(cells.size());
            cells.push_back(name(r, c));
        }
    }
    b.variable(cells);
    b.variable({"done(no)", "done(yes)"});
    b.init({name(0, 5), "done(no)"});
    b.goal({"done(yes)"});
    for (const auto &[cell, value] : grid.cell_value) {
        auto [r, c] = cell;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if ((dr != 0 || dc != 0) && grid.h.contains({r + dr, c + dc}))
                    b.op("move-" + std::to_string(r) + "-" + std::to_string(c) + "-" + std::to_string(r + dr) + "-" +
                             std::to_string(c + dc),
                         {name(r, c), "done(no)"}, {name(r + dr, c + dc)});
            }
        }
    }
    b.op("finish-5-3", {name(5, 3), "done(no)"}, {"done(yes)"}, 0);
    b.op("finish-4-7", {name(4, 7), "done(no)"}, {"done(yes)"}, 0);
    b.metric(Metric::general);
    grid.task = b.build();
    return grid;
}

struct RandomTaskParams {
    int max_variables = 5;
    int max_domain = 4;
    int max_operators = 10;
    int max_goals = 3;
    int max_cost = 5;
    bool unit_costs = false;
    double conditional_effect_rate = 0.15;
};

inline Task random_task(std::mt19937 &rng, const RandomTaskParams &params = {}) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    static const char *predicates[] = {"at", "in", "on"};

    Task task;
    int num_vars = uniform(1, params.max_variables);
    for (int v = 0; v < num_vars; ++v) {
        Variable var;
        int size = uniform(2, params.max_domain);
        for (int d = 0; d < size; ++d)
            var.fact_names.push_back(std::string(predicates[uniform(0, 2)]) + "(v" + std::to_string(v) + "," +
                                     std::to_string(d) + ")");
        task.variables.push_back(std::move(var));
    }
    auto random_value = [&](int v) { return uniform(0, task.variables[static_cast<std::size_t>(v)].domain_size() - 1); };
    auto random_assignment = [&](int max_size) {
        std::vector<int> vars(static_cast<std::size_t>(num_vars));
        std::iota(vars.begin(), vars.end(), 0);
        std::shuffle(vars.begin(), vars.end(), rng);
        int size = uniform(0, std::min(max_size, num_vars));
        PartialAssignment facts;
        for (int i = 0; i < size; ++i)
            facts.push_back({vars[static_cast<std::size_t>(i)], random_value(vars[static_cast<std::size_t>(i)])});
        return facts;
    };

    std::vector<int> init;
    for (int v = 0; v < num_vars; ++v)
        init.push_back(random_value(v));
    task.initial_state = State(init);

    task.goal = random_assignment(params.max_goals);
    if (task.goal.empty())
        task.goal.push_back({0, random_value(0)});

    int num_ops = uniform(1, params.max_operators);
    for (int o = 0; o < num_ops; ++o) {
        Operator op;
        op.name = "op" + std::to_string(o);
        op.cost = params.unit_costs ? 1 : uniform(0, params.max_cost);
        op.preconditions = random_assignment(2);
        PartialAssignment targets = random_assignment(2);
        if (targets.empty())
            targets.push_back({uniform(0, num_vars - 1), 0});
        for (Fact &t : targets)
            t.value = random_value(t.var);
        for (const Fact &t : targets) {
            Effect eff;
            eff.var = t.var;
            eff.value = t.value;
            if (chance(params.conditional_effect_rate)) {
                int cv = uniform(0, num_vars - 1);
                eff.conditions.push_back({cv, random_value(cv)});
            }
            op.effects.push_back(std::move(eff));
        }
        task.operators.push_back(std::move(op));
    }
    task.metric = params.unit_costs ? Metric::unit : Metric::general;
    return task;
}

// Keeps drawing until the predicate accepts a task.
template <typename Accept>
Task random_task_where(std::mt19937 &rng, const RandomTaskParams &params, Accept accept) {
    for (;;) {
        Task task = random_task(rng, params);
        if (accept(task))
            return task;
    }
}

inline bool is_solvable(const Task &task) { return StateSpace(task).solvable(); }

// Solvable, but the goal does not already hold initially.
inline bool needs_plan(const Task &task) {
    return !task.initial_state.satisfies(task.goal) && is_solvable(task);
}

// Solvable, and every plan has at least `steps` steps.
inline auto needs_plan_of_length(int steps) {
    return [steps](const Task &task) {
        StateSpace space(task);
        return space.solvable() && space.goal_distance(0) >= steps;
    };
}

}  // namespace lama::testing
