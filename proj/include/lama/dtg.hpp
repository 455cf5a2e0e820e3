#pragma once

#include "task.hpp"

#include <set>
#include <utility>
#include <vector>

namespace lama {

// Domain transition graph of one variable.
struct DomainTransitionGraph {
    int var = 0;
    int num_values = 0;
    std::set<std::pair<int, int>> arcs;

    std::vector<std::vector<int>> successors() const {
        std::vector<std::vector<int>> succ(static_cast<std::size_t>(num_values));
        for (auto [from, to] : arcs)
            succ[static_cast<std::size_t>(from)].push_back(to);
        return succ;
    }
};

// Arc (d, d') iff d != d' and some effect sets var to d' under a condition
// pre ∪ cond that either requires var = d or says nothing about var.
// Contradictory conditions never fire and contribute no arcs.
inline DomainTransitionGraph build_dtg(const Task &task, int var) {
    DomainTransitionGraph dtg;
    dtg.var = var;
    dtg.num_values = task.variables[static_cast<std::size_t>(var)].domain_size();
    for (const Operator &op : task.operators) {
        for (const Effect &eff : op.effects) {
            if (eff.var != var)
                continue;
            auto condition = merge_assignments(op.preconditions, eff.conditions);
            if (!condition)
                continue;
            auto on_var = std::find_if(condition->begin(), condition->end(),
                                       [var](const Fact &f) { return f.var == var; });
            if (on_var != condition->end()) {
                if (on_var->value != eff.value)
                    dtg.arcs.emplace(on_var->value, eff.value);
            } else {
                for (int d = 0; d < dtg.num_values; ++d) {
                    if (d != eff.value)
                        dtg.arcs.emplace(d, eff.value);
                }
            }
        }
    }
    return dtg;
}

}  // namespace lama
