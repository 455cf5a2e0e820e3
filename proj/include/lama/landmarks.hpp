#pragma once

// Landmark extraction by back-chaining from the goals over restricted relaxed
// planning graphs, plus DTG cut-node landmarks.

#include "dtg.hpp"
#include "landmark_graph.hpp"
#include "task.hpp"

#include <deque>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace lama {

// Effects of one operator that may add a fact of the target landmark.
struct PossibleAchiever {
    int op = 0;
    std::vector<int> effects;
};

struct RRPG {
    Landmark target;
    std::vector<char> reachable;  // indexed by FactIndex id
    std::vector<PossibleAchiever> achievers;

    bool is_reachable(const FactIndex &facts, const Fact &fact) const {
        return reachable[static_cast<std::size_t>(facts.id(fact))] != 0;
    }
};

inline RRPG build_rrpg(const Task &task, const Landmark &target) {
    FactIndex facts(task);
    RRPG rrpg;
    rrpg.target = target;
    rrpg.reachable.assign(static_cast<std::size_t>(facts.size()), 0);

    struct Unary {
        std::vector<int> pre;
        int target;
    };
    std::vector<Unary> unaries;
    for (const Operator &op : task.operators) {
        bool adds_unconditionally = std::any_of(op.effects.begin(), op.effects.end(), [&](const Effect &e) {
            return e.conditions.empty() && target.contains(e.fact());
        });
        if (adds_unconditionally)
            continue;
        for (const Effect &eff : op.effects) {
            if (target.contains(eff.fact()))
                continue;
            auto pre = merge_assignments(op.preconditions, eff.conditions);
            if (!pre)
                continue;
            Unary unary{{}, facts.id(eff.fact())};
            for (const Fact &f : *pre)
                unary.pre.push_back(facts.id(f));
            unaries.push_back(std::move(unary));
        }
    }

    std::vector<std::vector<int>> waiting(static_cast<std::size_t>(facts.size()));
    std::vector<int> unsatisfied(unaries.size());
    std::vector<int> frontier;
    auto reach = [&](int fact) {
        if (!rrpg.reachable[static_cast<std::size_t>(fact)]) {
            rrpg.reachable[static_cast<std::size_t>(fact)] = 1;
            frontier.push_back(fact);
        }
    };
    for (std::size_t u = 0; u < unaries.size(); ++u) {
        unsatisfied[u] = static_cast<int>(unaries[u].pre.size());
        for (int f : unaries[u].pre)
            waiting[static_cast<std::size_t>(f)].push_back(static_cast<int>(u));
    }
    for (int var = 0; var < task.num_variables(); ++var)
        reach(facts.id({var, task.initial_state[var]}));
    for (const Unary &unary : unaries) {
        if (unary.pre.empty())
            reach(unary.target);
    }
    while (!frontier.empty()) {
        int fact = frontier.back();
        frontier.pop_back();
        for (int u : waiting[static_cast<std::size_t>(fact)]) {
            if (--unsatisfied[static_cast<std::size_t>(u)] == 0)
                reach(unaries[static_cast<std::size_t>(u)].target);
        }
    }

    for (int o = 0; o < task.num_operators(); ++o) {
        const Operator &op = task.operators[static_cast<std::size_t>(o)];
        PossibleAchiever achiever{o, {}};
        for (int e = 0; e < static_cast<int>(op.effects.size()); ++e) {
            const Effect &eff = op.effects[static_cast<std::size_t>(e)];
            if (!target.contains(eff.fact()))
                continue;
            auto pre = merge_assignments(op.preconditions, eff.conditions);
            if (!pre)
                continue;
            bool reachable = std::all_of(pre->begin(), pre->end(),
                                         [&](const Fact &f) { return rrpg.is_reachable(facts, f); });
            if (reachable)
                achiever.effects.push_back(e);
        }
        if (!achiever.effects.empty())
            rrpg.achievers.push_back(std::move(achiever));
    }
    return rrpg;
}

struct SharedPreconditions {
    std::vector<Fact> facts;
    std::vector<std::vector<Fact>> disjunctions;
};

// Every (operator, effect) pair of the achiever set counts as one way of
// first achieving the target.
inline SharedPreconditions shared_and_disjunctive_preconditions(const Task &task, const RRPG &rrpg) {
    std::vector<PartialAssignment> extended;
    for (const PossibleAchiever &achiever : rrpg.achievers) {
        const Operator &op = task.operators[static_cast<std::size_t>(achiever.op)];
        for (int e : achiever.effects)
            extended.push_back(*merge_assignments(op.preconditions, op.effects[static_cast<std::size_t>(e)].conditions));
    }

    SharedPreconditions result;
    if (extended.empty())
        return result;

    result.facts = extended.front();
    for (std::size_t i = 1; i < extended.size(); ++i) {
        std::vector<Fact> kept;
        std::set_intersection(result.facts.begin(), result.facts.end(), extended[i].begin(), extended[i].end(),
                              std::back_inserter(kept));
        result.facts = std::move(kept);
    }

    std::map<std::string, std::set<Fact>, std::less<>> buckets;
    std::map<std::string, std::size_t, std::less<>> covered;
    for (const PartialAssignment &pre : extended) {
        std::set<std::string_view> seen;
        for (const Fact &f : pre) {
            std::string_view predicate = task.predicate(f);
            std::string key(predicate);
            buckets[key].insert(f);
            if (seen.insert(predicate).second)
                ++covered[key];
        }
    }
    std::set<std::vector<Fact>> unique;
    for (const auto &[predicate, members] : buckets) {
        if (covered[predicate] != extended.size())
            continue;
        if (members.size() < 2 || members.size() > 4)
            continue;
        std::vector<Fact> candidate(members.begin(), members.end());
        bool true_initially = std::any_of(candidate.begin(), candidate.end(),
                                          [&](const Fact &f) { return task.initial_state.satisfies(f); });
        if (true_initially)
            continue;
        unique.insert(std::move(candidate));
    }
    result.disjunctions.assign(unique.begin(), unique.end());
    return result;
}

// Values of the landmark's variable that every DTG path from the initial
// value to the landmark value must visit, considering only values reachable
// in the restricted relaxation.
inline std::vector<Fact> dtg_landmarks(const Task &task, const DomainTransitionGraph &dtg, const Fact &landmark,
                                       const RRPG &rrpg) {
    FactIndex facts(task);
    const int var = landmark.var;
    const int start = task.initial_state[var];
    auto succ = dtg.successors();
    std::vector<char> allowed(static_cast<std::size_t>(dtg.num_values), 0);
    for (int d = 0; d < dtg.num_values; ++d)
        allowed[static_cast<std::size_t>(d)] = d == landmark.value || rrpg.is_reachable(facts, {var, d});

    auto connected = [&](int removed) {
        std::vector<char> seen(static_cast<std::size_t>(dtg.num_values), 0);
        std::vector<int> stack{start};
        seen[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            int d = stack.back();
            stack.pop_back();
            if (d == landmark.value)
                return true;
            for (int next : succ[static_cast<std::size_t>(d)]) {
                auto n = static_cast<std::size_t>(next);
                if (next != removed && allowed[n] && !seen[n]) {
                    seen[n] = 1;
                    stack.push_back(next);
                }
            }
        }
        return false;
    };

    std::vector<Fact> result;
    if (start == landmark.value || !connected(-1))
        return result;
    for (int d = 0; d < dtg.num_values; ++d) {
        if (d == start || d == landmark.value || !allowed[static_cast<std::size_t>(d)])
            continue;
        if (!connected(d))
            result.push_back({var, d});
    }
    return result;
}

inline std::vector<Fact> dtg_landmarks(const Task &task, const Fact &landmark, const RRPG &rrpg) {
    return dtg_landmarks(task, build_dtg(task, landmark.var), landmark, rrpg);
}

namespace detail {

class LandmarkBuilder {
public:
    explicit LandmarkBuilder(const Task &task) : task_(task) {}

    bool alive(int id) const { return alive_[static_cast<std::size_t>(id)] != 0; }
    const Landmark &landmark(int id) const { return landmarks_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(landmarks_.size()); }

    std::optional<int> find(const Fact &fact) const {
        auto it = by_fact_.find(fact);
        if (it == by_fact_.end())
            return std::nullopt;
        return it->second;
    }

    // Returns the id of the admitted landmark, or nullopt if it was dropped.
    std::optional<int> add(const Landmark &candidate, std::deque<int> &queue) {
        if (!candidate.disjunctive()) {
            auto holder = find(candidate.facts.front());
            if (holder && landmark(*holder).disjunctive())
                evict(*holder);
        }
        if (auto holder = find(candidate.facts.front()); holder && landmark(*holder) == candidate)
            return holder;
        for (const Fact &f : candidate.facts) {
            if (find(f))
                return std::nullopt;
        }
        int id = size();
        landmarks_.push_back(candidate);
        alive_.push_back(1);
        achievers_.emplace_back();
        for (const Fact &f : candidate.facts)
            by_fact_[f] = id;
        queue.push_back(id);
        return id;
    }

    void add_ordering(int from, int to, OrderingType type) {
        if (from == to || !alive(from) || !alive(to))
            return;
        auto [it, inserted] = arcs_.emplace(std::pair{from, to}, type);
        if (!inserted && ordering_strength(type) > ordering_strength(it->second))
            it->second = type;
    }

    void set_achievers(int id, std::vector<int> ops) { achievers_[static_cast<std::size_t>(id)] = std::move(ops); }

    LandmarkGraph finish() const {
        LandmarkGraph graph;
        std::vector<int> remap(landmarks_.size(), -1);
        for (int id = 0; id < size(); ++id) {
            if (!alive(id))
                continue;
            LandmarkNode node;
            node.landmark = landmark(id);
            node.goal = std::any_of(node.landmark.facts.begin(), node.landmark.facts.end(), [&](const Fact &f) {
                return std::find(task_.goal.begin(), task_.goal.end(), f) != task_.goal.end();
            });
            node.first_achievers = achievers_[static_cast<std::size_t>(id)];
            node.cost = landmark_cost(node);
            remap[static_cast<std::size_t>(id)] = graph.add_landmark(std::move(node));
        }
        for (const auto &[key, type] : arcs_)
            graph.add_ordering(remap[static_cast<std::size_t>(key.first)], remap[static_cast<std::size_t>(key.second)],
                               type);
        return graph;
    }

private:
    void evict(int id) {
        alive_[static_cast<std::size_t>(id)] = 0;
        for (const Fact &f : landmark(id).facts)
            by_fact_.erase(f);
        std::erase_if(arcs_, [id](const auto &arc) { return arc.first.first == id || arc.first.second == id; });
    }

    // Cheapest recorded first achiever; without one, the cheapest operator
    // adding a fact of the landmark, and failing that the cheapest operator.
    int landmark_cost(const LandmarkNode &node) const {
        const int none = std::numeric_limits<int>::max();
        auto cheapest = [&](auto &&accept) {
            int best = none;
            for (int o = 0; o < task_.num_operators(); ++o) {
                if (accept(o))
                    best = std::min(best, task_.operators[static_cast<std::size_t>(o)].cost);
            }
            return best;
        };
        int cost = none;
        for (int o : node.first_achievers)
            cost = std::min(cost, task_.operators[static_cast<std::size_t>(o)].cost);
        if (cost == none) {
            cost = cheapest([&](int o) {
                const auto &effects = task_.operators[static_cast<std::size_t>(o)].effects;
                return std::any_of(effects.begin(), effects.end(),
                                   [&](const Effect &e) { return node.landmark.contains(e.fact()); });
            });
        }
        if (cost == none)
            cost = cheapest([](int) { return true; });
        return cost == none ? 0 : cost;
    }

    const Task &task_;
    std::vector<Landmark> landmarks_;
    std::vector<char> alive_;
    std::vector<std::vector<int>> achievers_;
    std::map<Fact, int> by_fact_;
    std::map<std::pair<int, int>, OrderingType> arcs_;
};

}  // namespace detail

inline LandmarkGraph extract_landmark_graph(const Task &task) {
    FactIndex facts(task);
    detail::LandmarkBuilder builder(task);
    std::deque<int> queue;
    std::map<int, DomainTransitionGraph> dtgs;
    std::map<Fact, std::vector<int>> potential;  // fact -> landmarks it cannot precede

    for (const Fact &g : task.goal)
        builder.add(Landmark{{g}}, queue);

    while (!queue.empty()) {
        int psi = queue.front();
        queue.pop_front();
        if (!builder.alive(psi))
            continue;
        const Landmark target = builder.landmark(psi);
        if (target.true_in(task.initial_state))
            continue;

        RRPG rrpg = build_rrpg(task, target);
        std::vector<int> achiever_ops;
        for (const PossibleAchiever &a : rrpg.achievers)
            achiever_ops.push_back(a.op);
        builder.set_achievers(psi, achiever_ops);

        for (int f = 0; f < facts.size(); ++f) {
            Fact fact = facts.fact(f);
            if (!rrpg.reachable[static_cast<std::size_t>(f)] && !target.contains(fact))
                potential[fact].push_back(psi);
        }
        if (rrpg.achievers.empty())
            continue;

        SharedPreconditions shared = shared_and_disjunctive_preconditions(task, rrpg);
        for (const Fact &f : shared.facts) {
            if (auto id = builder.add(Landmark{{f}}, queue))
                builder.add_ordering(*id, psi, OrderingType::greedy_necessary);
            if (!builder.alive(psi))
                break;
        }
        for (const auto &disjunction : shared.disjunctions) {
            if (!builder.alive(psi))
                break;
            if (auto id = builder.add(Landmark{disjunction}, queue))
                builder.add_ordering(*id, psi, OrderingType::greedy_necessary);
        }
        if (!builder.alive(psi) || target.disjunctive())
            continue;

        const Fact &fact = target.facts.front();
        auto dtg = dtgs.find(fact.var);
        if (dtg == dtgs.end())
            dtg = dtgs.emplace(fact.var, build_dtg(task, fact.var)).first;
        for (const Fact &f : dtg_landmarks(task, dtg->second, fact, rrpg)) {
            if (auto id = builder.add(Landmark{{f}}, queue))
                builder.add_ordering(*id, psi, OrderingType::natural);
            if (!builder.alive(psi))
                break;
        }
    }

    for (const auto &[fact, predecessors] : potential) {
        auto id = builder.find(fact);
        if (!id || builder.landmark(*id).disjunctive())
            continue;
        for (int psi : predecessors)
            builder.add_ordering(psi, *id, OrderingType::natural);
    }
    return builder.finish();
}

}  // namespace lama
