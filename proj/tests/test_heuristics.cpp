#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace lama;
using namespace lama::testing;

namespace {

constexpr CostMode all_modes[] = {CostMode::ignore, CostMode::pure, CostMode::plus_one};

// a -> b -> c along one variable, with a distractor operator elsewhere.
Task two_step_chain() {
    TaskBuilder b;
    b.variable({"pos(a)", "pos(b)", "pos(c)"});
    b.variable({"lamp(off)", "lamp(on)"});
    b.init({"pos(a)", "lamp(off)"});
    b.goal({"pos(c)"});
    b.op("switch", {}, {"lamp(on)"});
    b.op("ab", {"pos(a)"}, {"pos(b)"});
    b.op("bc", {"pos(b)"}, {"pos(c)"});
    return b.build();
}

}  // namespace

TEST(LandmarkStatus, EmptyGraphAcceptsNothing) {
    Task task = tiny_task();
    LandmarkGraph graph;
    LandmarkStatus status = lm_status_update(graph, nullptr, task.initial_state);
    EXPECT_EQ(status.count(), 0);
    EXPECT_EQ(lm_count(graph, status, task.initial_state, task.goal, CostMode::ignore), (HValue{0, 0}));
}

TEST(LandmarkStatus, SmallTaskAcceptanceAlongThePlan) {
    Task task = tiny_task();
    LandmarkGraph graph = extract_landmark_graph(task);
    LandmarkStatus s0 = lm_status_update(graph, nullptr, task.initial_state);
    EXPECT_EQ(s0.accepted, (std::vector<char>{0, 0, 1}));
    State s1 = apply(task.operators[0], task.initial_state);
    LandmarkStatus after = lm_status_update(graph, &s0, s1);
    EXPECT_EQ(after.accepted, (std::vector<char>{0, 1, 1}));
}

TEST(LandmarkStatus, PredecessorMustBeAcceptedInParent) {
    Task task = tiny_task();
    LandmarkGraph graph = extract_landmark_graph(task);
    LandmarkStatus none;
    none.accepted.assign(3, 0);
    LandmarkStatus status = lm_status_update(graph, &none, State({1}));
    EXPECT_FALSE(status.is_accepted(1));
}

TEST(LandmarkCount, SmallTaskValuesPerMode) {
    Task task = tiny_task();
    LandmarkGraph graph = extract_landmark_graph(task);
    LandmarkStatus status = lm_status_update(graph, nullptr, task.initial_state);
    EXPECT_EQ(lm_count(graph, status, task.initial_state, task.goal, CostMode::ignore).value, 2);
    EXPECT_EQ(lm_count(graph, status, task.initial_state, task.goal, CostMode::pure), (HValue{5, 2}));
    EXPECT_EQ(lm_count(graph, status, task.initial_state, task.goal, CostMode::plus_one).value, 7);
}

TEST(LandmarkCount, ZeroWhenEverythingAcceptedAndGoalsHold) {
    Task task = tiny_task();
    LandmarkGraph graph = extract_landmark_graph(task);
    LandmarkStatus status;
    status.accepted.assign(3, 1);
    EXPECT_EQ(lm_count(graph, status, State({2}), task.goal, CostMode::plus_one).value, 0);
}

TEST(LandmarkCount, AcceptedGoalThatWasUndoneIsRequiredAgain) {
    TaskBuilder b;
    b.variable({"v(0)", "v(1)"});
    b.init({"v(0)"});
    b.goal({"v(1)"});
    b.op("up", {}, {"v(1)"});
    b.op("down", {}, {"v(0)"});
    Task task = b.build();
    LandmarkGraph graph = extract_landmark_graph(task);
    LandmarkStatus s0 = lm_status_update(graph, nullptr, task.initial_state);
    LandmarkStatus s1 = lm_status_update(graph, &s0, State({1}));
    LandmarkStatus s2 = lm_status_update(graph, &s1, State({0}));
    EXPECT_EQ(s2.count(), s1.count());
    EXPECT_EQ(lm_count(graph, s1, State({1}), task.goal, CostMode::ignore).value, 0);
    EXPECT_EQ(lm_count(graph, s2, State({0}), task.goal, CostMode::ignore).value, 1);
}

TEST(LandmarkCount, NonZeroAtGoalStateWhenLandmarksWereSkipped) {
    TaskBuilder b;
    b.variable({"v(0)", "v(1)", "v(2)"});
    b.init({"v(0)"});
    b.goal({"v(2)"});
    b.op("step", {"v(0)"}, {"v(1)"});
    b.op("finish", {"v(1)"}, {"v(2)"});
    Task task = b.build();
    LandmarkGraph graph = extract_landmark_graph(task);
    LandmarkStatus fresh;
    fresh.accepted.assign(static_cast<std::size_t>(graph.size()), 0);
    LandmarkStatus jumped = lm_status_update(graph, &fresh, State({2}));
    EXPECT_GT(lm_count(graph, jumped, State({2}), task.goal, CostMode::ignore).value, 0);
}

TEST(LandmarkPreferred, SmallTaskPrefersFirstStep) {
    Task task = tiny_task();
    LandmarkGraph graph = extract_landmark_graph(task);
    LandmarkCountHeuristic h(task, graph, CostMode::plus_one);
    LandmarkStatus status = h.status(nullptr, task.initial_state);
    EXPECT_EQ(h.preferred_operators(status, task.initial_state), std::vector<int>{0});
}

TEST(LandmarkPreferred, FallsBackToRelaxedPlanTowardsNearestLandmark) {
    Task task = two_step_chain();
    LandmarkGraph graph;
    graph.add_landmark({Landmark{{{0, 2}}}, true, {2}, 1});
    LandmarkCountHeuristic h(task, graph, CostMode::ignore);
    LandmarkStatus status = h.status(nullptr, task.initial_state);
    EXPECT_EQ(h.preferred_operators(status, task.initial_state), std::vector<int>{1});
}

TEST(LandmarkPreferred, NothingWhenNoAcceptableLandmarkIsReachable) {
    TaskBuilder b;
    b.variable({"v(0)", "v(1)", "v(2)"});
    b.init({"v(0)"});
    b.goal({"v(2)"});
    b.op("noop", {"v(1)"}, {"v(0)"});
    Task task = b.build();
    LandmarkGraph graph;
    graph.add_landmark({Landmark{{{0, 2}}}, true, {}, 1});
    LandmarkCountHeuristic h(task, graph, CostMode::ignore);
    EXPECT_TRUE(h.preferred_operators(h.status(nullptr, task.initial_state), task.initial_state).empty());
}

TEST(FFAdd, GoalTrueGivesZero) {
    Task task = tiny_task();
    task.initial_state = State({2});
    for (CostMode mode : all_modes) {
        FFAddHeuristic h(task, mode);
        EvalResult r = h.evaluate(task.initial_state);
        EXPECT_EQ(r.h.value, 0);
        EXPECT_TRUE(r.preferred.empty());
    }
}

TEST(FFAdd, SmallTaskForwardCosts) {
    Task task = tiny_task();
    auto pure = ffadd_explore(task, task.initial_state, CostMode::pure);
    EXPECT_EQ(pure.fact_cost[1].cost, 2);
    EXPECT_EQ(pure.fact_cost[2].cost, 5);
    auto plus = ffadd_explore(task, task.initial_state, CostMode::plus_one);
    EXPECT_EQ(plus.fact_cost[1].cost, 3);
    EXPECT_EQ(plus.fact_cost[2].cost, 7);
    EXPECT_EQ(plus.best_support[0], -1);
    EXPECT_EQ(plus.best_support[2], 1);
}

TEST(FFAdd, SmallTaskValuesAndPreferred) {
    Task task = tiny_task();
    auto exploration = ffadd_explore(task, task.initial_state, CostMode::ignore);
    RelaxedPlan plan;
    EvalResult r = ffadd_value(exploration, task, task.initial_state, task.goal, CostMode::ignore, &plan);
    EXPECT_EQ(r.h.value, 2);
    EXPECT_EQ(plan.operators, (std::vector<int>{0, 1}));
    EXPECT_EQ(r.preferred, std::vector<int>{0});
    FFAddHeuristic pure(task, CostMode::pure);
    EXPECT_EQ(pure.evaluate(task.initial_state).h, (HValue{5, 2}));
}

TEST(FFAdd, UnreachableGoalIsDeadEnd) {
    TaskBuilder b;
    b.variable({"v(0)", "v(1)"});
    b.init({"v(0)"});
    b.goal({"v(1)"});
    Task task = b.build();
    FFAddHeuristic h(task, CostMode::plus_one);
    EvalResult r = h.evaluate(task.initial_state);
    EXPECT_TRUE(r.dead_end());
    EXPECT_TRUE(r.preferred.empty());
}

TEST(FFAdd, SplitEffectsOfOneOperatorCountOnce) {
    TaskBuilder b;
    b.variable({"a(0)", "a(1)"});
    b.variable({"b(0)", "b(1)"});
    b.init({"a(0)", "b(0)"});
    b.goal({"a(1)", "b(1)"});
    b.op("both", {}, {"a(1)", "b(1)"}, 4);
    Task task = b.build();
    FFAddHeuristic h(task, CostMode::pure);
    EXPECT_EQ(h.evaluate(task.initial_state).h, (HValue{4, 1}));
    auto exploration = ffadd_explore(task, task.initial_state, CostMode::pure);
    EXPECT_EQ(exploration.fact_cost[3].cost, 4);
}

TEST(FFAdd, EqualCostSupportsPreferLowerOperatorIndex) {
    TaskBuilder b;
    b.variable({"v(0)", "v(1)"});
    b.init({"v(0)"});
    b.goal({"v(1)"});
    b.op("first", {}, {"v(1)"});
    b.op("second", {}, {"v(1)"});
    Task task = b.build();
    FFAddHeuristic h(task, CostMode::ignore);
    EXPECT_EQ(h.evaluate(task.initial_state).preferred, std::vector<int>{0});
}

TEST(FFAddProperties, ForwardCostsMatchBellmanFixpoint) {
    std::mt19937 rng(123);
    RandomTaskParams params;
    params.max_variables = 4;
    params.max_domain = 3;
    for (int round = 0; round < 200; ++round) {
        Task task = random_task(rng, params);
        FactIndex facts(task);
        for (const State &state : random_walk_states(task, rng, 3)) {
            for (CostMode mode : all_modes) {
                auto expected = bellman_fact_costs(task, state, mode);
                auto exploration = ffadd_explore(task, state, mode);
                for (int f = 0; f < facts.size(); ++f) {
                    auto it = expected.find(facts.fact(f));
                    const RelaxedCost &got = exploration.fact_cost[static_cast<std::size_t>(f)];
                    if (it == expected.end()) {
                        EXPECT_TRUE(got.is_infinite());
                    } else {
                        EXPECT_EQ(got.cost, it->second.first) << serialize_task(task);
                        EXPECT_EQ(got.distance, it->second.second);
                    }
                }
            }
        }
    }
}

TEST(FFAddProperties, RelaxedPlansAchieveGoalsAndDeadEndsMatchReachability) {
    std::mt19937 rng(321);
    for (int round = 0; round < 200; ++round) {
        Task task = random_task(rng);
        for (const State &state : random_walk_states(task, rng, 4)) {
            for (CostMode mode : all_modes) {
                RelaxedExploration exploration = ffadd_explore(task, state, mode);
                RelaxedPlan plan;
                EvalResult r = ffadd_value(exploration, task, state, task.goal, mode, &plan);
                EXPECT_EQ(r.dead_end(), !relaxed_goal_reachable(task, state)) << serialize_task(task);
                if (r.dead_end())
                    continue;
                auto closure = relaxed_closure(task, state, plan.operators);
                for (const Fact &g : task.goal)
                    EXPECT_TRUE(closure.contains(g)) << serialize_task(task);
                for (int o : r.preferred)
                    EXPECT_TRUE(applicable(task.operators[static_cast<std::size_t>(o)], state));
            }
        }
    }
}

TEST(HeuristicProperties, UnitCostModesAgree) {
    std::mt19937 rng(55);
    RandomTaskParams params;
    params.unit_costs = true;
    for (int round = 0; round < 100; ++round) {
        Task task = random_task(rng, params);
        LandmarkGraph graph = build_landmark_graph(task);
        FFAddHeuristic ignore(task, CostMode::ignore);
        FFAddHeuristic pure(task, CostMode::pure);
        FFAddHeuristic plus(task, CostMode::plus_one);
        std::vector<State> states = random_walk_states(task, rng, 5);
        LandmarkStatus status = lm_status_update(graph, nullptr, states.front());
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (i > 0)
                status = lm_status_update(graph, &status, states[i]);
            HValue hi = ignore.evaluate(states[i]).h;
            HValue hp = pure.evaluate(states[i]).h;
            HValue h1 = plus.evaluate(states[i]).h;
            EXPECT_EQ(hi.value, hp.value);
            if (!hi.is_infinite()) {
                EXPECT_EQ(h1.value, 2 * hi.value);
            }
            EXPECT_EQ(lm_count(graph, status, states[i], task.goal, CostMode::ignore).value,
                      lm_count(graph, status, states[i], task.goal, CostMode::pure).value);
        }
    }
}

TEST(HeuristicProperties, AcceptedLandmarksOnlyGrowAlongPaths) {
    std::mt19937 rng(8);
    for (int round = 0; round < 200; ++round) {
        Task task = random_task(rng);
        LandmarkGraph graph = build_landmark_graph(task);
        std::vector<State> states = random_walk_states(task, rng, 8);
        LandmarkStatus parent = lm_status_update(graph, nullptr, states.front());
        for (std::size_t i = 1; i < states.size(); ++i) {
            LandmarkStatus child = lm_status_update(graph, &parent, states[i]);
            for (int id = 0; id < graph.size(); ++id) {
                if (parent.is_accepted(id)) {
                    EXPECT_TRUE(child.is_accepted(id));
                }
            }
            parent = child;
        }
    }
}
