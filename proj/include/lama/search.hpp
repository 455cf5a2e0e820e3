#pragma once

// Best-first search over FDR states with up to two heuristics, each feeding a
// regular and a preferred-operator open list. Queues are served by integer
// priority; progress on either heuristic boosts the preferred queues.

#include "heuristic.hpp"
#include "landmark_graph.hpp"
#include "landmark_heuristic.hpp"
#include "relaxation.hpp"
#include "task.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <stop_token>
#include <unordered_map>

namespace lama {

// Heuristic estimate as seen by the search: a real-valued primary key, an
// integer secondary key and the preferred operators.
struct Evaluation {
    double h = 0.0;
    std::int64_t tiebreak = 0;
    bool dead_end = false;
    std::vector<int> preferred;

    static Evaluation from(const EvalResult &result) {
        Evaluation e;
        e.dead_end = result.dead_end();
        if (!e.dead_end) {
            e.h = static_cast<double>(result.h.value);
            e.tiebreak = result.h.tiebreak;
        }
        e.preferred = result.preferred;
        return e;
    }
};

using StateEvaluator = std::function<Evaluation(const State &)>;

struct SearchConfig {
    CostMode cost_mode = CostMode::plus_one;
    bool use_landmarks = true;
    bool preferred_operators = true;
    int boost = 1000;
    bool deferred_evaluation = true;
    std::vector<double> weights{10, 5, 3, 2, 1};
    // Replaces FF/add in the first heuristic slot when set.
    StateEvaluator primary_override;
};

struct SearchLimits {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::stop_token stop;

    bool expired() const {
        if (stop.stop_requested())
            return true;
        return deadline && std::chrono::steady_clock::now() >= *deadline;
    }

    static SearchLimits within(std::chrono::duration<double> budget) {
        SearchLimits limits;
        limits.deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget);
        return limits;
    }
};

enum QueueIndex { reg_ff = 0, pref_ff = 1, reg_lm = 2, pref_lm = 3 };
inline constexpr int num_queues = 4;

struct SearchStatistics {
    std::int64_t expansions = 0;
    std::int64_t evaluations = 0;
    std::int64_t generated = 0;
    std::int64_t reopened = 0;
    std::int64_t improvements = 0;
    std::int64_t boost_total = 0;  // boost applied per improvement, to every preferred queue
    bool landmark_status_built = false;
};

// Snapshot handed to an observer just before a queue is served.
struct PopEvent {
    std::array<int, num_queues> priorities{};
    std::array<bool, num_queues> available{};
    int served = 0;
};

using PopObserver = std::function<void(const PopEvent &)>;

enum class SearchStatus { solved, failed, timeout };

struct SearchResult {
    SearchStatus status = SearchStatus::failed;
    std::vector<int> plan;
    std::int64_t cost = 0;
    SearchStatistics statistics;

    bool solved() const { return status == SearchStatus::solved; }
};

namespace detail {

struct QueueKey {
    double primary = 0.0;
    std::int64_t secondary = 0;
    int tie_cost = 0;
    std::uint64_t seq = 0;

    friend auto operator<=>(const QueueKey &, const QueueKey &) = default;
};

struct QueueEntry {
    QueueKey key;
    int node = 0;
    int parent = -1;
    int op = -1;
    std::int64_t g = 0;

    friend bool operator>(const QueueEntry &a, const QueueEntry &b) { return a.key > b.key; }
};

using OpenList = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

struct SearchNode {
    State state;
    int parent = -1;
    int op = -1;
    std::int64_t g = std::numeric_limits<std::int64_t>::max();
    bool closed = false;
    std::optional<LandmarkStatus> status;
    std::optional<Evaluation> ff;
    std::optional<Evaluation> lm;
};

class BestFirstSearch {
public:
    // weight == nullopt selects greedy search; otherwise weighted A* with
    // reopening and pruning at `bound`.
    BestFirstSearch(const Task &task, const LandmarkGraph &graph, const SearchConfig &config,
                    std::optional<double> weight, std::int64_t bound, const SearchLimits &limits,
                    const PopObserver &observer)
        : task_(task), config_(config), weight_(weight), bound_(bound), limits_(limits), observer_(observer) {
        if (!config.primary_override)
            ff_.emplace(task, config.cost_mode);
        if (config.use_landmarks) {
            lm_.emplace(task, graph, config.cost_mode);
            stats_.landmark_status_built = true;
        }
    }

    SearchResult run() {
        SearchResult result;
        if (bound_ <= 0) {
            result.statistics = stats_;
            return result;
        }
        int root = lookup(task_.initial_state);
        SearchNode &node = nodes_[static_cast<std::size_t>(root)];
        node.g = 0;
        if (lm_)
            node.status = lm_->status(nullptr, node.state);
        initialise_best(root);

        std::optional<int> goal = expand(root);
        while (!goal) {
            if (limits_.expired()) {
                result.status = SearchStatus::timeout;
                result.statistics = stats_;
                return result;
            }
            int q = select_queue();
            if (q < 0)
                break;
            QueueEntry entry = queues_[static_cast<std::size_t>(q)].top();
            queues_[static_cast<std::size_t>(q)].pop();
            --priority_[static_cast<std::size_t>(q)];
            if (!admit(entry))
                continue;
            goal = expand(entry.node);
        }
        if (goal) {
            result.status = SearchStatus::solved;
            result.plan = trace(*goal);
            result.cost = nodes_[static_cast<std::size_t>(*goal)].g;
        }
        result.statistics = stats_;
        return result;
    }

private:
    bool greedy() const { return !weight_.has_value(); }

    int lookup(const State &state) {
        auto [it, inserted] = index_.try_emplace(state, static_cast<int>(nodes_.size()));
        if (inserted) {
            SearchNode node;
            node.state = state;
            nodes_.push_back(std::move(node));
        }
        return it->second;
    }

    // Decides whether a popped entry leads to an expansion.
    bool admit(const QueueEntry &entry) {
        SearchNode &node = nodes_[static_cast<std::size_t>(entry.node)];
        if (greedy()) {
            if (node.closed)
                return false;
            node.parent = entry.parent;
            node.op = entry.op;
            node.g = entry.g;
            return true;
        }
        if (entry.g != node.g || node.closed)
            return false;
        return true;
    }

    const Evaluation &evaluate_ff(int id) {
        SearchNode &node = nodes_[static_cast<std::size_t>(id)];
        if (!node.ff) {
            ++stats_.evaluations;
            node.ff = config_.primary_override ? config_.primary_override(node.state)
                                               : Evaluation::from(ff_->evaluate(node.state));
            if (!config_.preferred_operators)
                node.ff->preferred.clear();
        }
        return *node.ff;
    }

    const Evaluation &evaluate_lm(int id) {
        SearchNode &node = nodes_[static_cast<std::size_t>(id)];
        if (!node.lm)
            node.lm = Evaluation::from(lm_->evaluate(*node.status, node.state, config_.preferred_operators));
        return *node.lm;
    }

    void initialise_best(int root) {
        const Evaluation &ff = evaluate_ff(root);
        best_[0] = {ff.h, ff.tiebreak};
        if (lm_) {
            const Evaluation &lm = evaluate_lm(root);
            best_[1] = {lm.h, lm.tiebreak};
        }
    }

    void note_progress(int slot, const Evaluation &e) {
        std::pair<double, std::int64_t> value{e.h, e.tiebreak};
        if (e.dead_end || value >= best_[static_cast<std::size_t>(slot)])
            return;
        best_[static_cast<std::size_t>(slot)] = value;
        ++stats_.improvements;
        stats_.boost_total += config_.boost;
        priority_[pref_ff] += config_.boost;
        if (lm_)
            priority_[pref_lm] += config_.boost;
    }

    int select_queue() {
        int chosen = -1;
        for (int q = 0; q < num_queues; ++q) {
            if (queues_[static_cast<std::size_t>(q)].empty())
                continue;
            if (chosen < 0 || priority_[static_cast<std::size_t>(q)] > priority_[static_cast<std::size_t>(chosen)])
                chosen = q;
        }
        if (chosen >= 0 && observer_) {
            PopEvent event;
            for (int q = 0; q < num_queues; ++q) {
                event.priorities[static_cast<std::size_t>(q)] = priority_[static_cast<std::size_t>(q)];
                event.available[static_cast<std::size_t>(q)] = !queues_[static_cast<std::size_t>(q)].empty();
            }
            event.served = chosen;
            observer_(event);
        }
        return chosen;
    }

    double key_of(const Evaluation &e, std::int64_t g) const {
        return greedy() ? e.h : *weight_ * e.h + static_cast<double>(g);
    }

    std::optional<int> expand(int id) {
        nodes_[static_cast<std::size_t>(id)].closed = true;
        if (task_.is_goal_state(nodes_[static_cast<std::size_t>(id)].state))
            return id;
        ++stats_.expansions;

        const Evaluation ff = evaluate_ff(id);
        if (ff.dead_end)
            return std::nullopt;
        std::optional<Evaluation> lm;
        if (lm_)
            lm = evaluate_lm(id);
        note_progress(0, ff);
        if (lm)
            note_progress(1, *lm);

        std::vector<char> preferred(static_cast<std::size_t>(task_.num_operators()), 0);
        for (int o : ff.preferred)
            preferred[static_cast<std::size_t>(o)] = 1;
        if (lm) {
            for (int o : lm->preferred)
                preferred[static_cast<std::size_t>(o)] = 1;
        }

        const State parent_state = nodes_[static_cast<std::size_t>(id)].state;
        const std::int64_t parent_g = nodes_[static_cast<std::size_t>(id)].g;
        for (int o = 0; o < task_.num_operators(); ++o) {
            const Operator &op = task_.operators[static_cast<std::size_t>(o)];
            if (!applicable(op, parent_state))
                continue;
            std::int64_t g = parent_g + op.cost;
            if (!greedy() && g >= bound_)
                continue;
            int child = lookup(apply(op, parent_state));
            ++stats_.generated;
            if (!register_child(child, id, o, g))
                continue;

            Evaluation ff_key = ff;
            std::optional<Evaluation> lm_key = lm;
            if (!config_.deferred_evaluation) {
                ff_key = evaluate_ff(child);
                if (ff_key.dead_end)
                    continue;
                if (lm_)
                    lm_key = evaluate_lm(child);
            }
            push(reg_ff, ff_key, g, op.cost, child, id, o);
            if (lm_key)
                push(reg_lm, *lm_key, g, op.cost, child, id, o);
            if (preferred[static_cast<std::size_t>(o)]) {
                push(pref_ff, ff_key, g, op.cost, child, id, o);
                if (lm_key)
                    push(pref_lm, *lm_key, g, op.cost, child, id, o);
            }
        }
        return std::nullopt;
    }

    // Records a newly reached path; false if the successor is not worth queueing.
    bool register_child(int child, int parent, int op, std::int64_t g) {
        SearchNode &node = nodes_[static_cast<std::size_t>(child)];
        if (lm_ && !node.status)
            node.status = lm_->status(&*nodes_[static_cast<std::size_t>(parent)].status, node.state);
        if (greedy())
            return !node.closed;
        if (g >= node.g)
            return false;
        if (node.closed) {
            node.closed = false;
            ++stats_.reopened;
        }
        node.g = g;
        node.parent = parent;
        node.op = op;
        return true;
    }

    void push(int q, const Evaluation &e, std::int64_t g, int cost, int child, int parent, int op) {
        QueueEntry entry;
        entry.key = {key_of(e, g), e.tiebreak, cost, seq_++};
        entry.node = child;
        entry.parent = parent;
        entry.op = op;
        entry.g = g;
        queues_[static_cast<std::size_t>(q)].push(entry);
    }

    std::vector<int> trace(int id) const {
        std::vector<int> plan;
        while (nodes_[static_cast<std::size_t>(id)].parent >= 0) {
            plan.push_back(nodes_[static_cast<std::size_t>(id)].op);
            id = nodes_[static_cast<std::size_t>(id)].parent;
        }
        std::reverse(plan.begin(), plan.end());
        return plan;
    }

    const Task &task_;
    const SearchConfig &config_;
    std::optional<double> weight_;
    std::int64_t bound_;
    const SearchLimits &limits_;
    const PopObserver &observer_;

    std::optional<FFAddHeuristic> ff_;
    std::optional<LandmarkCountHeuristic> lm_;

    std::vector<SearchNode> nodes_;
    std::unordered_map<State, int, StateHash> index_;
    std::array<OpenList, num_queues> queues_;
    std::array<int, num_queues> priority_{};
    std::array<std::pair<double, std::int64_t>, 2> best_{};
    std::uint64_t seq_ = 0;
    SearchStatistics stats_;
};

}  // namespace detail

inline constexpr std::int64_t no_bound = std::numeric_limits<std::int64_t>::max();

inline SearchResult greedy_bfs(const Task &task, const LandmarkGraph &graph, const SearchConfig &config,
                               const SearchLimits &limits = {}, const PopObserver &observer = {}) {
    return detail::BestFirstSearch(task, graph, config, std::nullopt, no_bound, limits, observer).run();
}

inline SearchResult weighted_astar(const Task &task, const LandmarkGraph &graph, double weight, std::int64_t bound,
                                   const SearchConfig &config, const SearchLimits &limits = {},
                                   const PopObserver &observer = {}) {
    if (!(weight >= 1.0))
        throw std::invalid_argument("weighted A* needs a weight of at least 1");
    return detail::BestFirstSearch(task, graph, config, weight, bound, limits, observer).run();
}

struct AnytimeResult {
    SearchStatus status = SearchStatus::failed;  // solved once any plan was found
    std::vector<SearchResult> solutions;
    std::int64_t expansions = 0;

    const SearchResult *best() const { return solutions.empty() ? nullptr : &solutions.back(); }
};

using PlanConsumer = std::function<void(const SearchResult &)>;

inline void check_weights(const std::vector<double> &weights) {
    if (weights.empty())
        throw std::invalid_argument("weight schedule must not be empty");
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 1.0) || (i > 0 && !(weights[i] < weights[i - 1])))
            throw std::invalid_argument("weights must be strictly decreasing and at least 1");
    }
}

// Greedy search first, then restarted weighted A* runs with decreasing
// weights, each pruned by the cost of the best plan so far.
inline AnytimeResult anytime_plan(const Task &task, const LandmarkGraph &graph, const SearchConfig &config,
                                  const PlanConsumer &emit = {}, const SearchLimits &limits = {}) {
    check_weights(config.weights);
    AnytimeResult result;
    auto record = [&](SearchResult found) {
        if (emit)
            emit(found);
        result.solutions.push_back(std::move(found));
        result.status = SearchStatus::solved;
    };

    SearchResult first = greedy_bfs(task, graph, config, limits);
    result.expansions += first.statistics.expansions;
    if (!first.solved()) {
        result.status = first.status;
        return result;
    }
    std::int64_t bound = first.cost;
    record(std::move(first));

    for (std::size_t i = 0; bound > 0; ++i) {
        double w = config.weights[std::min(i, config.weights.size() - 1)];
        SearchResult next = weighted_astar(task, graph, w, bound, config, limits);
        result.expansions += next.statistics.expansions;
        if (!next.solved())
            break;
        bound = next.cost;
        record(std::move(next));
    }
    return result;
}

}  // namespace lama
