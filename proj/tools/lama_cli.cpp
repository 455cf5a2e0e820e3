#include <lama/lama.hpp>

#include <CLI11.hpp>

#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace {

constexpr int exit_solved = 0;
constexpr int exit_unsolvable = 1;
constexpr int exit_timeout = 2;
constexpr int exit_usage = 64;
constexpr int exit_bad_input = 65;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

lama::Task load_task(const std::string &path) {
    try {
        return lama::parse_task(read_file(path));
    } catch (const lama::ParseError &e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write " + path);
    out << text;
}

// Requests cancellation on `target` once `budget` has elapsed, unless the
// watchdog itself is stopped first.
std::jthread start_watchdog(std::stop_source target, std::chrono::duration<double> budget) {
    return std::jthread([target, budget](std::stop_token own) mutable {
        std::mutex mutex;
        std::condition_variable_any wake;
        std::unique_lock lock(mutex);
        wake.wait_for(lock, own, budget, [] { return false; });
        if (!own.stop_requested())
            target.request_stop();
    });
}

struct PlanOptions {
    std::string task_path;
    lama::CostMode cost_mode = lama::CostMode::plus_one;
    bool no_landmarks = false;
    std::vector<double> weights{10, 5, 3, 2, 1};
    int boost = 1000;
    double time_limit = 0;
    std::string plan_file = "sas_plan";
    bool all_plans = false;
};

int run_plan(const PlanOptions &opts) {
    lama::Task task = load_task(opts.task_path);
    lama::SearchConfig config;
    config.cost_mode = opts.cost_mode;
    config.use_landmarks = !opts.no_landmarks;
    config.weights = opts.weights;
    config.boost = opts.boost;

    std::stop_source cancel;
    lama::SearchLimits limits;
    limits.stop = cancel.get_token();
    std::jthread watchdog;
    if (opts.time_limit > 0)
        watchdog = start_watchdog(cancel, std::chrono::duration<double>(opts.time_limit));

    lama::LandmarkGraph graph;
    if (config.use_landmarks)
        graph = lama::build_landmark_graph(task);

    int emitted = 0;
    auto emit = [&](const lama::SearchResult &found) {
        ++emitted;
        std::string path = opts.all_plans ? opts.plan_file + "." + std::to_string(emitted) : opts.plan_file;
        write_file(path, lama::serialize_plan(task, std::span<const int>(found.plan)));
        std::cout << "plan " << emitted << " cost " << found.cost << " written to " << path << std::endl;
    };
    lama::AnytimeResult result = lama::anytime_plan(task, graph, config, emit, limits);
    std::cout << "expansions " << result.expansions << '\n';

    if (emitted > 0)
        return exit_solved;
    if (result.status == lama::SearchStatus::timeout) {
        std::cout << "timeout without a solution\n";
        return exit_timeout;
    }
    std::cout << "task is unsolvable\n";
    return exit_unsolvable;
}

int run_landmarks(const std::string &task_path, const std::string &dot_path) {
    lama::Task task = load_task(task_path);
    lama::LandmarkGraph graph = lama::build_landmark_graph(task);
    std::cout << "landmarks " << graph.size() << " (disjunctive " << graph.num_disjunctive() << ")\n";
    std::cout << "orderings " << graph.num_orderings() << '\n';
    for (auto type : {lama::OrderingType::natural, lama::OrderingType::greedy_necessary,
                      lama::OrderingType::reasonable, lama::OrderingType::obedient_reasonable})
        std::cout << "  " << lama::ordering_name(type) << ' ' << graph.count_orderings(type) << '\n';
    if (!dot_path.empty())
        write_file(dot_path, lama::export_dot(graph, task));
    return 0;
}

int run_validate(const std::string &task_path, const std::string &plan_path) {
    lama::Task task = load_task(task_path);
    try {
        std::vector<std::string> names = lama::parse_plan(read_file(plan_path));
        std::cout << lama::validate_plan(task, std::span<const std::string>(names)) << '\n';
        return 0;
    } catch (const lama::ParseError &e) {
        std::cerr << plan_path << ": " << e.what() << '\n';
    } catch (const lama::PlanError &e) {
        std::cerr << "invalid plan: " << e.what() << '\n';
    }
    return 1;
}

int run_score(std::int64_t best, const std::string &found) {
    std::optional<std::int64_t> found_cost;
    if (found != "none")
        found_cost = std::stoll(found);
    std::printf("%.4f\n", lama::ipc_score(found_cost, best));
    return 0;
}

bool is_cost_or_none(const std::string &text) {
    if (text == "none")
        return true;
    return !text.empty() && text.find_first_not_of("0123456789") == std::string::npos;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"LAMA-style satisficing planner"};
    app.require_subcommand(1);

    PlanOptions plan_opts;
    CLI::App *plan = app.add_subcommand("plan", "Run anytime search and write plan files");
    plan->add_option("task", plan_opts.task_path, "Task file")->required();
    std::map<std::string, lama::CostMode> modes{
        {"ignore", lama::CostMode::ignore}, {"pure", lama::CostMode::pure}, {"plus-one", lama::CostMode::plus_one}};
    plan->add_option("--cost-mode", plan_opts.cost_mode, "Heuristic cost treatment")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    plan->add_flag("--no-landmarks", plan_opts.no_landmarks, "Use the FF/add heuristic only");
    plan->add_option("--weights", plan_opts.weights, "Weighted A* schedule, e.g. 5,3,2,1")->delimiter(',');
    plan->add_option("--boost", plan_opts.boost, "Preferred-queue boost")->check(CLI::NonNegativeNumber);
    plan->add_option("--time-limit", plan_opts.time_limit, "Wall-clock limit in seconds")
        ->check(CLI::PositiveNumber);
    plan->add_option("--plan-file", plan_opts.plan_file, "Plan output path");
    plan->add_flag("--all-plans", plan_opts.all_plans, "Keep every plan as <plan-file>.N");

    std::string lm_task;
    std::string dot_path;
    CLI::App *landmarks = app.add_subcommand("landmarks", "Print landmark graph statistics");
    landmarks->add_option("task", lm_task, "Task file")->required();
    landmarks->add_option("--dot", dot_path, "Write the graph in DOT format");

    std::string val_task;
    std::string val_plan;
    CLI::App *validate = app.add_subcommand("validate", "Check a plan and print its cost");
    validate->add_option("task", val_task, "Task file")->required();
    validate->add_option("plan", val_plan, "Plan file")->required();

    std::int64_t best = 0;
    std::string found;
    CLI::App *score = app.add_subcommand("score", "Print the score of a found cost against the best known");
    score->add_option("--best", best, "Best known cost")->required()->check(CLI::PositiveNumber);
    score->add_option("--found", found, "Found cost or none")
        ->required()
        ->check(CLI::Validator(
            [](std::string &text) { return is_cost_or_none(text) ? std::string() : "expected a cost or none"; },
            "COST|none"));

    try {
        app.parse(argc, argv);
        if (plan->parsed())
            lama::check_weights(plan_opts.weights);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n\n" << plan->help();
        return exit_usage;
    }

    try {
        if (plan->parsed())
            return run_plan(plan_opts);
        if (landmarks->parsed())
            return run_landmarks(lm_task, dot_path);
        if (validate->parsed())
            return run_validate(val_task, val_plan);
        return run_score(best, found);
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_input;
    }
}
