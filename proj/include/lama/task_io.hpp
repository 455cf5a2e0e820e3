#pragma once

// Line-oriented text format for finite-domain tasks, and plan files.
//
//   fdr 1
//   metric unit|general
//   vars N            then per variable: var <size> + <size> fact-name lines
//   mutexes M         then per group:    group <K> + K lines "<var> <val>"
//   init              then N lines, one value per variable
//   goal G            then G lines "<var> <val>"
//   ops O             then per operator:
//     op <cost> <name...>
//     pre P           + P lines "<var> <val>"
//     eff E           + E lines "<c> [<cvar> <cval>]*c <var> <newval>"

#include "task.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lama {

class ParseError : public std::runtime_error {
public:
    enum class Kind { syntax, index_out_of_range, duplicate_variable, duplicate_fact_name };

    ParseError(Kind kind, int line, const std::string &message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), kind_(kind), line_(line) {}

    Kind kind() const { return kind_; }
    int line() const { return line_; }

private:
    Kind kind_;
    int line_;
};

namespace detail {

class LineReader {
public:
    explicit LineReader(std::string_view text) {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos)
                end = text.size();
            std::string_view line = text.substr(pos, end - pos);
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            lines_.push_back(line);
            pos = end + 1;
        }
        // A trailing newline leaves empty lines behind; they carry nothing.
        while (!lines_.empty() && lines_.back().empty())
            lines_.pop_back();
    }

    int line_number() const { return static_cast<int>(next_); }
    bool at_end() const { return next_ >= lines_.size(); }

    std::string_view next() {
        if (at_end())
            throw ParseError(ParseError::Kind::syntax, line_number() + 1, "unexpected end of file");
        return lines_[next_++];
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t next_ = 0;
};

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t end = line.find(' ', pos);
        if (end == std::string_view::npos)
            end = line.size();
        tokens.push_back(line.substr(pos, end - pos));
        pos = end + 1;
    }
    return tokens;
}

inline int to_int(std::string_view token, int line) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(ParseError::Kind::syntax, line, "expected an integer, got '" + std::string(token) + "'");
    return value;
}

inline std::vector<int> int_tokens(std::string_view line, int line_no, std::size_t expected) {
    auto tokens = split(line);
    if (expected != 0 && tokens.size() != expected)
        throw ParseError(ParseError::Kind::syntax, line_no,
                         "expected " + std::to_string(expected) + " integers, got '" + std::string(line) + "'");
    std::vector<int> values;
    values.reserve(tokens.size());
    for (auto token : tokens)
        values.push_back(to_int(token, line_no));
    return values;
}

// "<keyword> <count>" header lines.
inline int counted_header(LineReader &in, std::string_view keyword) {
    std::string_view line = in.next();
    int line_no = in.line_number();
    auto tokens = split(line);
    if (tokens.size() != 2 || tokens[0] != keyword)
        throw ParseError(ParseError::Kind::syntax, line_no,
                         "expected '" + std::string(keyword) + " <count>', got '" + std::string(line) + "'");
    int count = to_int(tokens[1], line_no);
    if (count < 0)
        throw ParseError(ParseError::Kind::syntax, line_no, "negative count");
    return count;
}

inline void expect_line(LineReader &in, std::string_view expected) {
    std::string_view line = in.next();
    if (line != expected)
        throw ParseError(ParseError::Kind::syntax, in.line_number(),
                         "expected '" + std::string(expected) + "', got '" + std::string(line) + "'");
}

inline Fact checked_fact(const Task &task, int var, int value, int line_no) {
    Fact fact{var, value};
    if (!task.valid_fact(fact))
        throw ParseError(ParseError::Kind::index_out_of_range, line_no,
                         "fact " + std::to_string(var) + " " + std::to_string(value) + " out of range");
    return fact;
}

inline Fact fact_line(LineReader &in, const Task &task) {
    std::string_view line = in.next();
    int line_no = in.line_number();
    auto values = int_tokens(line, line_no, 2);
    return checked_fact(task, values[0], values[1], line_no);
}

inline void check_distinct_vars(const PartialAssignment &facts, int line_no) {
    std::set<int> seen;
    for (const Fact &f : facts) {
        if (!seen.insert(f.var).second)
            throw ParseError(ParseError::Kind::duplicate_variable, line_no,
                             "variable " + std::to_string(f.var) + " assigned twice");
    }
}

inline PartialAssignment assignment_block(LineReader &in, const Task &task, std::string_view keyword) {
    int count = counted_header(in, keyword);
    PartialAssignment facts;
    std::set<int> vars;
    for (int i = 0; i < count; ++i) {
        Fact fact = fact_line(in, task);
        if (!vars.insert(fact.var).second)
            throw ParseError(ParseError::Kind::duplicate_variable, in.line_number(),
                             "variable " + std::to_string(fact.var) + " assigned twice");
        facts.push_back(fact);
    }
    return facts;
}

}  // namespace detail

inline Task parse_task(std::string_view text) {
    using detail::counted_header;
    detail::LineReader in(text);
    Task task;

    detail::expect_line(in, "fdr 1");

    std::string_view metric = in.next();
    if (metric == "metric unit")
        task.metric = Metric::unit;
    else if (metric == "metric general")
        task.metric = Metric::general;
    else
        throw ParseError(ParseError::Kind::syntax, in.line_number(), "expected 'metric unit' or 'metric general'");

    int num_vars = counted_header(in, "vars");
    std::set<std::string, std::less<>> names;
    for (int v = 0; v < num_vars; ++v) {
        int size = counted_header(in, "var");
        if (size < 1)
            throw ParseError(ParseError::Kind::syntax, in.line_number(), "variable domain must be non-empty");
        Variable var;
        for (int d = 0; d < size; ++d) {
            std::string_view name = in.next();
            if (name.empty())
                throw ParseError(ParseError::Kind::syntax, in.line_number(), "empty fact name");
            if (!names.emplace(name).second)
                throw ParseError(ParseError::Kind::duplicate_fact_name, in.line_number(),
                                 "duplicate fact name '" + std::string(name) + "'");
            var.fact_names.emplace_back(name);
        }
        task.variables.push_back(std::move(var));
    }

    int num_groups = counted_header(in, "mutexes");
    for (int g = 0; g < num_groups; ++g) {
        int size = counted_header(in, "group");
        if (size < 2)
            throw ParseError(ParseError::Kind::syntax, in.line_number(), "mutex group needs at least two facts");
        std::vector<Fact> group;
        for (int i = 0; i < size; ++i)
            group.push_back(detail::fact_line(in, task));
        task.mutex_groups.push_back(std::move(group));
    }

    detail::expect_line(in, "init");
    std::vector<int> init;
    for (int v = 0; v < num_vars; ++v) {
        std::string_view line = in.next();
        int value = detail::to_int(line, in.line_number());
        detail::checked_fact(task, v, value, in.line_number());
        init.push_back(value);
    }
    task.initial_state = State(std::move(init));

    task.goal = detail::assignment_block(in, task, "goal");

    int num_ops = counted_header(in, "ops");
    for (int o = 0; o < num_ops; ++o) {
        std::string_view header = in.next();
        int line_no = in.line_number();
        if (!header.starts_with("op "))
            throw ParseError(ParseError::Kind::syntax, line_no, "expected 'op <cost> <name>'");
        std::string_view rest = header.substr(3);
        std::size_t space = rest.find(' ');
        if (space == std::string_view::npos || space + 1 >= rest.size())
            throw ParseError(ParseError::Kind::syntax, line_no, "operator needs a cost and a name");
        Operator op;
        op.cost = detail::to_int(rest.substr(0, space), line_no);
        if (op.cost < 0)
            throw ParseError(ParseError::Kind::syntax, line_no, "negative operator cost");
        op.name = std::string(rest.substr(space + 1));

        op.preconditions = detail::assignment_block(in, task, "pre");

        int num_effects = counted_header(in, "eff");
        for (int e = 0; e < num_effects; ++e) {
            std::string_view line = in.next();
            int eff_line = in.line_number();
            auto values = detail::int_tokens(line, eff_line, 0);
            if (values.empty() || values[0] < 0 ||
                values.size() != static_cast<std::size_t>(2 * values[0] + 3))
                throw ParseError(ParseError::Kind::syntax, eff_line, "malformed effect line");
            Effect effect;
            for (int c = 0; c < values[0]; ++c) {
                auto idx = static_cast<std::size_t>(1 + 2 * c);
                effect.conditions.push_back(detail::checked_fact(task, values[idx], values[idx + 1], eff_line));
            }
            detail::check_distinct_vars(effect.conditions, eff_line);
            Fact target = detail::checked_fact(task, values[values.size() - 2], values.back(), eff_line);
            effect.var = target.var;
            effect.value = target.value;
            op.effects.push_back(std::move(effect));
        }
        task.operators.push_back(std::move(op));
    }

    if (!in.at_end())
        throw ParseError(ParseError::Kind::syntax, in.line_number() + 1, "trailing content after operators");
    return task;
}

inline std::string serialize_task(const Task &task) {
    std::ostringstream out;
    auto facts = [&](const PartialAssignment &fs) {
        for (const Fact &f : fs)
            out << f.var << ' ' << f.value << '\n';
    };
    out << "fdr 1\n";
    out << "metric " << metric_name(task.metric) << '\n';
    out << "vars " << task.num_variables() << '\n';
    for (const Variable &var : task.variables) {
        out << "var " << var.domain_size() << '\n';
        for (const std::string &name : var.fact_names)
            out << name << '\n';
    }
    out << "mutexes " << task.mutex_groups.size() << '\n';
    for (const auto &group : task.mutex_groups) {
        out << "group " << group.size() << '\n';
        facts(group);
    }
    out << "init\n";
    for (int value : task.initial_state.values())
        out << value << '\n';
    out << "goal " << task.goal.size() << '\n';
    facts(task.goal);
    out << "ops " << task.num_operators() << '\n';
    for (const Operator &op : task.operators) {
        out << "op " << op.cost << ' ' << op.name << '\n';
        out << "pre " << op.preconditions.size() << '\n';
        facts(op.preconditions);
        out << "eff " << op.effects.size() << '\n';
        for (const Effect &eff : op.effects) {
            out << eff.conditions.size();
            for (const Fact &c : eff.conditions)
                out << ' ' << c.var << ' ' << c.value;
            out << ' ' << eff.var << ' ' << eff.value << '\n';
        }
    }
    return out.str();
}

inline std::string serialize_plan(std::span<const std::string> names, std::int64_t cost, Metric metric) {
    std::string out;
    for (const std::string &name : names)
        out += "(" + name + ")\n";
    out += "; cost = " + std::to_string(cost) + " (" + std::string(metric_name(metric)) + " cost)\n";
    return out;
}

inline std::string serialize_plan(const Task &task, std::span<const int> plan) {
    std::vector<std::string> names;
    for (int op : plan)
        names.push_back(task.operators[static_cast<std::size_t>(op)].name);
    return serialize_plan(names, plan_cost(task, plan), task.metric);
}

// Operator names of a plan file; blank lines and ';' comments are skipped.
inline std::vector<std::string> parse_plan(std::string_view text) {
    std::vector<std::string> names;
    detail::LineReader in(text);
    while (!in.at_end()) {
        std::string_view line = in.next();
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
            line.remove_suffix(1);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
            line.remove_prefix(1);
        if (line.empty() || line.front() == ';')
            continue;
        if (line.size() < 2 || line.front() != '(' || line.back() != ')')
            throw ParseError(ParseError::Kind::syntax, in.line_number(), "expected '(<operator name>)'");
        names.emplace_back(line.substr(1, line.size() - 2));
    }
    return names;
}

}  // namespace lama
