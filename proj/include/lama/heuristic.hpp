#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace lama {

// How operator costs enter heuristic estimates.
//   ignore:   every operator counts 1 (distance only)
//   pure:     action cost, distance used only to break ties
//   plus_one: action cost plus 1 for distance
enum class CostMode { ignore, pure, plus_one };

inline std::string_view cost_mode_name(CostMode mode) {
    switch (mode) {
    case CostMode::ignore: return "ignore";
    case CostMode::pure: return "pure";
    case CostMode::plus_one: return "plus-one";
    }
    return "?";
}

inline std::int64_t operator_weight(CostMode mode, int cost) {
    switch (mode) {
    case CostMode::ignore: return 1;
    case CostMode::pure: return cost;
    case CostMode::plus_one: return static_cast<std::int64_t>(cost) + 1;
    }
    return 1;
}

inline constexpr std::int64_t infinite_cost = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
    if (a >= infinite_cost || b >= infinite_cost || a + b >= infinite_cost)
        return infinite_cost;
    return a + b;
}

// Heuristic value with a secondary key (distance estimate in pure mode).
struct HValue {
    std::int64_t value = 0;
    std::int64_t tiebreak = 0;

    static HValue infinite() { return {infinite_cost, infinite_cost}; }
    bool is_infinite() const { return value >= infinite_cost; }

    friend auto operator<=>(const HValue &, const HValue &) = default;
};

struct EvalResult {
    HValue h;
    std::vector<int> preferred;

    bool dead_end() const { return h.is_infinite(); }
};

}  // namespace lama
