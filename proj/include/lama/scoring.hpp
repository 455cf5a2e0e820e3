#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace lama {

// Per-task quality score: best known cost over found cost, 0 when unsolved.
// A found cost below the reference counts as a full score.
inline double ipc_score(std::optional<std::int64_t> found_cost, std::int64_t best_cost) {
    if (best_cost <= 0)
        throw std::invalid_argument("reference cost must be positive");
    if (!found_cost)
        return 0.0;
    if (*found_cost <= best_cost)
        return 1.0;
    return static_cast<double>(best_cost) / static_cast<double>(*found_cost);
}

}  // namespace lama
