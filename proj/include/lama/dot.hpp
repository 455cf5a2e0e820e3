#pragma once

#include "landmark_graph.hpp"
#include "task.hpp"

#include <sstream>
#include <string>

namespace lama {

inline std::string_view dot_style(OrderingType type) {
    switch (type) {
    case OrderingType::natural: return "bold";
    case OrderingType::greedy_necessary: return "solid";
    case OrderingType::reasonable: return "dashed";
    case OrderingType::obedient_reasonable: return "dotted";
    }
    return "solid";
}

inline std::string dot_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

inline std::string landmark_label(const Task &task, const Landmark &landmark) {
    std::string label;
    for (const Fact &f : landmark.facts) {
        if (!label.empty())
            label += " ∨ ";
        label += task.fact_name(f);
    }
    return label;
}

// Goal landmarks are drawn with a double border.
inline std::string export_dot(const LandmarkGraph &graph, const Task &task) {
    std::ostringstream out;
    out << "digraph landmarks {\n";
    for (int id = 0; id < graph.size(); ++id) {
        out << "  n" << id << " [label=\"" << dot_escape(landmark_label(task, graph.landmark(id))) << "\"";
        if (graph.node(id).goal)
            out << ", peripheries=2";
        out << "];\n";
    }
    for (const Ordering &o : graph.orderings())
        out << "  n" << o.from << " -> n" << o.to << " [style=" << dot_style(o.type) << "];\n";
    out << "}\n";
    return out.str();
}

}  // namespace lama
