#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shoot/problem.hpp"

namespace shoot {

enum class ArcMode : std::uint8_t { Lower, Upper, Singular, Value };

struct ModeEntry {
    ArcMode mode = ArcMode::Value;
    double value = 0.0;  // used by ArcMode::Value only
};

// The assumed arc sequence: per-arc classification of each control component.
// The N-1 interior switching times (and the final time, when free) are
// shooting unknowns; this table never changes during a solve.
struct ControlStructure {
    int num_arcs = 0;
    std::vector<std::vector<ModeEntry>> modes;  // [arc][component]

    std::vector<int> singular_set(int arc) const;
    bool any_singular() const;
    // First arc of a maximal singular run of `comp` containing `arc`?
    bool is_singular_entry(int arc, int comp) const;
    // Some component jumps between two bound values at the switch entering `arc`?
    bool bang_bang_switch_into(int arc) const;
    void validate(const ProblemDef& prob) const;

    static ControlStructure single(std::vector<ArcMode> arc_modes);  // m = 1
};

std::string to_string(ArcMode mode);
ModeEntry mode_from_string(const std::string& s);

// Bound value for a non-singular mode entry.
double bang_value(const ProblemDef& prob, const ModeEntry& entry, int comp);

}  // namespace shoot
