#include "shoot/structure.hpp"

#include <stdexcept>

namespace shoot {

std::vector<int> ControlStructure::singular_set(int arc) const {
    std::vector<int> s;
    for (std::size_t i = 0; i < modes[static_cast<std::size_t>(arc)].size(); ++i)
        if (modes[static_cast<std::size_t>(arc)][i].mode == ArcMode::Singular)
            s.push_back(static_cast<int>(i));
    return s;
}

bool ControlStructure::any_singular() const {
    for (int k = 0; k < num_arcs; ++k)
        if (!singular_set(k).empty()) return true;
    return false;
}

bool ControlStructure::is_singular_entry(int arc, int comp) const {
    const auto& row = modes[static_cast<std::size_t>(arc)];
    if (row[static_cast<std::size_t>(comp)].mode != ArcMode::Singular) return false;
    if (arc == 0) return true;
    return modes[static_cast<std::size_t>(arc - 1)][static_cast<std::size_t>(comp)].mode != ArcMode::Singular;
}

bool ControlStructure::bang_bang_switch_into(int arc) const {
    if (arc <= 0) return false;
    const auto& prev = modes[static_cast<std::size_t>(arc - 1)];
    const auto& cur = modes[static_cast<std::size_t>(arc)];
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const ArcMode a = prev[i].mode, b = cur[i].mode;
        if (a == ArcMode::Singular || b == ArcMode::Singular) continue;
        if (a != b || (a == ArcMode::Value && prev[i].value != cur[i].value)) return true;
    }
    return false;
}

void ControlStructure::validate(const ProblemDef& prob) const {
    if (num_arcs <= 0) throw ConfigurationError("structure: at least one arc required");
    if (static_cast<int>(modes.size()) != num_arcs)
        throw ConfigurationError("structure: mode table has wrong arc count");
    for (const auto& row : modes) {
        if (static_cast<int>(row.size()) != prob.m)
            throw ConfigurationError("structure: mode row does not match control dimension");
        for (const auto& e : row) {
            if ((e.mode == ArcMode::Lower || e.mode == ArcMode::Upper) && !prob.bounds)
                throw ConfigurationError("structure: bound mode on a problem without control bounds");
        }
    }
    if (any_singular() && !prob.closed_form_singular && !prob.has_hessians())
        throw ConfigurationError(
            "structure: singular arcs need a closed-form singular control or field hessians");
}

ControlStructure ControlStructure::single(std::vector<ArcMode> arc_modes) {
    ControlStructure s;
    s.num_arcs = static_cast<int>(arc_modes.size());
    for (ArcMode m : arc_modes) s.modes.push_back({ModeEntry{m, 0.0}});
    return s;
}

std::string to_string(ArcMode mode) {
    switch (mode) {
        case ArcMode::Lower: return "lower";
        case ArcMode::Upper: return "upper";
        case ArcMode::Singular: return "singular";
        case ArcMode::Value: return "value";
    }
    return "?";
}

ModeEntry mode_from_string(const std::string& s) {
    if (s == "lower") return {ArcMode::Lower, 0.0};
    if (s == "upper") return {ArcMode::Upper, 0.0};
    if (s == "singular") return {ArcMode::Singular, 0.0};
    if (s.rfind("value:", 0) == 0) return {ArcMode::Value, std::stod(s.substr(6))};
    throw ConfigurationError("unknown arc mode '" + s + "'");
}

double bang_value(const ProblemDef& prob, const ModeEntry& entry, int comp) {
    switch (entry.mode) {
        case ArcMode::Lower:
            if (!prob.bounds) throw ConfigurationError(prob.name + ": lower-bound mode without bounds");
            return prob.bounds->lower[comp];
        case ArcMode::Upper:
            if (!prob.bounds) throw ConfigurationError(prob.name + ": upper-bound mode without bounds");
            return prob.bounds->upper[comp];
        case ArcMode::Value:
            return entry.value;
        case ArcMode::Singular:
            throw ConfigurationError("bang_value called on a singular entry");
    }
    return 0.0;
}

}  // namespace shoot
