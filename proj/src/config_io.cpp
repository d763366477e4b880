#include "shoot/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shoot/errors.hpp"

namespace shoot {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_number(const std::string& s, int lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigurationError("config: bad number '" + s + "' at line " + std::to_string(lineno));
    }
}

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

ProblemConfig read_problem_config(std::istream& is) {
    ProblemConfig cfg;
    std::string section, line;
    int lineno = 0;
    std::map<int, std::vector<std::string>> arcs;
    int arc_count = -1;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigurationError("config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigurationError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section == "problem") {
            if (key == "family") cfg.family = value;
            else throw ConfigurationError("config: unknown key '" + key + "' in [problem]");
        } else if (section == "params") {
            cfg.params[key] = parse_number(value, lineno);
        } else if (section == "structure") {
            if (key == "arcs") {
                arc_count = static_cast<int>(parse_number(value, lineno));
            } else if (key.rfind("arc", 0) == 0) {
                const int idx = static_cast<int>(parse_number(key.substr(3), lineno));
                arcs[idx] = split(value, ';');
            } else {
                throw ConfigurationError("config: unknown key '" + key + "' in [structure]");
            }
        } else if (section == "solution") {
            if (key == "nu") {
                const auto items = split(value, ',');
                cfg.solution.resize(static_cast<int>(items.size()));
                for (std::size_t i = 0; i < items.size(); ++i)
                    cfg.solution[static_cast<int>(i)] = parse_number(items[i], lineno);
            } else if (key == "objective") {
                cfg.objective = parse_number(value, lineno);
            } else {
                throw ConfigurationError("config: unknown key '" + key + "' in [solution]");
            }
        } else {
            throw ConfigurationError("config: key outside a known section at line " + std::to_string(lineno));
        }
    }
    if (cfg.family.empty()) throw ConfigurationError("config: missing [problem] family");
    if (!arcs.empty()) {
        if (arc_count < 0) arc_count = static_cast<int>(arcs.size());
        for (int k = 1; k <= arc_count; ++k) {
            const auto it = arcs.find(k);
            if (it == arcs.end())
                throw ConfigurationError("config: missing arc" + std::to_string(k) + " in [structure]");
            cfg.arc_modes.push_back(it->second);
        }
    }
    return cfg;
}

ProblemConfig read_problem_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigurationError("cannot read " + path);
    return read_problem_config(is);
}

void write_problem_config(std::ostream& os, const BenchmarkCase& bench) {
    os << "[problem]\nfamily = " << bench.family << "\n\n[params]\n";
    for (const auto& [key, value] : bench.params) {
        os << key << " = ";
        put(os, value);
        os << "\n";
    }
    os << "\n[structure]\narcs = " << bench.structure.num_arcs << "\n";
    for (int k = 0; k < bench.structure.num_arcs; ++k) {
        os << "arc" << k + 1 << " = ";
        const auto& row = bench.structure.modes[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ";";
            if (row[i].mode == ArcMode::Value) {
                os << "value:";
                put(os, row[i].value);
            } else {
                os << to_string(row[i].mode);
            }
        }
        os << "\n";
    }
    if (bench.published_solution.size() > 0) {
        os << "\n[solution]\nnu = ";
        for (int i = 0; i < bench.published_solution.size(); ++i) {
            if (i) os << ", ";
            put(os, bench.published_solution[i]);
        }
        os << "\nobjective = ";
        put(os, bench.published_objective);
        os << "\n";
    }
}

void write_problem_config(const std::string& path, const BenchmarkCase& bench) {
    std::ofstream os(path);
    if (!os) throw ConfigurationError("cannot write " + path);
    write_problem_config(os, bench);
}

BenchmarkCase instantiate(const ProblemConfig& cfg) {
    BenchmarkCase bench = make_benchmark(cfg.family, cfg.params);
    if (!cfg.arc_modes.empty()) {
        ControlStructure st;
        st.num_arcs = static_cast<int>(cfg.arc_modes.size());
        for (const auto& row : cfg.arc_modes) {
            std::vector<ModeEntry> entries;
            for (const auto& mode : row) entries.push_back(mode_from_string(mode));
            st.modes.push_back(std::move(entries));
        }
        st.validate(bench.problem);
        bench.structure = std::move(st);
    }
    if (cfg.solution.size() > 0) bench.published_solution = cfg.solution;
    if (std::isfinite(cfg.objective)) bench.published_objective = cfg.objective;
    return bench;
}

}  // namespace shoot
