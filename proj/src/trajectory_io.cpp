#include "shoot/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "shoot/errors.hpp"

namespace shoot {

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

void put_row(std::ostream& os, const ArcSample& s) {
    put(os, s.t);
    for (int i = 0; i < s.x.size(); ++i) {
        os << ',';
        put(os, s.x[i]);
    }
    for (int i = 0; i < s.p.size(); ++i) {
        os << ',';
        put(os, s.p[i]);
    }
    for (int i = 0; i < s.u.size(); ++i) {
        os << ',';
        put(os, s.u[i]);
    }
    for (int i = 0; i < s.Phi.size(); ++i) {
        os << ',';
        put(os, s.Phi[i]);
    }
    for (int i = 0; i < s.Phi_dot.size(); ++i) {
        os << ',';
        put(os, s.Phi_dot[i]);
    }
    os << ',';
    put(os, s.H);
    os << '\n';
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
    if (rec.arcs.empty()) throw ConfigurationError("empty trajectory");
    if (rec.arcs.front().samples.empty())
        throw ConfigurationError("trajectory was integrated without samples");
    const int n = static_cast<int>(rec.arcs.front().entry.x.size());
    const int m = static_cast<int>(rec.arcs.front().entry.u.size());
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",x" << i;
    for (int i = 1; i <= n; ++i) os << ",p" << i;
    for (int i = 1; i <= m; ++i) os << ",u" << i;
    for (int i = 1; i <= m; ++i) os << ",Phi" << i;
    for (int i = 1; i <= m; ++i) os << ",Phidot" << i;
    os << ",H\n";
    for (const auto& arc : rec.arcs)
        for (const auto& s : arc.samples) put_row(os, s);
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
    std::ofstream os(path);
    if (!os) throw ConfigurationError("cannot write " + path);
    write_trajectory_csv(os, rec);
}

TrajectoryRecord read_trajectory_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw ConfigurationError("trajectory csv: empty file");
    int n = 0, m = 0;
    {
        std::stringstream hs(header);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(hs, col, ',')) cols.push_back(col);
        if (cols.empty() || cols.front() != "t" || cols.back() != "H")
            throw ConfigurationError("trajectory csv: unexpected header");
        for (const auto& c : cols) {
            if (c.size() > 1 && c[0] == 'x') ++n;
            if (c.size() > 1 && c[0] == 'u') ++m;
        }
        if (n <= 0 || m <= 0 || static_cast<int>(cols.size()) != 2 + 2 * n + 3 * m)
            throw ConfigurationError("trajectory csv: inconsistent header");
    }

    std::vector<ArcSample> samples;
    std::string line;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t pos = 0;
                vals.push_back(std::stod(cell, &pos));
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ConfigurationError("trajectory csv: bad number at line " + std::to_string(lineno));
            }
        }
        if (static_cast<int>(vals.size()) != 2 + 2 * n + 3 * m)
            throw ConfigurationError("trajectory csv: wrong column count at line " + std::to_string(lineno));
        ArcSample s;
        int at = 0;
        s.t = vals[at++];
        s.x.resize(n);
        for (int i = 0; i < n; ++i) s.x[i] = vals[at++];
        s.p.resize(n);
        for (int i = 0; i < n; ++i) s.p[i] = vals[at++];
        s.u.resize(m);
        for (int i = 0; i < m; ++i) s.u[i] = vals[at++];
        s.Phi.resize(m);
        for (int i = 0; i < m; ++i) s.Phi[i] = vals[at++];
        s.Phi_dot.resize(m);
        for (int i = 0; i < m; ++i) s.Phi_dot[i] = vals[at++];
        s.H = vals[at++];
        samples.push_back(std::move(s));
    }
    if (samples.size() < 2) throw ConfigurationError("trajectory csv: no samples");

    TrajectoryRecord rec;
    ArcTrace arc;
    arc.index = 0;
    arc.t_begin = samples.front().t;
    auto flush = [&](const ArcSample& last) {
        arc.t_end = last.t;
        arc.steps = static_cast<int>(arc.samples.size()) - 1;
        auto to_point = [](const ArcSample& s) {
            PontryaginPoint pt;
            pt.x = s.x;
            pt.p = s.p;
            pt.u = s.u;
            pt.H = s.H;
            pt.Phi = s.Phi;
            pt.Phi_dot = s.Phi_dot;
            return pt;
        };
        arc.entry = to_point(arc.samples.front());
        arc.exit = to_point(arc.samples.back());
        rec.arcs.push_back(std::move(arc));
        arc = ArcTrace{};
        arc.index = static_cast<int>(rec.arcs.size());
    };
    for (std::size_t i = 0; i < samples.size(); ++i) {
        // a repeated t starts the next arc
        if (!arc.samples.empty() && samples[i].t == arc.samples.back().t) {
            flush(arc.samples.back());
            arc.t_begin = samples[i].t;
        }
        arc.samples.push_back(samples[i]);
    }
    flush(arc.samples.back());
    return rec;
}

TrajectoryRecord read_trajectory_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigurationError("cannot read " + path);
    return read_trajectory_csv(is);
}

void write_plot_script(const std::string& path, const std::string& csv_name, int n, int m) {
    std::ofstream os(path);
    if (!os) throw ConfigurationError("cannot write " + path);
    os << "#!/usr/bin/env python3\n"
          "# state / control / switching-function panels for "
       << csv_name
       << "\n"
          "import csv, os\n"
          "import matplotlib.pyplot as plt\n"
          "\n"
          "path = os.path.join(os.path.dirname(os.path.abspath(__file__)), '"
       << csv_name
       << "')\n"
          "with open(path) as f:\n"
          "    rows = list(csv.DictReader(f))\n"
          "t = [float(r['t']) for r in rows]\n"
          "fig, axes = plt.subplots(3, 1, figsize=(8, 10), sharex=True)\n";
    os << "for i in range(1, " << n + 1
       << "):\n"
          "    axes[0].plot(t, [float(r['x%d' % i]) for r in rows], label='x%d' % i)\n"
          "axes[0].set_ylabel('state')\n"
          "axes[0].legend()\n";
    os << "for i in range(1, " << m + 1
       << "):\n"
          "    axes[1].step(t, [float(r['u%d' % i]) for r in rows], where='post', label='u%d' % i)\n"
          "axes[1].set_ylabel('control')\n"
          "axes[1].legend()\n";
    os << "for i in range(1, " << m + 1
       << "):\n"
          "    axes[2].plot(t, [float(r['Phi%d' % i]) for r in rows], label='Phi%d' % i)\n"
          "axes[2].axhline(0.0, color='k', lw=0.5)\n"
          "axes[2].set_ylabel('switching function')\n"
          "axes[2].set_xlabel('t')\n"
          "axes[2].legend()\n"
          "fig.tight_layout()\n"
          "plt.show()\n";
}

}  // namespace shoot
