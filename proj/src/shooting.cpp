#include "shoot/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shoot {

std::string to_string(Formulation f) {
    switch (f) {
        case Formulation::Classical: return "classical";
        case Formulation::Extended: return "extended";
        case Formulation::FullUnconstrained: return "full";
    }
    return "?";
}

Formulation formulation_from_string(const std::string& s) {
    if (s == "classical") return Formulation::Classical;
    if (s == "extended") return Formulation::Extended;
    if (s == "full") return Formulation::FullUnconstrained;
    throw ConfigurationError("unknown formulation '" + s + "'");
}

std::string to_string(ResidualKind kind) {
    switch (kind) {
        case ResidualKind::EndpointConstraint: return "endpoint_constraint";
        case ResidualKind::InitialTransversality: return "initial_transversality";
        case ResidualKind::FinalTransversality: return "final_transversality";
        case ResidualKind::SingularEntry: return "singular_entry";
        case ResidualKind::SingularEntrySlope: return "singular_entry_slope";
        case ResidualKind::CombinedSingularEntry: return "combined_singular_entry";
        case ResidualKind::HamiltonianJump: return "hamiltonian_jump";
        case ResidualKind::FinalTimeHamiltonian: return "final_time_hamiltonian";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Codec

ShootingCodec::ShootingCodec(const ProblemDef& prob, const ControlStructure& structure,
                             Formulation form)
    : n_(prob.n),
      m_(prob.m),
      num_arcs_(structure.num_arcs),
      beta_dim_(form == Formulation::FullUnconstrained ? prob.constraints.dim : 0),
      final_time_free_(prob.final_time.is_free),
      fixed_final_time_(prob.final_time.value),
      cost_state_(prob.cost_state),
      form_(form) {
    for (int i = 0; i < n_; ++i) {
        const auto pin = prob.initial_pin(i);
        initial_pins_.emplace_back(pin.has_value(), pin.value_or(0.0));
    }
    if (form == Formulation::FullUnconstrained) {
        for (int i = 0; i < n_; ++i) free_x0_.push_back(i);
        for (int i = 0; i < n_; ++i) costate_.push_back(i);
        num_arcs_ = 1;
        final_time_free_ = false;
    } else {
        for (int i = 0; i < n_; ++i)
            if (!initial_pins_[static_cast<std::size_t>(i)].first) free_x0_.push_back(i);
        for (int i = 0; i < n_; ++i)
            if (i != cost_state_) costate_.push_back(i);
        if (cost_state_ >= 0 && !initial_pins_[static_cast<std::size_t>(cost_state_)].first)
            throw ConfigurationError(prob.name + ": the running-cost state must have a pinned initial value");
    }

    for (int i : free_x0_) labels_.push_back("x0_" + std::to_string(i + 1));
    for (int i : costate_) labels_.push_back("p" + std::to_string(i + 1));
    for (int j = 0; j < beta_dim_; ++j) labels_.push_back("beta" + std::to_string(j + 1));
    if (form != Formulation::FullUnconstrained) {
        for (int k = 1; k < num_arcs_; ++k) labels_.push_back("t" + std::to_string(k));
        if (final_time_free_) labels_.push_back("T");
    }
    dim_ = static_cast<int>(labels_.size());
}

Vec ShootingCodec::encode(const ShootingPoint& pt) const {
    Vec flat(dim_);
    int at = 0;
    for (int i = 0; i < static_cast<int>(free_x0_.size()); ++i) flat[at++] = pt.free_x0[i];
    for (int i = 0; i < static_cast<int>(costate_.size()); ++i) flat[at++] = pt.costate0[i];
    for (int j = 0; j < beta_dim_; ++j) flat[at++] = pt.beta[j];
    if (form_ != Formulation::FullUnconstrained) {
        for (int k = 0; k + 1 < num_arcs_; ++k) flat[at++] = pt.switch_times[k];
        if (final_time_free_) flat[at++] = pt.final_time.value();
    }
    return flat;
}

ShootingPoint ShootingCodec::decode(const Vec& flat) const {
    if (flat.size() != dim_) throw ConfigurationError("shooting vector has wrong dimension");
    ShootingPoint pt;
    int at = 0;
    pt.free_x0.resize(static_cast<int>(free_x0_.size()));
    for (int i = 0; i < pt.free_x0.size(); ++i) pt.free_x0[i] = flat[at++];
    pt.costate0.resize(static_cast<int>(costate_.size()));
    for (int i = 0; i < pt.costate0.size(); ++i) pt.costate0[i] = flat[at++];
    pt.beta.resize(beta_dim_);
    for (int j = 0; j < beta_dim_; ++j) pt.beta[j] = flat[at++];
    if (form_ != Formulation::FullUnconstrained) {
        pt.switch_times.resize(num_arcs_ - 1);
        for (int k = 0; k + 1 < num_arcs_; ++k) pt.switch_times[k] = flat[at++];
        if (final_time_free_) pt.final_time = flat[at++];
    } else {
        pt.switch_times.resize(0);
    }
    return pt;
}

Vec ShootingCodec::initial_state(const ShootingPoint& pt) const {
    Vec x0(n_);
    int at = 0;
    for (int i = 0; i < n_; ++i) {
        if (form_ == Formulation::FullUnconstrained) {
            x0[i] = pt.free_x0[i];
        } else if (initial_pins_[static_cast<std::size_t>(i)].first) {
            x0[i] = initial_pins_[static_cast<std::size_t>(i)].second;
        } else {
            x0[i] = pt.free_x0[at++];
        }
    }
    return x0;
}

RowVec ShootingCodec::initial_costate(const ShootingPoint& pt) const {
    RowVec p0(n_);
    int at = 0;
    for (int i = 0; i < n_; ++i) {
        if (form_ != Formulation::FullUnconstrained && i == cost_state_) {
            p0[i] = 1.0;  // running-cost costate
        } else {
            p0[i] = pt.costate0[at++];
        }
    }
    return p0;
}

std::vector<double> ShootingCodec::breakpoints(const ShootingPoint& pt) const {
    std::vector<double> bp;
    bp.push_back(0.0);
    for (int k = 0; k + 1 < num_arcs_; ++k) bp.push_back(pt.switch_times[k]);
    if (form_ != Formulation::FullUnconstrained && final_time_free_)
        bp.push_back(pt.final_time.value());
    else
        bp.push_back(fixed_final_time_);
    return bp;
}

// ---------------------------------------------------------------------------
// Residual vector

int ResidualVector::size() const {
    int s = 0;
    for (const auto& b : blocks) s += static_cast<int>(b.values.size());
    return s;
}

Vec ResidualVector::flat() const {
    Vec v(size());
    int at = 0;
    for (const auto& b : blocks)
        for (int i = 0; i < b.values.size(); ++i) v[at++] = b.values[i];
    return v;
}

std::string ResidualVector::describe() const {
    std::ostringstream os;
    for (const auto& b : blocks) {
        os << b.label << " [" << to_string(b.kind) << "]:";
        for (int i = 0; i < b.values.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " % .6e", b.values[i]);
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

const ResidualBlock* ResidualVector::find(ResidualKind kind, const std::string& label) const {
    for (const auto& b : blocks)
        if (b.kind == kind && (label.empty() || b.label == label)) return &b;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Assemblies

namespace {

struct SingularRun {
    int comp;
    int entry_arc;
    bool reaches_final;
};

std::vector<SingularRun> singular_runs(const ControlStructure& structure, int m) {
    std::vector<SingularRun> runs;
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < structure.num_arcs; ++k) {
            if (!structure.is_singular_entry(k, i)) continue;
            int last = k;
            while (last + 1 < structure.num_arcs &&
                   structure.modes[static_cast<std::size_t>(last + 1)][static_cast<std::size_t>(i)].mode ==
                       ArcMode::Singular)
                ++last;
            runs.push_back({i, k, last == structure.num_arcs - 1});
        }
    }
    std::sort(runs.begin(), runs.end(), [](const SingularRun& a, const SingularRun& b) {
        return a.entry_arc != b.entry_arc ? a.entry_arc < b.entry_arc : a.comp < b.comp;
    });
    return runs;
}

std::string time_label(int arc) {
    return arc == 0 ? "t0" : "t" + std::to_string(arc);
}

// Shared assembly of the structured (classical / extended) residuals.
ResidualVector assemble_structured(const ProblemDef& prob, const ControlStructure& structure,
                                   const ShootingPoint& pt, const IntegrationOptions& opts,
                                   bool extended) {
    if (!prob.constraints.all_pins())
        throw ConfigurationError(
            prob.name +
            ": structured shooting needs endpoint constraints given as coordinate pins; "
            "use the full unconstrained formulation for general constraints");

    const ShootingCodec codec(prob, structure, extended ? Formulation::Extended : Formulation::Classical);
    const Vec x0 = codec.initial_state(pt);
    const RowVec p0 = codec.initial_costate(pt);
    const TrajectoryRecord rec = integrate_arcs(prob, structure, codec.breakpoints(pt), x0, p0, opts);

    const Vec& xT = rec.final_state();
    const RowVec& pT = rec.final_costate();

    ResidualVector res;

    // Terminal coordinate pins (initial pins are satisfied by construction).
    {
        std::vector<double> vals;
        std::string label = "eta_terminal";
        for (const auto& pin : prob.constraints.row_pins)
            if (pin && !pin->at_initial) vals.push_back(xT[pin->index] - pin->target);
        if (!vals.empty())
            res.blocks.push_back({ResidualKind::EndpointConstraint, label,
                                  Eigen::Map<const Vec>(vals.data(), static_cast<int>(vals.size()))});
    }

    // Transversality for free initial states: p0 + D_x0 phi0.
    if (!codec.free_x0_indices().empty()) {
        const Vec g0 = prob.cost.grad_x0(x0, xT);
        Vec vals(static_cast<int>(codec.free_x0_indices().size()));
        int at = 0;
        for (int i : codec.free_x0_indices()) vals[at++] = p0[i] + g0[i];
        res.blocks.push_back({ResidualKind::InitialTransversality, "p0+Dx0(cost)", vals});
    }

    // Transversality for free terminal states: pT - D_xT phi0.
    {
        const Vec gT = prob.cost.grad_xT(x0, xT);
        std::vector<double> vals;
        for (int i = 0; i < prob.n; ++i) {
            if (i == prob.cost_state) continue;
            if (prob.terminal_pin(i)) continue;
            vals.push_back(pT[i] - gT[i]);
        }
        if (!vals.empty())
            res.blocks.push_back({ResidualKind::FinalTransversality, "pT-DxT(cost)",
                                  Eigen::Map<const Vec>(vals.data(), static_cast<int>(vals.size()))});
    }

    // Entry conditions for each maximal singular run, in Phi-then-slope order.
    const auto runs = singular_runs(structure, prob.m);
    {
        std::vector<double> phis, slopes;
        std::vector<std::pair<std::string, std::pair<double, double>>> combined;
        for (const auto& run : runs) {
            const PontryaginPoint& entry = rec.arcs[static_cast<std::size_t>(run.entry_arc)].entry;
            const double phi = entry.Phi[run.comp];
            const double slope = entry.Phi_dot[run.comp];
            if (!extended && run.reaches_final) {
                combined.push_back({"Phi^2+Phidot^2[u" + std::to_string(run.comp + 1) + "," +
                                        time_label(run.entry_arc) + "]",
                                    {phi, slope}});
            } else {
                phis.push_back(phi);
                slopes.push_back(slope);
            }
        }
        if (!phis.empty()) {
            res.blocks.push_back({ResidualKind::SingularEntry, "Phi[entries]",
                                  Eigen::Map<const Vec>(phis.data(), static_cast<int>(phis.size()))});
            res.blocks.push_back({ResidualKind::SingularEntrySlope, "Phidot[entries]",
                                  Eigen::Map<const Vec>(slopes.data(), static_cast<int>(slopes.size()))});
        }
        for (const auto& c : combined) {
            Vec v(1);
            v[0] = c.second.first * c.second.first + c.second.second * c.second.second;
            res.blocks.push_back({ResidualKind::CombinedSingularEntry, c.first, v});
        }
    }

    // H(T) = 0 for a free final time.
    if (prob.final_time.is_free) {
        Vec v(1);
        v[0] = rec.final_hamiltonian();
        res.blocks.push_back({ResidualKind::FinalTimeHamiltonian, "H(T)", v});
    }

    // Hamiltonian continuity at switching times. The classical reduction keeps
    // the jump only where a component switches between two bound values.
    for (int k = 0; k + 1 < structure.num_arcs; ++k) {
        if (!extended && !structure.bang_bang_switch_into(k + 1)) continue;
        Vec v(1);
        v[0] = rec.hamiltonian_jump(k);
        res.blocks.push_back({ResidualKind::HamiltonianJump, "[H](t" + std::to_string(k + 1) + ")", v});
    }

    if (!extended) {
        const int rows = res.size();
        if (rows != codec.dim()) {
            std::ostringstream os;
            os << prob.name << ": classical reduction is not square (" << rows << " rows, "
               << codec.dim() << " unknowns); blocks:";
            for (const auto& b : res.blocks) os << " " << b.label << "(" << b.values.size() << ")";
            throw NotSquare(os.str());
        }
    }
    return res;
}

}  // namespace

ResidualVector assemble_extended(const ProblemDef& prob, const ControlStructure& structure,
                                 const ShootingPoint& pt, const IntegrationOptions& opts) {
    structure.validate(prob);
    return assemble_structured(prob, structure, pt, opts, true);
}

ResidualVector assemble_classical(const ProblemDef& prob, const ControlStructure& structure,
                                  const ShootingPoint& pt, const IntegrationOptions& opts) {
    structure.validate(prob);
    return assemble_structured(prob, structure, pt, opts, false);
}

ControlStructure fully_singular_structure(const ProblemDef& prob) {
    ControlStructure s;
    s.num_arcs = 1;
    s.modes.push_back(std::vector<ModeEntry>(static_cast<std::size_t>(prob.m),
                                             ModeEntry{ArcMode::Singular, 0.0}));
    return s;
}

ResidualVector assemble_full_unconstrained(const ProblemDef& prob, const ShootingPoint& pt,
                                           const IntegrationOptions& opts) {
    if (prob.bounds)
        throw ConfigurationError(prob.name +
                                 ": the full unconstrained system requires a problem without control bounds");
    if (prob.final_time.is_free)
        throw ConfigurationError(prob.name + ": the full unconstrained system requires a fixed final time");

    const ControlStructure structure = fully_singular_structure(prob);
    structure.validate(prob);
    const ShootingCodec codec(prob, structure, Formulation::FullUnconstrained);
    const Vec x0 = codec.initial_state(pt);
    const RowVec p0 = codec.initial_costate(pt);
    const TrajectoryRecord rec =
        integrate_arcs(prob, structure, {0.0, prob.final_time.value}, x0, p0, opts);

    const Vec& xT = rec.final_state();
    const RowVec& pT = rec.final_costate();
    const Vec beta = pt.beta;

    ResidualVector res;
    if (prob.constraints.dim > 0) {
        res.blocks.push_back({ResidualKind::EndpointConstraint, "eta", prob.constraints.value(x0, xT)});
    }
    {
        Vec v = p0.transpose() + prob.cost.grad_x0(x0, xT);
        if (prob.constraints.dim > 0) v += prob.constraints.jac_x0(x0, xT).transpose() * beta;
        res.blocks.push_back({ResidualKind::InitialTransversality, "p0+Dx0(L)", v});
    }
    {
        Vec v = pT.transpose() - prob.cost.grad_xT(x0, xT);
        if (prob.constraints.dim > 0) v -= prob.constraints.jac_xT(x0, xT).transpose() * beta;
        res.blocks.push_back({ResidualKind::FinalTransversality, "pT-DxT(L)", v});
    }
    res.blocks.push_back({ResidualKind::SingularEntry, "Phi(T)", rec.arcs[0].exit.Phi.transpose()});
    // p0 B1(x0, u0); note Phi_dot = -p B1.
    res.blocks.push_back(
        {ResidualKind::SingularEntrySlope, "p0B1(0)", (-rec.arcs[0].entry.Phi_dot).transpose()});
    return res;
}

bool structure_yields_square(const ProblemDef& prob, const ControlStructure& structure) {
    for (const auto& run : singular_runs(structure, prob.m)) {
        if (run.entry_arc == 0 || run.reaches_final) return false;
    }
    for (int k = 1; k < structure.num_arcs; ++k) {
        int switching = 0;
        for (int i = 0; i < prob.m; ++i) {
            const auto& a = structure.modes[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)];
            const auto& b = structure.modes[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            if (a.mode != b.mode || (a.mode == ArcMode::Value && a.value != b.value)) ++switching;
        }
        if (switching != 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// ShootingSystem

ShootingSystem::ShootingSystem(ProblemDef prob, ControlStructure structure, Formulation form,
                               IntegrationOptions opts)
    : prob_(std::move(prob)),
      structure_(form == Formulation::FullUnconstrained ? fully_singular_structure(prob_)
                                                        : std::move(structure)),
      form_(form),
      opts_(opts),
      codec_(prob_, structure_, form_) {
    prob_.validate();
    structure_.validate(prob_);
}

ResidualVector ShootingSystem::residual(const ShootingPoint& pt) const {
    switch (form_) {
        case Formulation::Classical: return assemble_classical(prob_, structure_, pt, opts_);
        case Formulation::Extended: return assemble_extended(prob_, structure_, pt, opts_);
        case Formulation::FullUnconstrained: return assemble_full_unconstrained(prob_, pt, opts_);
    }
    throw ConfigurationError("unreachable");
}

Vec ShootingSystem::operator()(const Vec& flat) const { return residual(codec_.decode(flat)).flat(); }

TrajectoryRecord ShootingSystem::trajectory(const Vec& flat, IntegrationOptions opts) const {
    const ShootingPoint pt = codec_.decode(flat);
    return integrate_arcs(prob_, structure_, codec_.breakpoints(pt), codec_.initial_state(pt),
                          codec_.initial_costate(pt), opts);
}

TrajectoryRecord ShootingSystem::trajectory(const Vec& flat) const {
    IntegrationOptions opts = opts_;
    opts.record_samples = true;
    return trajectory(flat, opts);
}

double ShootingSystem::objective(const Vec& flat) const {
    const ShootingPoint pt = codec_.decode(flat);
    const TrajectoryRecord rec = integrate_arcs(prob_, structure_, codec_.breakpoints(pt),
                                                codec_.initial_state(pt), codec_.initial_costate(pt), opts_);
    return prob_.cost.value(codec_.initial_state(pt), rec.final_state());
}

}  // namespace shoot
