#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shoot/integrate.hpp"
#include "shoot/problem.hpp"
#include "shoot/structure.hpp"

namespace shoot {

enum class Formulation { Classical, Extended, FullUnconstrained };

std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string& s);

// The shooting unknowns. Structured formulations carry the costates of the
// non-augmented states plus the interior switching times (and the final time
// when free); the full unconstrained formulation carries the whole initial
// state, the whole initial costate and the constraint multiplier.
struct ShootingPoint {
    Vec free_x0;
    Vec costate0;
    Vec beta;
    Vec switch_times;
    std::optional<double> final_time;
};

// Flat-vector codec for ShootingPoint; encode/decode round-trip exactly.
class ShootingCodec {
public:
    ShootingCodec(const ProblemDef& prob, const ControlStructure& structure, Formulation form);

    int dim() const { return dim_; }
    const std::vector<std::string>& labels() const { return labels_; }
    Formulation formulation() const { return form_; }

    Vec encode(const ShootingPoint& pt) const;
    ShootingPoint decode(const Vec& flat) const;

    Vec initial_state(const ShootingPoint& pt) const;
    RowVec initial_costate(const ShootingPoint& pt) const;
    std::vector<double> breakpoints(const ShootingPoint& pt) const;

    const std::vector<int>& free_x0_indices() const { return free_x0_; }
    const std::vector<int>& costate_indices() const { return costate_; }

private:
    int n_, m_, num_arcs_, beta_dim_;
    bool final_time_free_;
    double fixed_final_time_;
    int cost_state_;
    Formulation form_;
    std::vector<int> free_x0_;   // unpinned initial-state coordinates
    std::vector<int> costate_;   // costate coordinates carried as unknowns
    std::vector<std::pair<bool, double>> initial_pins_;  // per coordinate
    int dim_;
    std::vector<std::string> labels_;
};

enum class ResidualKind {
    EndpointConstraint,
    InitialTransversality,
    FinalTransversality,
    SingularEntry,        // switching function at a singular-arc entry
    SingularEntrySlope,   // its time derivative at the entry
    CombinedSingularEntry,  // Phi^2 + Phidot^2 for a singular run reaching T
    HamiltonianJump,
    FinalTimeHamiltonian,
};

std::string to_string(ResidualKind kind);

struct ResidualBlock {
    ResidualKind kind;
    std::string label;
    Vec values;
};

struct ResidualVector {
    std::vector<ResidualBlock> blocks;

    int size() const;
    Vec flat() const;
    double norm() const { return flat().norm(); }
    std::string describe() const;  // block name, kind, values
    const ResidualBlock* find(ResidualKind kind, const std::string& label = "") const;
};

// Overdetermined residual: endpoint constraints, transversality for free
// endpoint states, switching function and slope at each singular-arc entry,
// the Hamiltonian jump at every switching time, and H(T) when T is free.
ResidualVector assemble_extended(const ProblemDef& prob, const ControlStructure& structure,
                                 const ShootingPoint& pt, const IntegrationOptions& opts = {});

// Square reduction: jumps kept only at bang-bang switches; entry conditions
// of a singular run that reaches the final time are combined into a single
// squared row. Throws NotSquare when the reduction is not square.
ResidualVector assemble_classical(const ProblemDef& prob, const ControlStructure& structure,
                                  const ShootingPoint& pt, const IntegrationOptions& opts = {});

// Full system for the unconstrained problem: one all-singular arc, unknowns
// (x0, p0, beta), residuals eta, both transversality conditions, Phi(T) and
// p0 B1(x0, u0).
ResidualVector assemble_full_unconstrained(const ProblemDef& prob, const ShootingPoint& pt,
                                           const IntegrationOptions& opts = {});

// Structural squareness of the classical reduction before the squared-entry
// fallback: every singular run interior and exactly one component switching
// at each switching time.
bool structure_yields_square(const ProblemDef& prob, const ControlStructure& structure);

// Binds a problem, structure and formulation into a plain residual map.
class ShootingSystem {
public:
    ShootingSystem(ProblemDef prob, ControlStructure structure, Formulation form,
                   IntegrationOptions opts = {});

    const ShootingCodec& codec() const { return codec_; }
    const ProblemDef& problem() const { return prob_; }
    const ControlStructure& structure() const { return structure_; }
    Formulation formulation() const { return form_; }
    const IntegrationOptions& options() const { return opts_; }

    ResidualVector residual(const ShootingPoint& pt) const;
    Vec operator()(const Vec& flat) const;

    TrajectoryRecord trajectory(const Vec& flat, IntegrationOptions opts) const;
    TrajectoryRecord trajectory(const Vec& flat) const;
    double objective(const Vec& flat) const;

private:
    ProblemDef prob_;
    ControlStructure structure_;
    Formulation form_;
    IntegrationOptions opts_;
    ShootingCodec codec_;
};

// All-singular single-arc structure used by the full unconstrained system.
ControlStructure fully_singular_structure(const ProblemDef& prob);

}  // namespace shoot
