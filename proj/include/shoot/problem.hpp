#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shoot/errors.hpp"

namespace shoot {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

// One control-affine vector field f_i : R^n -> R^n with its derivatives.
// hessian(x, v, w) is the bilinear second derivative contracted twice,
// component a: sum_{b,c} d2 f_a / dx_b dx_c * v_b * w_c. It may be left
// empty; only the generic singular-control path needs it.
struct VectorField {
    std::function<Vec(const Vec&)> value;
    std::function<Mat(const Vec&)> jacobian;
    std::function<Vec(const Vec&, const Vec&, const Vec&)> hessian;

    static VectorField constant(const Vec& c);
    static VectorField linear(const Mat& M);
};

// Endpoint cost phi0(x0, xT) with gradients w.r.t. both endpoints.
struct EndpointCost {
    std::function<double(const Vec&, const Vec&)> value;
    std::function<Vec(const Vec&, const Vec&)> grad_x0;
    std::function<Vec(const Vec&, const Vec&)> grad_xT;

    // phi0 = sign * xT[index]
    static EndpointCost terminal_component(int n, int index, double sign = 1.0);
};

// A constraint row that pins a single endpoint coordinate to a value.
struct EndpointPin {
    bool at_initial = true;  // false: pins xT[index]
    int index = 0;
    double target = 0.0;
};

// eta(x0, xT) = 0 in R^{dim}, with Jacobians w.r.t. both endpoints.
// row_pins marks rows that are plain coordinate pins; the structured shooting
// assemblies only accept pin rows (the multiplier of a pin row is eliminable),
// while the full unconstrained assembly takes arbitrary rows.
struct EndpointConstraints {
    int dim = 0;
    std::function<Vec(const Vec&, const Vec&)> value;
    std::function<Mat(const Vec&, const Vec&)> jac_x0;
    std::function<Mat(const Vec&, const Vec&)> jac_xT;
    std::vector<std::optional<EndpointPin>> row_pins;

    bool all_pins() const;
    static EndpointConstraints from_pins(int n, std::vector<EndpointPin> pins);
    static EndpointConstraints none();
};

struct FinalTime {
    bool is_free = false;
    double value = 0.0;  // horizon if fixed, initial guess if free

    static FinalTime fixed(double T) { return {false, T}; }
    static FinalTime free_with_guess(double T) { return {true, T}; }
};

struct ControlBounds {
    Vec lower, upper;
};

// Closed-form resolver u_S(x, p) for the singular components listed in
// `singular`; `u_frozen` carries the bang values of the other components.
using SingularControlFn = std::function<Vec(const Vec& x, const RowVec& p,
                                            const std::vector<int>& singular,
                                            const Vec& u_frozen)>;

// A control-affine optimal control problem
//   min phi0(x0, xT)   s.t.  xdot = f0(x) + sum_i u_i f_i(x),  eta(x0,xT) = 0,
// optionally with per-component control bounds and a free final time.
// Integral costs are handled by state augmentation: `cost_state` names the
// state that accumulates the running cost; its costate is identically 1 and
// is never a shooting unknown.
struct ProblemDef {
    std::string name;
    int n = 0;
    int m = 0;
    std::vector<VectorField> fields;  // f_0 .. f_m
    EndpointCost cost;
    EndpointConstraints constraints;
    std::optional<ControlBounds> bounds;
    FinalTime final_time;
    SingularControlFn closed_form_singular;
    int cost_state = -1;

    bool has_hessians() const;
    void validate() const;

    // Pin lookup by coordinate (nullopt when the coordinate is unconstrained).
    std::optional<double> initial_pin(int i) const;
    std::optional<double> terminal_pin(int i) const;
};

// Pointwise Pontryagin data at (x, p, u).
struct PontryaginPoint {
    Vec x;
    RowVec p;
    Vec u;
    double H = 0.0;       // p * (f0 + sum u_i f_i)
    RowVec Phi;           // (p f_i)_i = D_u H
    RowVec Phi_dot;       // -p B1(x, u)
};

struct SystemMatrices {
    Mat A;   // sum_{i=0..m} u_i f_i'(x)            (u_0 = 1)
    Mat B;   // columns f_i(x), i = 1..m
    Mat B1;  // A B - dB/dt, dB/dt columns f_i'(x) xdot
};

// State velocity f0(x) + sum u_i f_i(x).
Vec drift(const ProblemDef& prob, const Vec& x, const Vec& u);

SystemMatrices eval_matrices(const ProblemDef& prob, const Vec& x, const Vec& u);

PontryaginPoint eval_point(const ProblemDef& prob, const Vec& x, const RowVec& p, const Vec& u);

// Second time derivative of the switching function, holding u fixed in time.
// Affine in u; requires field hessians.
RowVec switching_accel(const ProblemDef& prob, const Vec& x, const RowVec& p, const Vec& u);

// Affine representation of the singular-component rows of switching_accel:
// rows(singular) = c0 + C1 * u_S with the other components frozen.
struct SingularSystem {
    Vec c0;
    Mat C1;
};
SingularSystem singular_system(const ProblemDef& prob, const Vec& x, const RowVec& p,
                               const std::vector<int>& singular, const Vec& u_frozen);

// Singular control from the vanishing of switching_accel on the given
// component set. Uses the problem's closed form when available, otherwise the
// generic affine solve. Throws LegendreClebschViolation when the coefficient
// matrix is singular beyond condition 1e12.
Vec singular_control(const ProblemDef& prob, const Vec& x, const RowVec& p,
                     const std::vector<int>& singular, const Vec& bang_values);

// R = -d(switching_accel)/du restricted to `singular` (full set if empty).
Mat legendre_clebsch_matrix(const ProblemDef& prob, const Vec& x, const RowVec& p,
                            const Vec& u, const std::vector<int>& singular = {});

// Worst relative mismatch between the supplied field derivatives and central
// finite differences over the probe points. Checks Jacobians against the
// values and hessians (when present) against the Jacobians.
double check_field_derivatives(const ProblemDef& prob, std::span<const Vec> probes);

inline constexpr double kLegendreClebschCondMax = 1e12;

}  // namespace shoot
