#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "arm/dynamics.hpp"

namespace arm {

struct NotPositiveDefiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Forward-Euler discrete model: Ad = I + T A, Bd = T B.
struct DiscreteModel {
    Eigen::MatrixXd Ad;
    Eigen::MatrixXd Bd;
    double T;
};

struct MpcWeights {
    Eigen::Matrix<double, 6, 6> Q;
    Eigen::Matrix3d R;
    Eigen::Matrix<double, 6, 6> P;
    int horizon;

    static MpcWeights standard();
};

/// Stacked prediction X = Cstack x + Fstack U over N+1 state blocks.
struct Prediction {
    Eigen::MatrixXd Cstack; // (N+1)n x n
    Eigen::MatrixXd Fstack; // (N+1)n x N m, strictly block lower triangular
    int horizon;
};

/// Condensed cost J = 1/2 x'Yx + x'Mcoup U + 1/2 U'HU.
struct CondensedQp {
    Eigen::MatrixXd Y;
    Eigen::MatrixXd Mcoup;
    Eigen::MatrixXd H;
};

struct StepDiagnostics {
    double predictedCost;
    double hConditionEstimate;
};

struct MpcStep {
    Eigen::Vector3d u;
    Eigen::Vector3d tau;
    StepDiagnostics diagnostics;
};

DiscreteModel discretize(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double T);

Prediction buildPrediction(const DiscreteModel& model, int horizon);

/// Stage cost Q on x_{k..k+N-1} and R on the inputs, terminal P on x_{k+N}.
/// Weight blocks may be any square matrices of matching state/input size.
CondensedQp condense(const Prediction& pred, const Eigen::MatrixXd& Q,
                     const Eigen::MatrixXd& R, const Eigen::MatrixXd& P);
CondensedQp condense(const Prediction& pred, const MpcWeights& w);

/// Unconstrained minimizer U = -H^-1 Mcoup' x.
Eigen::VectorXd solveHorizon(const CondensedQp& qp, const Eigen::VectorXd& x);

/// Evaluate the condensed quadratic at (x, U).
double condensedCost(const CondensedQp& qp, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& U);

/// One receding-horizon tick: linearize at the current state, discretize,
/// condense, solve, and map the first input block to a joint torque.
MpcStep recedingHorizonStep(const JointState& state, const JointVector& qd,
                            const ArmGeometry& geom, const LinkSet& links,
                            const MpcWeights& w, double T, double g0 = kGravity);

} // namespace arm
