#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arm/linmpc.hpp"

namespace arm {

struct DivergedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    double T = 0.05;          // controller period (s)
    int substeps = 10;        // RK4 plant steps per controller tick
    double duration = 12.0;   // s
    JointVector q0 = JointVector::Zero();
    JointVector qd = JointVector::Zero();
    double torqueLimit = 1.96;      // N m, checked post hoc
    bool saturateTorque = false;    // clamp tau to the limit when true
    double settleThreshold = 0.01;  // rad
    double g0 = kGravity;
};

struct TrajectoryRecord {
    double t;
    Eigen::Vector3d e;
    JointVector q;
    Eigen::Vector3d qdot;
    Eigen::Vector3d u;
    Eigen::Vector3d tau;
    double stageCost;
};

struct TrajectoryLog {
    std::vector<TrajectoryRecord> records;
    JointVector qd;
};

struct SimSummary {
    std::optional<double> settlingTime; // nullopt: never settled
    Eigen::Vector3d peakAbsTorque;
    Eigen::Vector3d terminalTorque;
    double totalCost;
};

/// One zero-order-hold RK4 step of the nonlinear plant.
JointState integratePlant(const ArmGeometry& geom, const LinkSet& links,
                          const JointState& state, const Eigen::Vector3d& tau,
                          double dt, double g0 = kGravity);

/// Closed-loop MPC regulation run. Throws DivergedError when any joint speed
/// exceeds 100 rad/s.
TrajectoryLog runClosedLoop(const SimConfig& cfg, const ArmGeometry& geom,
                            const LinkSet& links, const MpcWeights& w);

SimSummary summarize(const TrajectoryLog& log, double settleThreshold = 0.01);

/// CSV with header t,e1..e3,q1..q3,qd1..qd3,u1..u3,tau1..tau3,cost.
void writeCsv(const TrajectoryLog& log, const std::string& path);

} // namespace arm
