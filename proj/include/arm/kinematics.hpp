#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>

namespace arm {

using JointVector = Eigen::Vector3d;
using HomTransform = Eigen::Matrix4d;

/// One modified-DH row: the transform from frame i-1 to frame i is
/// Rx(alpha) * Tx(a) * Rz(theta) with theta = q + theta_offset.
/// a and alpha belong to the preceding link, d and theta to this joint.
struct DhRow {
    double a = 0.0;            // link length along x (m)
    double alpha = 0.0;        // link twist about x (rad)
    double d = 0.0;            // offset along z (m)
    double theta_offset = 0.0; // fixed angle added to the joint variable
    std::optional<int> joint_index; // actuated joint driving theta, if any
};

struct JointLimits {
    double lo;
    double hi;
    bool contains(double q) const { return q >= lo && q <= hi; }
};

/// 3-DOF articulated arm: yaw base, two pitch joints, fixed end link.
struct ArmGeometry {
    std::array<DhRow, 4> rows;
    double a2; // upper-arm length (m)
    double a3; // forearm length (m)
    std::array<JointLimits, 3> joint_limits;

    static ArmGeometry standard(double a2 = 0.105, double a3 = 0.100);
};

enum class IkError {
    None,
    Unreachable,    // target outside the annular workspace
    AxisSingular,   // target on the base axis, yaw undefined
    LimitViolation, // a solution exists but violates joint limits
};

const char* ikErrorName(IkError e);

struct IkResult {
    IkError error = IkError::None;
    JointVector q = JointVector::Zero();
    bool ok() const { return error == IkError::None; }
};

enum class ElbowBranch { Up, Down };

struct Reachability {
    bool reachable;
    IkError reason;      // IkError::None when reachable
    std::string diagnostic;
};

/// Single-row modified-DH transform with theta = q + theta_offset.
HomTransform linkTransform(const DhRow& row, double q);

/// Chained base-to-tool transform over all four rows.
HomTransform forwardKinematics(const ArmGeometry& geom, const JointVector& q);

/// End-effector position only.
Eigen::Vector3d toolPosition(const ArmGeometry& geom, const JointVector& q);

/// Closed-form position IK. The default branch takes s3 = +sqrt(1 - c3^2).
IkResult inverseKinematics(const ArmGeometry& geom, const Eigen::Vector3d& target,
                           ElbowBranch branch = ElbowBranch::Up);

Reachability isReachable(const ArmGeometry& geom, const Eigen::Vector3d& target);

} // namespace arm
