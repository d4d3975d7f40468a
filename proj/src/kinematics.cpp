#include "arm/kinematics.hpp"

#include <cmath>

namespace arm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kCosClampTol = 1e-10; // |c3|-1 up to this is treated as roundoff
} // namespace

ArmGeometry ArmGeometry::standard(double a2, double a3) {
    ArmGeometry g;
    g.a2 = a2;
    g.a3 = a3;
    g.rows[0] = {0.0, 0.0, 0.0, 0.0, 0};
    g.rows[1] = {0.0, kPi / 2.0, 0.0, 0.0, 1};
    g.rows[2] = {a2, 0.0, 0.0, 0.0, 2};
    g.rows[3] = {a3, 0.0, 0.0, 0.0, std::nullopt};
    g.joint_limits = {JointLimits{-kPi, kPi}, JointLimits{0.0, kPi}, JointLimits{0.0, kPi}};
    return g;
}

const char* ikErrorName(IkError e) {
    switch (e) {
        case IkError::None: return "None";
        case IkError::Unreachable: return "Unreachable";
        case IkError::AxisSingular: return "AxisSingular";
        case IkError::LimitViolation: return "LimitViolation";
    }
    return "Unknown";
}

HomTransform linkTransform(const DhRow& row, double q) {
    const double th = q + row.theta_offset;
    const double ct = std::cos(th), st = std::sin(th);
    const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
    HomTransform T;
    T << ct, -st, 0.0, row.a,
         st * ca, ct * ca, -sa, -sa * row.d,
         st * sa, ct * sa, ca, ca * row.d,
         0.0, 0.0, 0.0, 1.0;
    return T;
}

HomTransform forwardKinematics(const ArmGeometry& geom, const JointVector& q) {
    HomTransform T = HomTransform::Identity();
    for (const DhRow& row : geom.rows) {
        const double qi = row.joint_index ? q[*row.joint_index] : 0.0;
        T = T * linkTransform(row, qi);
    }
    return T;
}

Eigen::Vector3d toolPosition(const ArmGeometry& geom, const JointVector& q) {
    return forwardKinematics(geom, q).block<3, 1>(0, 3);
}

IkResult inverseKinematics(const ArmGeometry& geom, const Eigen::Vector3d& target,
                           ElbowBranch branch) {
    const double px = target.x(), py = target.y(), pz = target.z();
    const double a2 = geom.a2, a3 = geom.a3;

    const double rho2 = px * px + py * py;
    double c3 = (rho2 + pz * pz - a2 * a2 - a3 * a3) / (2.0 * a2 * a3);
    if (std::abs(c3) > 1.0 + kCosClampTol) {
        return {IkError::Unreachable, JointVector::Zero()};
    }
    // Snap to the workspace boundary within roundoff so fully stretched or
    // fully folded targets give exact boundary angles instead of sqrt-of-eps
    // residuals that trip the joint-limit gate.
    if (1.0 - std::abs(c3) <= kCosClampTol) c3 = std::copysign(1.0, c3);
    if (rho2 == 0.0) return {IkError::AxisSingular, JointVector::Zero()};
    double s3 = std::sqrt(1.0 - c3 * c3);
    if (branch == ElbowBranch::Down) s3 = -s3;

    const double theta1 = std::atan2(py, px);
    const double theta3 = std::atan2(s3, c3);

    const double rho = std::sqrt(rho2);
    const double k1 = a2 + a3 * c3;
    const double k2 = a3 * s3;
    const double theta2 = std::atan2(pz * k1 - rho * k2, rho * k1 + pz * k2);

    JointVector q(theta1, theta2, theta3);
    for (int i = 0; i < 3; ++i) {
        if (!geom.joint_limits[i].contains(q[i])) return {IkError::LimitViolation, q};
    }
    return {IkError::None, q};
}

Reachability isReachable(const ArmGeometry& geom, const Eigen::Vector3d& target) {
    const IkResult r = inverseKinematics(geom, target);
    if (r.ok()) return {true, IkError::None, "reachable"};
    return {false, r.error, ikErrorName(r.error)};
}

} // namespace arm
