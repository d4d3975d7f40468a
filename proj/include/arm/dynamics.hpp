#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

#include "arm/kinematics.hpp"

namespace arm {

inline constexpr double kGravity = 9.8; // m/s^2

/// Rigid-body parameters of one link, expressed in its DH frame.
/// centroid is measured from the link's distal joint along the frame axes;
/// inertia is taken about the centroid, axes parallel to the link frame.
struct LinkInertia {
    double mass;               // kg
    Eigen::Vector3d centroid;  // (x_c, y_c, z_c) m
    Eigen::Matrix3d inertia;   // kg m^2

    /// Uniform slender rod of the given length lying along +x.
    static LinkInertia rod(double mass, double length);
};

using LinkSet = std::array<LinkInertia, 3>;

LinkSet defaultLinks(const ArmGeometry& geom);

struct JointState {
    JointVector q;
    Eigen::Vector3d qdot;
};

struct DynamicsTerms {
    Eigen::Matrix3d M; // inertia matrix
    Eigen::Matrix3d C; // Coriolis/centrifugal matrix (Christoffel)
    Eigen::Vector3d g; // gravity torque
};

struct IllConditionedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Eigen::Matrix3d massMatrix(const ArmGeometry& geom, const LinkSet& links,
                           const JointVector& q);

Eigen::Matrix3d coriolisMatrix(const ArmGeometry& geom, const LinkSet& links,
                               const JointState& state);

Eigen::Vector3d gravityVector(const ArmGeometry& geom, const LinkSet& links,
                              const JointVector& q, double g0 = kGravity);

DynamicsTerms dynamicsTerms(const ArmGeometry& geom, const LinkSet& links,
                            const JointState& state, double g0 = kGravity);

/// Kinetic energy 0.5 qdot' M qdot.
double kineticEnergy(const ArmGeometry& geom, const LinkSet& links,
                     const JointState& state);

/// Potential energy from centroid heights; gravityVector is its gradient.
double potentialEnergy(const ArmGeometry& geom, const LinkSet& links,
                       const JointVector& q, double g0 = kGravity);

/// Feedback-linearizing input map: tau = M u + g.
Eigen::Vector3d inputToTorque(const DynamicsTerms& terms, const Eigen::Vector3d& u);

/// Joint accelerations solving M qddot + C qdot + g = tau.
/// Throws IllConditionedError when cond(M) exceeds 1e12.
Eigen::Vector3d acceleration(const DynamicsTerms& terms, const JointState& state,
                             const Eigen::Vector3d& tau);

struct ErrorStateMatrices {
    Eigen::Matrix<double, 6, 6> A;
    Eigen::Matrix<double, 6, 3> B;
};

/// Continuous model in x = [e; qdot] coordinates:
/// A = [[0, -I], [0, -M^-1 C]], B = [0; I].
ErrorStateMatrices errorStateMatrices(const DynamicsTerms& terms);

} // namespace arm
