#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "arm/dynamics.hpp"
#include "arm/simcore.hpp"

using namespace arm;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<Eigen::Matrix4d, 4> frames(const ArmGeometry& g, const JointVector& q) {
    std::array<Eigen::Matrix4d, 4> F;
    Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
    for (int i = 0; i < 4; ++i) {
        const double qi = g.rows[i].joint_index ? q[*g.rows[i].joint_index] : 0.0;
        T = T * linkTransform(g.rows[i], qi);
        F[i] = T;
    }
    return F;
}

Eigen::Vector3d centroidWorld(const ArmGeometry& g, const LinkSet& links, int link,
                              const JointVector& q) {
    const auto F = frames(g, q);
    const Eigen::Matrix4d& T = F[link - 1]; // frame `link`
    const LinkInertia& li = links[link - 1];
    const Eigen::Vector3d local(g.rows[link].a + li.centroid.x(), li.centroid.y(),
                                li.centroid.z());
    return T.block<3, 1>(0, 3) + T.block<3, 3>(0, 0) * local;
}

// Kinetic energy by finite differences of FK along q(t) = q + t qdot.
// Independent of massMatrix: velocities come straight from the transform chain.
double numericKineticEnergy(const ArmGeometry& g, const LinkSet& links,
                            const JointVector& q, const Eigen::Vector3d& qdot) {
    const double h = 1e-6;
    const auto Fp = frames(g, q + h * qdot);
    const auto Fm = frames(g, q - h * qdot);
    double ke = 0.0;
    for (int link = 1; link <= 3; ++link) {
        const LinkInertia& li = links[link - 1];
        const Eigen::Vector3d local(g.rows[link].a + li.centroid.x(), li.centroid.y(),
                                    li.centroid.z());
        const Eigen::Vector3d pp =
            Fp[link - 1].block<3, 1>(0, 3) + Fp[link - 1].block<3, 3>(0, 0) * local;
        const Eigen::Vector3d pm =
            Fm[link - 1].block<3, 1>(0, 3) + Fm[link - 1].block<3, 3>(0, 0) * local;
        const Eigen::Vector3d v = (pp - pm) / (2.0 * h);

        const Eigen::Matrix3d Rp = Fp[link - 1].block<3, 3>(0, 0);
        const Eigen::Matrix3d Rm = Fm[link - 1].block<3, 3>(0, 0);
        const Eigen::Matrix3d R = frames(g, q)[link - 1].block<3, 3>(0, 0);
        const Eigen::Matrix3d Wskew = ((Rp - Rm) / (2.0 * h)) * R.transpose();
        const Eigen::Vector3d w(Wskew(2, 1), Wskew(0, 2), Wskew(1, 0));

        ke += 0.5 * li.mass * v.squaredNorm() +
              0.5 * w.dot(R * li.inertia * R.transpose() * w);
    }
    return ke;
}

JointVector randomQ(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    return {u(rng), u(rng), u(rng)};
}

Eigen::Vector3d randomV(std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

} // namespace

TEST_CASE("inertia matrix is the kinetic-energy quadratic form") {
    const ArmGeometry g = ArmGeometry::standard();
    const LinkSet links = defaultLinks(g);
    std::mt19937 rng(3);

    for (int i = 0; i < 50; ++i) {
        const JointVector q = randomQ(rng);
        const Eigen::Vector3d qdot = randomV(rng);
        const Eigen::Matrix3d M = massMatrix(g, links, q);
        CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        const double ke = 0.5 * qdot.dot(M * qdot);
        CHECK(ke == doctest::Approx(numericKineticEnergy(g, links, q, qdot)).epsilon(1e-6));
    }
}

TEST_CASE("inertia entries from polarization of the numeric energy") {
    const ArmGeometry g = ArmGeometry::standard();
    const LinkSet links = defaultLinks(g);
    std::mt19937 rng(5);
    const JointVector q = randomQ(rng);
    const Eigen::Matrix3d M = massMatrix(g, links, q);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d ei = Eigen::Vector3d::Zero(), ej = Eigen::Vector3d::Zero();
            ei[i] = 1.0;
            ej[j] = 1.0;
            const double mij = numericKineticEnergy(g, links, q, ei + ej) -
                               numericKineticEnergy(g, links, q, ei) -
                               numericKineticEnergy(g, links, q, ej);
            CHECK(M(i, j) == doctest::Approx(mij).epsilon(1e-6));
        }
    }
}

TEST_CASE("point-mass links reduce to the textbook 2R-plus-yaw form") {
    const ArmGeometry g = ArmGeometry::standard();
    LinkSet links;
    const double m1 = 0.05, m2 = 0.08, m3 = 0.06;
    links[0] = {m1, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Zero()};
    links[1] = {m2, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Zero()};
    links[2] = {m3, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Zero()};

    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        const JointVector q = randomQ(rng);
        const double a2 = g.a2, a3 = g.a3;
        const double c2 = std::cos(q[1]), c3 = std::cos(q[2]);
        const double c23 = std::cos(q[1] + q[2]);
        const double rho2 = a2 * c2;          // elbow mass radius about the yaw axis
        const double rho3 = a2 * c2 + a3 * c23;

        Eigen::Matrix3d expect = Eigen::Matrix3d::Zero();
        expect(0, 0) = m2 * rho2 * rho2 + m3 * rho3 * rho3;
        expect(1, 1) = m2 * a2 * a2 + m3 * (a2 * a2 + a3 * a3 + 2 * a2 * a3 * c3);
        expect(1, 2) = expect(2, 1) = m3 * (a3 * a3 + a2 * a3 * c3);
        expect(2, 2) = m3 * a3 * a3;

        CHECK((massMatrix(g, links, q) - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("inertia matrix positive definite across the workspace") {
    const ArmGeometry g = ArmGeometry::standard();
    const LinkSet links = defaultLinks(g);
    std::mt19937 rng(9);
    for (int i = 0; i < 2000; ++i) {
        const Eigen::Matrix3d M = massMatrix(g, links, randomQ(rng));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("Coriolis matrix") {
    const ArmGeometry g = ArmGeometry::standard();
    const LinkSet links = defaultLinks(g);
    std::mt19937 rng(11);

    SUBCASE("zero velocity gives zero matrix") {
        const JointState s{randomQ(rng), Eigen::Vector3d::Zero()};
        CHECK(coriolisMatrix(g, links, s).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("Mdot - 2C is skew symmetric") {
        for (int i = 0; i < 50; ++i) {
            const JointState s{randomQ(rng), randomV(rng)};
            const Eigen::Matrix3d C = coriolisMatrix(g, links, s);
            const double h = 1e-6;
            const Eigen::Matrix3d Mdot = (massMatrix(g, links, s.q + h * s.qdot) -
                                          massMatrix(g, links, s.q - h * s.qdot)) /
                                         (2.0 * h);
            const Eigen::Matrix3d S = Mdot - 2.0 * C;
            CHECK((S + S.transpose()).cwiseAbs().maxCoeff() < 1e-9);
            const Eigen::Vector3d v = randomV(rng);
            CHECK(std::abs(v.dot(S * v)) < 1e-9);
        }
    }

    SUBCASE("C qdot matches the Lagrange-equation residual") {
        for (int i = 0; i < 20; ++i) {
            const JointState s{randomQ(rng), randomV(rng)};
            const double h = 1e-6;
            // d/dt (M qdot) along q(t) = q + t qdot with qddot = 0
            const Eigen::Vector3d dMomentum =
                (massMatrix(g, links, s.q + h * s.qdot) * s.qdot -
                 massMatrix(g, links, s.q - h * s.qdot) * s.qdot) /
                (2.0 * h);
            // dT/dq by central differences of the numeric energy
            Eigen::Vector3d dTdq;
            for (int k = 0; k < 3; ++k) {
                JointVector qp = s.q, qm = s.q;
                qp[k] += h;
                qm[k] -= h;
                dTdq[k] = (numericKineticEnergy(g, links, qp, s.qdot) -
                           numericKineticEnergy(g, links, qm, s.qdot)) /
                          (2.0 * h);
            }
            const Eigen::Vector3d expect = dMomentum - dTdq;
            const Eigen::Vector3d got = coriolisMatrix(g, links, s) * s.qdot;
            CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("gravity vector") {
    const ArmGeometry g = ArmGeometry::standard();
    const LinkSet links = defaultLinks(g);
    std::mt19937 rng(13);

    SUBCASE("horizontal shoulder with straight elbow carries no gravity torque") {
        // centroids on the x axis, q2 = pi/2, q3 = 0: every cosine term vanishes
        CHECK(gravityVector(g, links, {0.7, kPi / 2, 0}).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("stretched-out configuration") {
        const double m2 = links[1].mass, m3 = links[2].mass;
        const double xc2 = links[1].centroid.x(), xc3 = links[2].centroid.x();
        const Eigen::Vector3d expect(
            0.0, kGravity * (m3 * (g.a2 + g.a3 + xc3) + m2 * (g.a2 + xc2)),
            m3 * kGravity * (g.a3 + xc3));
        CHECK((gravityVector(g, links, {0, 0, 0}) - expect).cwiseAbs().maxCoeff() <
              1e-12);
    }

    SUBCASE("matches the potential-energy gradient") {
        for (int i = 0; i < 100; ++i) {
            const JointVector q = randomQ(rng);
            const Eigen::Vector3d gv = gravityVector(g, links, q);
            const double h = 1e-6;
            for (int k = 0; k < 3; ++k) {
                JointVector qp = q, qm = q;
                qp[k] += h;
                qm[k] -= h;
                const double grad =
                    (potentialEnergy(g, links, qp) - potentialEnergy(g, links, qm)) /
                    (2.0 * h);
                CHECK(gv[k] == doctest::Approx(grad).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("input map and acceleration") {
    const ArmGeometry g = ArmGeometry::standard();
    const LinkSet links = defaultLinks(g);
    std::mt19937 rng(17);

    SUBCASE("zero input holds against gravity") {
        const JointState s{randomQ(rng), Eigen::Vector3d::Zero()};
        const DynamicsTerms terms = dynamicsTerms(g, links, s);
        const Eigen::Vector3d tau = inputToTorque(terms, Eigen::Vector3d::Zero());
        CHECK((tau - terms.g).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(acceleration(terms, s, tau).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("identity inertia passes the input through") {
        DynamicsTerms terms{Eigen::Matrix3d::Identity(), Eigen::Matrix3d::Zero(),
                            Eigen::Vector3d::Zero()};
        const Eigen::Vector3d u(0.4, -0.2, 1.1);
        CHECK((inputToTorque(terms, u) - u).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("tau = M u + g recovers qddot = -M^-1 C qdot + u") {
        for (int i = 0; i < 50; ++i) {
            const JointState s{randomQ(rng), randomV(rng)};
            const DynamicsTerms terms = dynamicsTerms(g, links, s);
            const Eigen::Vector3d u = randomV(rng);
            const Eigen::Vector3d qdd =
                acceleration(terms, s, inputToTorque(terms, u));
            const Eigen::Vector3d expect =
                -terms.M.ldlt().solve(terms.C * s.qdot) + u;
            CHECK((qdd - expect).cwiseAbs().maxCoeff() < 1e-10);
        }
    }

    SUBCASE("dynamics residual vanishes") {
        for (int i = 0; i < 50; ++i) {
            const JointState s{randomQ(rng), randomV(rng)};
            const DynamicsTerms terms = dynamicsTerms(g, links, s);
            const Eigen::Vector3d tau = randomV(rng, 0.5);
            const Eigen::Vector3d qdd = acceleration(terms, s, tau);
            const Eigen::Vector3d res = terms.M * qdd + terms.C * s.qdot + terms.g - tau;
            CHECK(res.cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("error-coordinate state-space matrices") {
    const ArmGeometry g = ArmGeometry::standard();
    const LinkSet links = defaultLinks(g);
    std::mt19937 rng(19);

    SUBCASE("rest state yields the pure double-integrator skeleton") {
        const DynamicsTerms terms =
            dynamicsTerms(g, links, {randomQ(rng), Eigen::Vector3d::Zero()});
        const ErrorStateMatrices m = errorStateMatrices(terms);
        Eigen::Matrix<double, 6, 6> expectA = Eigen::Matrix<double, 6, 6>::Zero();
        expectA.block<3, 3>(0, 3) = -Eigen::Matrix3d::Identity();
        CHECK((m.A - expectA).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("block structure and the inverse check") {
        for (int i = 0; i < 50; ++i) {
            const DynamicsTerms terms =
                dynamicsTerms(g, links, {randomQ(rng), randomV(rng)});
            const ErrorStateMatrices m = errorStateMatrices(terms);
            CHECK(m.A.block<3, 3>(0, 0).cwiseAbs().maxCoeff() == 0.0);
            CHECK(m.A.block<3, 3>(3, 0).cwiseAbs().maxCoeff() == 0.0);
            CHECK(m.B.block<3, 3>(0, 0).cwiseAbs().maxCoeff() == 0.0);
            CHECK((m.B.block<3, 3>(3, 0) - Eigen::Matrix3d::Identity())
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
            const Eigen::Matrix3d back = -terms.M * m.A.block<3, 3>(3, 3);
            CHECK((back - terms.C).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("energy balance along a simulated trajectory") {
    const ArmGeometry g = ArmGeometry::standard();
    const LinkSet links = defaultLinks(g);

    SUBCASE("passivity with zero torque") {
        JointState s{{0.2, 0.9, 0.6}, {0.3, -0.2, 0.4}};
        const double dt = 1e-3;
        const double e0 = kineticEnergy(g, links, s) + potentialEnergy(g, links, s.q);
        for (int i = 0; i < 1000; ++i) {
            s = integratePlant(g, links, s, Eigen::Vector3d::Zero(), dt);
        }
        const double e1 = kineticEnergy(g, links, s) + potentialEnergy(g, links, s.q);
        CHECK(std::abs(e1 - e0) < 1e-6);
    }

    SUBCASE("fixed point: at rest with tau = g the state is stationary") {
        const JointVector q(0.3, 1.1, 0.5);
        JointState s{q, Eigen::Vector3d::Zero()};
        const Eigen::Vector3d tau = gravityVector(g, links, q);
        for (int i = 0; i < 100; ++i) s = integratePlant(g, links, s, tau, 5e-3);
        CHECK((s.q - q).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(s.qdot.cwiseAbs().maxCoeff() < 1e-12);
    }
}
