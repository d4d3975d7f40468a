#include "arm/dynamics.hpp"

#include <cmath>
#include <complex>

namespace arm {

namespace {

template <typename S>
Eigen::Matrix<S, 4, 4> linkTransformT(const DhRow& row, S q) {
    using std::cos;
    using std::sin;
    const S th = q + S(row.theta_offset);
    const S ct = cos(th), st = sin(th);
    const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
    Eigen::Matrix<S, 4, 4> T;
    T << ct, -st, S(0), S(row.a),
         st * ca, ct * ca, S(-sa), S(-sa * row.d),
         st * sa, ct * sa, S(ca), S(ca * row.d),
         S(0), S(0), S(0), S(1);
    return T;
}

// Eigen's cross() conjugates complex operands, which would break the
// complex-step derivative below; this is the plain bilinear cross product.
template <typename S>
Eigen::Matrix<S, 3, 1> crossBilinear(const Eigen::Matrix<S, 3, 1>& a,
                                     const Eigen::Matrix<S, 3, 1>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

// Inertia matrix from the kinetic-energy quadratic form, link by link:
// M = sum_i  m_i Jv_i' Jv_i + Jw_i' (R_i I_i R_i') Jw_i
// Templated so a complex perturbation of q yields exact partials (complex step).
template <typename S>
Eigen::Matrix<S, 3, 3> massMatrixT(const ArmGeometry& geom, const LinkSet& links,
                                   const Eigen::Matrix<S, 3, 1>& q) {
    using Mat3 = Eigen::Matrix<S, 3, 3>;
    using Vec3 = Eigen::Matrix<S, 3, 1>;

    Eigen::Matrix<S, 4, 4> T = Eigen::Matrix<S, 4, 4>::Identity();
    std::array<Mat3, 5> R;
    std::array<Vec3, 5> o;
    R[0] = Mat3::Identity();
    o[0] = Vec3::Zero();
    for (int i = 0; i < 4; ++i) {
        const S qi = geom.rows[i].joint_index ? q[*geom.rows[i].joint_index] : S(0);
        T = T * linkTransformT(geom.rows[i], qi);
        R[i + 1] = T.template block<3, 3>(0, 0);
        o[i + 1] = T.template block<3, 1>(0, 3);
    }

    Mat3 M = Mat3::Zero();
    for (int link = 1; link <= 3; ++link) {
        const LinkInertia& li = links[link - 1];
        const double distal = geom.rows[link].a; // length of this link along x
        const Vec3 centroidLocal(S(distal + li.centroid.x()), S(li.centroid.y()),
                                 S(li.centroid.z()));
        const Vec3 pc = o[link] + R[link] * centroidLocal;

        Mat3 Jv = Mat3::Zero();
        Mat3 Jw = Mat3::Zero();
        for (int j = 1; j <= link; ++j) {
            const Vec3 z = R[j].col(2);
            Jv.col(j - 1) = crossBilinear<S>(z, pc - o[j]);
            Jw.col(j - 1) = z;
        }
        const Mat3 Iw = R[link] * li.inertia.template cast<S>() * R[link].transpose();
        M += S(li.mass) * Jv.transpose() * Jv + Jw.transpose() * Iw * Jw;
    }
    return M;
}

// dM/dq_k via a complex step: Im(M(q + i h e_k)) / h, exact to roundoff.
std::array<Eigen::Matrix3d, 3> massMatrixPartials(const ArmGeometry& geom,
                                                  const LinkSet& links,
                                                  const JointVector& q) {
    using C = std::complex<double>;
    constexpr double h = 1e-20;
    std::array<Eigen::Matrix3d, 3> dM;
    for (int k = 0; k < 3; ++k) {
        Eigen::Matrix<C, 3, 1> qc = q.cast<C>();
        qc[k] += C(0.0, h);
        dM[k] = massMatrixT<C>(geom, links, qc).imag() / h;
    }
    return dM;
}

void checkConditioning(const Eigen::Matrix3d& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0 || hi / lo > 1e12) {
        throw IllConditionedError("inertia matrix is ill-conditioned");
    }
}

} // namespace

LinkInertia LinkInertia::rod(double mass, double length) {
    const double it = mass * length * length / 12.0;
    LinkInertia li;
    li.mass = mass;
    li.centroid = Eigen::Vector3d(-length / 2.0, 0.0, 0.0);
    li.inertia = Eigen::Vector3d(0.0, it, it).asDiagonal();
    return li;
}

LinkSet defaultLinks(const ArmGeometry& geom) {
    // Link 1 has zero length along x; give it a short rotor-like stub.
    return {LinkInertia::rod(0.08, 0.02), LinkInertia::rod(0.08, geom.a2),
            LinkInertia::rod(0.06, geom.a3)};
}

Eigen::Matrix3d massMatrix(const ArmGeometry& geom, const LinkSet& links,
                           const JointVector& q) {
    return massMatrixT<double>(geom, links, q);
}

Eigen::Matrix3d coriolisMatrix(const ArmGeometry& geom, const LinkSet& links,
                               const JointState& state) {
    const auto dM = massMatrixPartials(geom, links, state.q);
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double cij = 0.0;
            for (int k = 0; k < 3; ++k) {
                cij += 0.5 * (dM[k](i, j) + dM[j](i, k) - dM[i](j, k)) * state.qdot[k];
            }
            C(i, j) = cij;
        }
    }
    return C;
}

Eigen::Vector3d gravityVector(const ArmGeometry& geom, const LinkSet& links,
                              const JointVector& q, double g0) {
    const double a2 = geom.a2, a3 = geom.a3;
    const double c2 = std::cos(q[1]), s2 = std::sin(q[1]);
    const double c23 = std::cos(q[1] + q[2]), s23 = std::sin(q[1] + q[2]);
    const double m2 = links[1].mass, m3 = links[2].mass;
    const double xc2 = links[1].centroid.x(), yc2 = links[1].centroid.y();
    const double xc3 = links[2].centroid.x(), yc3 = links[2].centroid.y();

    Eigen::Vector3d g;
    g[0] = 0.0;
    g[1] = g0 * (m3 * (a2 * c2 + (a3 + xc3) * c23 - yc3 * s23) +
                 m2 * ((a2 + xc2) * c2 - yc2 * s2));
    g[2] = m3 * g0 * ((a3 + xc3) * c23 - yc3 * s23);
    return g;
}

DynamicsTerms dynamicsTerms(const ArmGeometry& geom, const LinkSet& links,
                            const JointState& state, double g0) {
    return {massMatrix(geom, links, state.q), coriolisMatrix(geom, links, state),
            gravityVector(geom, links, state.q, g0)};
}

double kineticEnergy(const ArmGeometry& geom, const LinkSet& links,
                     const JointState& state) {
    const Eigen::Matrix3d M = massMatrix(geom, links, state.q);
    return 0.5 * state.qdot.dot(M * state.qdot);
}

double potentialEnergy(const ArmGeometry& geom, const LinkSet& links,
                       const JointVector& q, double g0) {
    Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
    std::array<Eigen::Matrix4d, 5> F;
    F[0] = T;
    for (int i = 0; i < 4; ++i) {
        const double qi = geom.rows[i].joint_index ? q[*geom.rows[i].joint_index] : 0.0;
        T = T * linkTransform(geom.rows[i], qi);
        F[i + 1] = T;
    }
    double V = 0.0;
    for (int link = 1; link <= 3; ++link) {
        const LinkInertia& li = links[link - 1];
        const double distal = geom.rows[link].a;
        const Eigen::Vector3d local(distal + li.centroid.x(), li.centroid.y(),
                                    li.centroid.z());
        const Eigen::Vector3d pc =
            F[link].block<3, 1>(0, 3) + F[link].block<3, 3>(0, 0) * local;
        V += li.mass * g0 * pc.z();
    }
    return V;
}

Eigen::Vector3d inputToTorque(const DynamicsTerms& terms, const Eigen::Vector3d& u) {
    return terms.M * u + terms.g;
}

Eigen::Vector3d acceleration(const DynamicsTerms& terms, const JointState& state,
                             const Eigen::Vector3d& tau) {
    checkConditioning(terms.M);
    return terms.M.ldlt().solve(tau - terms.C * state.qdot - terms.g);
}

ErrorStateMatrices errorStateMatrices(const DynamicsTerms& terms) {
    checkConditioning(terms.M);
    ErrorStateMatrices m;
    m.A.setZero();
    m.A.block<3, 3>(0, 3) = -Eigen::Matrix3d::Identity();
    m.A.block<3, 3>(3, 3) = -terms.M.ldlt().solve(terms.C);
    m.B.setZero();
    m.B.block<3, 3>(3, 0) = Eigen::Matrix3d::Identity();
    return m;
}

} // namespace arm
