#include "arm/simcore.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

namespace arm {

namespace {

struct Deriv {
    Eigen::Vector3d dq;
    Eigen::Vector3d dqdot;
};

Deriv plantDeriv(const ArmGeometry& geom, const LinkSet& links, const JointState& s,
                 const Eigen::Vector3d& tau, double g0) {
    const DynamicsTerms terms = dynamicsTerms(geom, links, s, g0);
    return {s.qdot, acceleration(terms, s, tau)};
}

JointState advance(const JointState& s, const Deriv& d, double dt) {
    return {s.q + dt * d.dq, s.qdot + dt * d.dqdot};
}

} // namespace

JointState integratePlant(const ArmGeometry& geom, const LinkSet& links,
                          const JointState& state, const Eigen::Vector3d& tau,
                          double dt, double g0) {
    const Deriv k1 = plantDeriv(geom, links, state, tau, g0);
    const Deriv k2 = plantDeriv(geom, links, advance(state, k1, dt / 2.0), tau, g0);
    const Deriv k3 = plantDeriv(geom, links, advance(state, k2, dt / 2.0), tau, g0);
    const Deriv k4 = plantDeriv(geom, links, advance(state, k3, dt), tau, g0);
    JointState out;
    out.q = state.q + dt / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
    out.qdot =
        state.qdot + dt / 6.0 * (k1.dqdot + 2.0 * k2.dqdot + 2.0 * k3.dqdot + k4.dqdot);
    return out;
}

TrajectoryLog runClosedLoop(const SimConfig& cfg, const ArmGeometry& geom,
                            const LinkSet& links, const MpcWeights& w) {
    TrajectoryLog log;
    log.qd = cfg.qd;
    const int ticks = static_cast<int>(std::llround(cfg.duration / cfg.T));
    const double dt = cfg.T / cfg.substeps;

    JointState state{cfg.q0, Eigen::Vector3d::Zero()};
    for (int k = 0; k < ticks; ++k) {
        if (state.qdot.cwiseAbs().maxCoeff() > 100.0) {
            throw DivergedError("joint velocity exceeded 100 rad/s");
        }
        MpcStep step = recedingHorizonStep(state, cfg.qd, geom, links, w, cfg.T, cfg.g0);
        if (cfg.saturateTorque) {
            step.tau = step.tau.cwiseMax(-cfg.torqueLimit).cwiseMin(cfg.torqueLimit);
        }

        TrajectoryRecord rec;
        rec.t = k * cfg.T;
        rec.e = cfg.qd - state.q;
        rec.q = state.q;
        rec.qdot = state.qdot;
        rec.u = step.u;
        rec.tau = step.tau;
        Eigen::Matrix<double, 6, 1> x;
        x << rec.e, state.qdot;
        rec.stageCost = x.dot(w.Q * x) + step.u.dot(w.R * step.u);
        log.records.push_back(rec);

        for (int s = 0; s < cfg.substeps; ++s) {
            state = integratePlant(geom, links, state, step.tau, dt, cfg.g0);
        }
    }
    return log;
}

SimSummary summarize(const TrajectoryLog& log, double settleThreshold) {
    SimSummary sum;
    sum.peakAbsTorque.setZero();
    sum.totalCost = 0.0;

    std::optional<double> settledSince;
    double T = log.records.size() > 1 ? log.records[1].t - log.records[0].t : 0.0;
    for (const TrajectoryRecord& rec : log.records) {
        sum.peakAbsTorque = sum.peakAbsTorque.cwiseMax(rec.tau.cwiseAbs());
        sum.totalCost += rec.stageCost * T;
        if (rec.e.cwiseAbs().maxCoeff() < settleThreshold) {
            if (!settledSince) settledSince = rec.t;
        } else {
            settledSince.reset();
        }
    }
    sum.settlingTime = settledSince;
    sum.terminalTorque =
        log.records.empty() ? Eigen::Vector3d::Zero() : log.records.back().tau;
    return sum;
}

void writeCsv(const TrajectoryLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << "t,e1,e2,e3,q1,q2,q3,qd1,qd2,qd3,u1,u2,u3,tau1,tau2,tau3,cost\n";
    out << std::setprecision(17);
    for (const TrajectoryRecord& r : log.records) {
        out << r.t;
        for (int i = 0; i < 3; ++i) out << ',' << r.e[i];
        for (int i = 0; i < 3; ++i) out << ',' << r.q[i];
        for (int i = 0; i < 3; ++i) out << ',' << log.qd[i];
        for (int i = 0; i < 3; ++i) out << ',' << r.u[i];
        for (int i = 0; i < 3; ++i) out << ',' << r.tau[i];
        out << ',' << r.stageCost << '\n';
    }
}

} // namespace arm
