#include "arm/linmpc.hpp"

namespace arm {

MpcWeights MpcWeights::standard() {
    MpcWeights w;
    w.Q = Eigen::Matrix<double, 6, 1>(100.0, 100.0, 100.0, 1.0, 1.0, 1.0).asDiagonal();
    w.R = 0.1 * Eigen::Matrix3d::Identity();
    w.P = w.Q;
    w.horizon = 20;
    return w;
}

DiscreteModel discretize(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double T) {
    DiscreteModel m;
    m.Ad = Eigen::MatrixXd::Identity(A.rows(), A.cols()) + T * A;
    m.Bd = T * B;
    m.T = T;
    return m;
}

Prediction buildPrediction(const DiscreteModel& model, int horizon) {
    const int n = static_cast<int>(model.Ad.rows());
    const int m = static_cast<int>(model.Bd.cols());
    Prediction p;
    p.horizon = horizon;
    p.Cstack = Eigen::MatrixXd::Zero((horizon + 1) * n, n);
    p.Fstack = Eigen::MatrixXd::Zero((horizon + 1) * n, horizon * m);

    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    p.Cstack.topRows(n) = power;
    for (int i = 1; i <= horizon; ++i) {
        power = model.Ad * power; // Ad^i
        p.Cstack.middleRows(i * n, n) = power;
        // row block i: [Ad^{i-1}Bd, ..., AdBd, Bd, 0, ...]
        p.Fstack.block(i * n, (i - 1) * m, n, m) = model.Bd;
        for (int j = i - 2; j >= 0; --j) {
            p.Fstack.block(i * n, j * m, n, m) =
                model.Ad * p.Fstack.block(i * n, (j + 1) * m, n, m);
        }
    }
    return p;
}

CondensedQp condense(const Prediction& pred, const Eigen::MatrixXd& Q,
                     const Eigen::MatrixXd& R, const Eigen::MatrixXd& P) {
    const int N = pred.horizon;
    const int n = static_cast<int>(Q.rows());
    const int m = static_cast<int>(R.rows());

    Eigen::MatrixXd Qbar = Eigen::MatrixXd::Zero((N + 1) * n, (N + 1) * n);
    for (int i = 0; i < N; ++i) Qbar.block(i * n, i * n, n, n) = Q;
    Qbar.block(N * n, N * n, n, n) = P;

    Eigen::MatrixXd Rbar = Eigen::MatrixXd::Zero(N * m, N * m);
    for (int i = 0; i < N; ++i) Rbar.block(i * m, i * m, m, m) = R;

    CondensedQp qp;
    qp.Y = 2.0 * pred.Cstack.transpose() * Qbar * pred.Cstack;
    qp.Mcoup = 2.0 * pred.Cstack.transpose() * Qbar * pred.Fstack;
    qp.H = 2.0 * (pred.Fstack.transpose() * Qbar * pred.Fstack + Rbar);

    if (Eigen::LLT<Eigen::MatrixXd>(qp.H).info() != Eigen::Success) {
        throw NotPositiveDefiniteError("condensed Hessian is not positive definite");
    }
    return qp;
}

CondensedQp condense(const Prediction& pred, const MpcWeights& w) {
    return condense(pred, w.Q, w.R, w.P);
}

Eigen::VectorXd solveHorizon(const CondensedQp& qp, const Eigen::VectorXd& x) {
    Eigen::LLT<Eigen::MatrixXd> llt(qp.H);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("condensed Hessian is not positive definite");
    }
    return llt.solve(-(qp.Mcoup.transpose() * x));
}

double condensedCost(const CondensedQp& qp, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& U) {
    return 0.5 * x.dot(qp.Y * x) + x.dot(qp.Mcoup * U) + 0.5 * U.dot(qp.H * U);
}

MpcStep recedingHorizonStep(const JointState& state, const JointVector& qd,
                            const ArmGeometry& geom, const LinkSet& links,
                            const MpcWeights& w, double T, double g0) {
    const DynamicsTerms terms = dynamicsTerms(geom, links, state, g0);
    const ErrorStateMatrices cs = errorStateMatrices(terms);
    const DiscreteModel model = discretize(cs.A, cs.B, T);
    const Prediction pred = buildPrediction(model, w.horizon);
    const CondensedQp qp = condense(pred, w);

    Eigen::Matrix<double, 6, 1> x;
    x << qd - state.q, state.qdot;

    const Eigen::VectorXd U = solveHorizon(qp, x);

    MpcStep step;
    step.u = U.head<3>();
    step.tau = inputToTorque(terms, step.u);
    step.diagnostics.predictedCost = condensedCost(qp, x, U);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qp.H);
    step.diagnostics.hConditionEstimate =
        es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    return step;
}

} // namespace arm
