#include <cmath>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "arm/config.hpp"
#include "arm/kinematics.hpp"
#include "arm/simcore.hpp"
#include "arm/vision.hpp"

namespace {

using nlohmann::json;

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2; // no detection / unreachable / never settled
constexpr int kExitInput = 3;  // bad file or config
constexpr int kExitDiverged = 4;

struct Localization {
    arm::vision::Detection det;
    double depth;
    Eigen::Vector3d cameraPoint;
    Eigen::Vector3d worldPoint;
};

std::optional<Localization> localize(const arm::ScenarioConfig& cfg,
                                     const std::string& imagePath) {
    const arm::vision::RasterImage img = arm::vision::loadPpm(imagePath);
    const auto det = arm::vision::detect(img, cfg.pipeline);
    if (!det) return std::nullopt;
    Localization loc;
    loc.det = *det;
    loc.depth = arm::vision::estimateDepth(cfg.camera.focal, cfg.calibration.targetWidth,
                                           det->pixelWidth);
    loc.cameraPoint = arm::vision::pixelToCamera(cfg.camera, *det, loc.depth);
    loc.worldPoint = arm::vision::cameraToWorld(cfg.camera, loc.cameraPoint);
    return loc;
}

json detectionJson(const Localization& loc) {
    return json{
        {"bbox", {loc.det.x, loc.det.y, loc.det.w, loc.det.h}},
        {"centroid", {loc.det.centroidU, loc.det.centroidV}},
        {"pixelWidth", loc.det.pixelWidth},
        {"depth_m", loc.depth},
        {"world_m", {loc.worldPoint.x(), loc.worldPoint.y(), loc.worldPoint.z()}},
    };
}

json summaryJson(const arm::SimSummary& sum) {
    json j{
        {"settled", sum.settlingTime.has_value()},
        {"peak_abs_torque", {sum.peakAbsTorque[0], sum.peakAbsTorque[1], sum.peakAbsTorque[2]}},
        {"terminal_torque",
         {sum.terminalTorque[0], sum.terminalTorque[1], sum.terminalTorque[2]}},
        {"total_cost", sum.totalCost},
    };
    if (sum.settlingTime) j["settling_time_s"] = *sum.settlingTime;
    return j;
}

int runSimulation(const arm::ScenarioConfig& cfg, const arm::JointVector& qd,
                  const std::string& outPath, json& extra) {
    arm::SimConfig sim = cfg.sim;
    sim.qd = qd;
    try {
        const arm::TrajectoryLog log = arm::runClosedLoop(sim, cfg.geometry, cfg.links, cfg.weights);
        if (!outPath.empty()) arm::writeCsv(log, outPath);
        const arm::SimSummary sum = arm::summarize(log, sim.settleThreshold);
        extra["summary"] = summaryJson(sum);
        std::cout << extra.dump(2) << "\n";
        return sum.settlingTime ? kExitOk : kExitDomain;
    } catch (const arm::DivergedError& e) {
        extra["error"] = e.what();
        std::cout << extra.dump(2) << "\n";
        return kExitDiverged;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"3-DOF arm toolkit: color/depth localization, closed-form IK and "
                 "receding-horizon torque control"};
    app.require_subcommand(1);

    std::string configPath, imagePath, outPath;
    double x = 0, y = 0, z = 0;
    double q1 = 0, q2 = 0, q3 = 0;

    CLI::App* cDetect = app.add_subcommand("detect", "locate the target in a PPM image");
    cDetect->add_option("--image", imagePath, "input PPM (P6) image")->required();
    cDetect->add_option("--config", configPath, "scenario config JSON");

    CLI::App* cIk = app.add_subcommand("ik", "closed-form inverse kinematics");
    cIk->add_option("--x", x, "target x (m)")->required();
    cIk->add_option("--y", y, "target y (m)")->required();
    cIk->add_option("--z", z, "target z (m)")->required();
    cIk->add_option("--config", configPath, "scenario config JSON");

    CLI::App* cFk = app.add_subcommand("fk", "forward kinematics");
    cFk->add_option("--q1", q1, "joint 1 (deg)")->required();
    cFk->add_option("--q2", q2, "joint 2 (deg)")->required();
    cFk->add_option("--q3", q3, "joint 3 (deg)")->required();
    cFk->add_option("--config", configPath, "scenario config JSON");

    CLI::App* cSim = app.add_subcommand("simulate", "closed-loop MPC regulation run");
    cSim->add_option("--config", configPath, "scenario config JSON")->required();
    cSim->add_option("--out", outPath, "trajectory CSV output path");

    CLI::App* cGrasp = app.add_subcommand("grasp", "detect, solve IK and simulate the reach");
    cGrasp->add_option("--image", imagePath, "input PPM (P6) image")->required();
    cGrasp->add_option("--config", configPath, "scenario config JSON");
    cGrasp->add_option("--out", outPath, "trajectory CSV output path");

    CLI11_PARSE(app, argc, argv);

    arm::ScenarioConfig cfg;
    try {
        cfg = configPath.empty() ? arm::ScenarioConfig::defaults()
                                 : arm::ScenarioConfig::loadFile(configPath);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (cDetect->parsed()) {
            const auto loc = localize(cfg, imagePath);
            if (!loc) {
                std::cerr << "NoDetection: no pixels matched the HSV range\n";
                return kExitDomain;
            }
            std::cout << detectionJson(*loc).dump(2) << "\n";
            return kExitOk;
        }

        if (cIk->parsed()) {
            const arm::IkResult r = arm::inverseKinematics(cfg.geometry, {x, y, z});
            if (!r.ok()) {
                std::cerr << "unreachable: " << arm::ikErrorName(r.error) << "\n";
                return kExitDomain;
            }
            std::cout << r.q[0] * kRadToDeg << " " << r.q[1] * kRadToDeg << " "
                      << r.q[2] * kRadToDeg << "\n";
            return kExitOk;
        }

        if (cFk->parsed()) {
            const arm::JointVector q(q1 / kRadToDeg, q2 / kRadToDeg, q3 / kRadToDeg);
            const Eigen::Vector3d p = arm::toolPosition(cfg.geometry, q);
            std::cout << p.x() << " " << p.y() << " " << p.z() << "\n";
            return kExitOk;
        }

        if (cSim->parsed()) {
            json extra = json::object();
            return runSimulation(cfg, cfg.sim.qd, outPath, extra);
        }

        if (cGrasp->parsed()) {
            const auto loc = localize(cfg, imagePath);
            if (!loc) {
                std::cerr << "NoDetection: no pixels matched the HSV range\n";
                return kExitDomain;
            }
            const arm::Reachability reach = arm::isReachable(cfg.geometry, loc->worldPoint);
            const arm::IkResult ik = arm::inverseKinematics(cfg.geometry, loc->worldPoint);
            json plan{
                {"detection", detectionJson(*loc)},
                {"reachable", reach.reachable},
                {"diagnostic", reach.diagnostic},
            };
            if (!reach.reachable) {
                std::cout << json{{"plan", plan}}.dump(2) << "\n";
                return kExitDomain;
            }
            plan["joint_target_deg"] = {ik.q[0] * kRadToDeg, ik.q[1] * kRadToDeg,
                                        ik.q[2] * kRadToDeg};
            json extra{{"plan", plan}};
            return runSimulation(cfg, ik.q, outPath, extra);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
