#include "arm/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace arm {

namespace {

using nlohmann::json;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

Eigen::Vector3d vec3(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(std::string("field '") + field + "' must be a 3-element array");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Eigen::Matrix3d mat3(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(std::string("field '") + field + "' must be a 3x3 array");
    }
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) m.row(r) = vec3(j[r], field).transpose();
    return m;
}

void parseGeometry(const json& j, ScenarioConfig& cfg) {
    const double a2 = j.value("a2", cfg.geometry.a2);
    const double a3 = j.value("a3", cfg.geometry.a3);
    if (a2 <= 0.0 || a3 <= 0.0) throw ConfigError("geometry: a2 and a3 must be > 0");
    cfg.geometry = ArmGeometry::standard(a2, a3);
    if (j.contains("joint_limits_deg")) {
        const json& lims = j["joint_limits_deg"];
        if (!lims.is_array() || lims.size() != 3) {
            throw ConfigError("geometry: joint_limits_deg must list 3 [lo, hi] pairs");
        }
        for (int i = 0; i < 3; ++i) {
            cfg.geometry.joint_limits[i] = {lims[i][0].get<double>() * kDegToRad,
                                            lims[i][1].get<double>() * kDegToRad};
        }
    }
}

void parseLinks(const json& j, ScenarioConfig& cfg) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError("links: expected an array of 3 link records");
    }
    for (int i = 0; i < 3; ++i) {
        const json& lj = j[i];
        LinkInertia& li = cfg.links[i];
        li.mass = lj.value("mass", li.mass);
        if (li.mass <= 0.0) throw ConfigError("links: mass must be > 0");
        if (lj.contains("centroid")) li.centroid = vec3(lj["centroid"], "links.centroid");
        if (lj.contains("inertia")) li.inertia = mat3(lj["inertia"], "links.inertia");
        if (lj.contains("inertia_diag")) {
            li.inertia = vec3(lj["inertia_diag"], "links.inertia_diag").asDiagonal();
        }
    }
}

void parseWeights(const json& j, ScenarioConfig& cfg) {
    MpcWeights& w = cfg.weights;
    if (j.contains("Q_diag")) {
        const json& d = j["Q_diag"];
        if (!d.is_array() || d.size() != 6) throw ConfigError("weights: Q_diag needs 6 entries");
        Eigen::Matrix<double, 6, 1> v;
        for (int i = 0; i < 6; ++i) v[i] = d[i].get<double>();
        w.Q = v.asDiagonal();
    }
    if (j.contains("P_diag")) {
        const json& d = j["P_diag"];
        if (!d.is_array() || d.size() != 6) throw ConfigError("weights: P_diag needs 6 entries");
        Eigen::Matrix<double, 6, 1> v;
        for (int i = 0; i < 6; ++i) v[i] = d[i].get<double>();
        w.P = v.asDiagonal();
    } else if (j.contains("Q_diag")) {
        w.P = w.Q;
    }
    if (j.contains("R_diag")) {
        w.R = vec3(j["R_diag"], "weights.R_diag").asDiagonal();
    }
    w.horizon = j.value("horizon", w.horizon);
    if (w.horizon < 1) throw ConfigError("weights: horizon must be >= 1");
}

void parseSim(const json& j, ScenarioConfig& cfg) {
    SimConfig& s = cfg.sim;
    s.T = j.value("T", s.T);
    s.substeps = j.value("substeps", s.substeps);
    s.duration = j.value("duration", s.duration);
    s.torqueLimit = j.value("torque_limit", s.torqueLimit);
    s.saturateTorque = j.value("saturate_torque", s.saturateTorque);
    s.settleThreshold = j.value("settle_threshold", s.settleThreshold);
    if (j.contains("q0_deg")) s.q0 = vec3(j["q0_deg"], "sim.q0_deg") * kDegToRad;
    if (j.contains("qd_deg")) s.qd = vec3(j["qd_deg"], "sim.qd_deg") * kDegToRad;
    if (s.T <= 0.0 || s.duration <= 0.0 || s.substeps < 1 || s.torqueLimit <= 0.0) {
        throw ConfigError("sim: T, duration, substeps and torque_limit must be positive");
    }
}

void parseCamera(const json& j, ScenarioConfig& cfg) {
    vision::CameraModel& cam = cfg.camera;
    cam.cx = j.value("cx", cam.cx);
    cam.cy = j.value("cy", cam.cy);
    if (j.contains("mount_translation")) {
        cam.mountTranslation = vec3(j["mount_translation"], "camera.mount_translation");
    }
    if (j.contains("mount_rotation")) {
        const Eigen::Matrix3d R = mat3(j["mount_rotation"], "camera.mount_rotation");
        if ((R * R.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-6) {
            throw ConfigError("camera: mount_rotation is not orthonormal");
        }
        cam.mountRotation = R;
    }
}

void parseHsv(const json& j, ScenarioConfig& cfg) {
    vision::HsvRange& r = cfg.pipeline.hsv;
    r.hMin = j.value("h_min", r.hMin);
    r.hMax = j.value("h_max", r.hMax);
    r.sMin = j.value("s_min", r.sMin);
    r.sMax = j.value("s_max", r.sMax);
    r.vMin = j.value("v_min", r.vMin);
    r.vMax = j.value("v_max", r.vMax);
    cfg.pipeline.blurRadius = j.value("blur_radius", cfg.pipeline.blurRadius);
    cfg.pipeline.dilateIterations = j.value("dilate_iterations", cfg.pipeline.dilateIterations);
}

void parseCalibration(const json& j, ScenarioConfig& cfg) {
    const bool hasF = j.contains("focal");
    const bool hasTriple =
        j.contains("known_width") && j.contains("known_distance") && j.contains("observed_pixel_width");
    if (hasF == hasTriple) {
        throw ConfigError(
            "calibration: supply exactly one of 'focal' or "
            "{known_width, known_distance, observed_pixel_width}");
    }
    if (hasF) {
        cfg.calibration.focal = j["focal"].get<double>();
        if (cfg.calibration.focal <= 0.0) throw ConfigError("calibration: focal must be > 0");
    } else {
        cfg.calibration.focal =
            vision::calibrateFocal(j["known_width"].get<double>(), j["known_distance"].get<double>(),
                                   j["observed_pixel_width"].get<double>());
    }
    cfg.calibration.targetWidth =
        j.value("target_width", j.value("known_width", cfg.calibration.targetWidth));
    if (cfg.calibration.targetWidth <= 0.0) {
        throw ConfigError("calibration: target_width must be > 0");
    }
    cfg.camera.focal = cfg.calibration.focal;
}

} // namespace

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig cfg;
    cfg.camera = vision::CameraModel::standard(800.0, 640, 480);
    cfg.pipeline.hsv = {90.0, 150.0, 0.4, 1.0, 0.2, 1.0}; // green
    cfg.calibration = {800.0, 0.04};
    return cfg;
}

ScenarioConfig ScenarioConfig::loadString(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    ScenarioConfig cfg = defaults();
    try {
        if (j.contains("geometry")) parseGeometry(j["geometry"], cfg);
        cfg.links = defaultLinks(cfg.geometry);
        if (j.contains("links")) parseLinks(j["links"], cfg);
        if (j.contains("weights")) parseWeights(j["weights"], cfg);
        if (j.contains("sim")) parseSim(j["sim"], cfg);
        if (j.contains("camera")) parseCamera(j["camera"], cfg);
        if (j.contains("hsv")) parseHsv(j["hsv"], cfg);
        if (j.contains("calibration")) parseCalibration(j["calibration"], cfg);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::loadFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return loadString(text);
}

} // namespace arm
