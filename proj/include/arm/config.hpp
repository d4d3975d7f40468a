#pragma once

#include <string>

#include "arm/simcore.hpp"
#include "arm/vision.hpp"

namespace arm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Calibration {
    double focal;         // px, possibly derived from (W, D, P)
    double targetWidth;   // m, actual width of the object to localize
};

/// Everything a scenario needs, loaded from one JSON document.
/// Angles are degrees in the file and radians here.
struct ScenarioConfig {
    ArmGeometry geometry = ArmGeometry::standard();
    LinkSet links = defaultLinks(geometry);
    MpcWeights weights = MpcWeights::standard();
    SimConfig sim;
    vision::CameraModel camera;
    vision::PipelineParams pipeline;
    Calibration calibration;

    static ScenarioConfig defaults();
    static ScenarioConfig loadFile(const std::string& path);
    static ScenarioConfig loadString(const std::string& json);
};

} // namespace arm
