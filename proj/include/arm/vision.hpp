#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace arm::vision {

struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // RGB, row-major, 3 bytes per pixel

    static RasterImage filled(int w, int h, std::uint8_t r, std::uint8_t g,
                              std::uint8_t b);
    std::uint8_t* px(int x, int y) { return data.data() + 3 * (y * width + x); }
    const std::uint8_t* px(int x, int y) const {
        return data.data() + 3 * (y * width + x);
    }
};

struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // 0 or 1 per pixel

    std::uint8_t at(int x, int y) const { return data[y * width + x]; }
    void set(int x, int y, std::uint8_t v) { data[y * width + x] = v; }
};

/// Hue in degrees [0, 360); hMin > hMax selects the range wrapping through 0.
struct HsvRange {
    double hMin, hMax;
    double sMin, sMax;
    double vMin, vMax;
};

struct Hsv {
    double h; // [0, 360)
    double s; // [0, 1]
    double v; // [0, 1]
};

struct Detection {
    int x, y, w, h;       // bounding box, pixels
    double pixelWidth;    // == w
    double centroidU, centroidV;
};

struct CameraModel {
    double focal;    // pixels
    double cx, cy;   // principal point, pixels
    Eigen::Matrix3d mountRotation;
    Eigen::Vector3d mountTranslation;

    static Eigen::Matrix3d defaultMountRotation();
    static CameraModel standard(double focal, int imageWidth, int imageHeight);
};

Hsv rgbToHsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
bool hsvInRange(const Hsv& hsv, const HsvRange& range);

// Reference kernels, single threaded. Kept as the oracle for the
// OpenMP versions below; identical output is asserted in the tests.
namespace serial {
RasterImage boxBlur(const RasterImage& img, int radius);
Mask rgbToHsvMask(const RasterImage& img, const HsvRange& range);
Mask dilate(const Mask& mask, int iterations);
} // namespace serial

// OpenMP kernels used by the pipeline.
RasterImage boxBlur(const RasterImage& img, int radius);
Mask rgbToHsvMask(const RasterImage& img, const HsvRange& range);
Mask dilate(const Mask& mask, int iterations);

/// Largest 8-connected component of the mask; empty mask gives nullopt.
std::optional<Detection> largestComponentBBox(const Mask& mask);

struct PipelineParams {
    HsvRange hsv;
    int blurRadius = 1;
    int dilateIterations = 2;
};

std::optional<Detection> detect(const RasterImage& img, const PipelineParams& params);

double calibrateFocal(double knownWidth, double knownDistance,
                      double observedPixelWidth);
double estimateDepth(double focal, double actualWidth, double observedPixelWidth);

Eigen::Vector3d pixelToCamera(const CameraModel& cam, const Detection& det,
                              double depth);
Eigen::Vector3d cameraToWorld(const CameraModel& cam, const Eigen::Vector3d& p);

// Binary PPM (P6), maxval 255.
RasterImage loadPpm(const std::string& path);
void savePpm(const RasterImage& img, const std::string& path);

} // namespace arm::vision
