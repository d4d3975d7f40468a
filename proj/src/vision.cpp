#include "arm/vision.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace arm::vision {

RasterImage RasterImage::filled(int w, int h, std::uint8_t r, std::uint8_t g,
                                std::uint8_t b) {
    RasterImage img;
    img.width = w;
    img.height = h;
    img.data.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] = r;
        img.data[i + 1] = g;
        img.data[i + 2] = b;
    }
    return img;
}

Hsv rgbToHsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;

    Hsv out;
    out.v = mx;
    out.s = (mx > 0.0) ? delta / mx : 0.0;
    if (delta == 0.0) {
        out.h = 0.0;
    } else if (mx == r) {
        out.h = 60.0 * std::fmod((g - b) / delta, 6.0);
    } else if (mx == g) {
        out.h = 60.0 * ((b - r) / delta + 2.0);
    } else {
        out.h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (out.h < 0.0) out.h += 360.0;
    return out;
}

bool hsvInRange(const Hsv& hsv, const HsvRange& range) {
    const bool hueOk = (range.hMin <= range.hMax)
                           ? (hsv.h >= range.hMin && hsv.h <= range.hMax)
                           : (hsv.h >= range.hMin || hsv.h <= range.hMax);
    return hueOk && hsv.s >= range.sMin && hsv.s <= range.sMax &&
           hsv.v >= range.vMin && hsv.v <= range.vMax;
}

std::optional<Detection> largestComponentBBox(const Mask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    int bestArea = 0;
    Detection best{};
    std::vector<int> stack;

    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!mask.at(sx, sy) || label[sy * w + sx] >= 0) continue;
            // flood fill one component
            int area = 0;
            long sumX = 0, sumY = 0;
            int minX = sx, maxX = sx, minY = sy, maxY = sy;
            stack.clear();
            stack.push_back(sy * w + sx);
            label[sy * w + sx] = 1;
            while (!stack.empty()) {
                const int idx = stack.back();
                stack.pop_back();
                const int x = idx % w, y = idx / w;
                ++area;
                sumX += x;
                sumY += y;
                minX = std::min(minX, x);
                maxX = std::max(maxX, x);
                minY = std::min(minY, y);
                maxY = std::max(maxY, y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        if (!mask.at(nx, ny) || label[ny * w + nx] >= 0) continue;
                        label[ny * w + nx] = 1;
                        stack.push_back(ny * w + nx);
                    }
                }
            }
            if (area > bestArea) {
                bestArea = area;
                best.x = minX;
                best.y = minY;
                best.w = maxX - minX + 1;
                best.h = maxY - minY + 1;
                best.pixelWidth = best.w;
                best.centroidU = static_cast<double>(sumX) / area;
                best.centroidV = static_cast<double>(sumY) / area;
            }
        }
    }
    if (bestArea == 0) return std::nullopt;
    return best;
}

std::optional<Detection> detect(const RasterImage& img, const PipelineParams& params) {
    const RasterImage blurred = boxBlur(img, params.blurRadius);
    Mask mask = rgbToHsvMask(blurred, params.hsv);
    mask = dilate(mask, params.dilateIterations);
    return largestComponentBBox(mask);
}

double calibrateFocal(double knownWidth, double knownDistance,
                      double observedPixelWidth) {
    if (knownWidth <= 0.0 || knownDistance <= 0.0 || observedPixelWidth <= 0.0) {
        throw std::invalid_argument("NonPositiveInput: calibration values must be > 0");
    }
    return observedPixelWidth * knownDistance / knownWidth;
}

double estimateDepth(double focal, double actualWidth, double observedPixelWidth) {
    if (focal <= 0.0 || actualWidth <= 0.0 || observedPixelWidth <= 0.0) {
        throw std::invalid_argument("NonPositiveInput: depth inputs must be > 0");
    }
    return actualWidth * focal / observedPixelWidth;
}

Eigen::Vector3d pixelToCamera(const CameraModel& cam, const Detection& det,
                              double depth) {
    const double X = (det.centroidU - cam.cx) * depth / cam.focal;
    const double Y = (det.centroidV - cam.cy) * depth / cam.focal;
    return {X, Y, depth};
}

Eigen::Vector3d cameraToWorld(const CameraModel& cam, const Eigen::Vector3d& p) {
    return cam.mountRotation * p + cam.mountTranslation;
}

Eigen::Matrix3d CameraModel::defaultMountRotation() {
    // Optical axis along world -y, image x along world -x, image y down.
    Eigen::Matrix3d R;
    R << -1.0, 0.0, 0.0,
          0.0, 0.0, -1.0,
          0.0, -1.0, 0.0;
    return R;
}

CameraModel CameraModel::standard(double focal, int imageWidth, int imageHeight) {
    CameraModel cam;
    cam.focal = focal;
    cam.cx = imageWidth / 2.0;
    cam.cy = imageHeight / 2.0;
    cam.mountRotation = defaultMountRotation();
    cam.mountTranslation = Eigen::Vector3d(0.10, 0.125, 0.08);
    return cam;
}

RasterImage loadPpm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image file: " + path);

    std::string magic;
    in >> magic;
    if (magic != "P6") throw std::runtime_error("not a binary PPM (P6): " + path);

    auto nextToken = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw std::runtime_error("truncated PPM header: " + path);
    };

    RasterImage img;
    img.width = std::stoi(nextToken());
    img.height = std::stoi(nextToken());
    const int maxval = std::stoi(nextToken());
    if (img.width <= 0 || img.height <= 0 || maxval != 255) {
        throw std::runtime_error("unsupported PPM dimensions or maxval: " + path);
    }
    in.get(); // single whitespace after maxval
    img.data.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size())) {
        throw std::runtime_error("truncated PPM pixel data: " + path);
    }
    return img;
}

void savePpm(const RasterImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image file: " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
}

} // namespace arm::vision
