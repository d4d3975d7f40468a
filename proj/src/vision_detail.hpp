#pragma once

#include <algorithm>
#include <cmath>

#include "arm/vision.hpp"

namespace arm::vision::detail {

// Edge-clamped (2r+1)^2 box mean of one channel, rounded half-up.
inline void blurPixel(const RasterImage& src, int x, int y, int radius,
                      std::uint8_t* out) {
    const int x0 = std::max(0, x - radius), x1 = std::min(src.width - 1, x + radius);
    const int y0 = std::max(0, y - radius), y1 = std::min(src.height - 1, y + radius);
    long sum[3] = {0, 0, 0};
    for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
            const std::uint8_t* p = src.px(xx, yy);
            sum[0] += p[0];
            sum[1] += p[1];
            sum[2] += p[2];
        }
    }
    const long count = static_cast<long>(x1 - x0 + 1) * (y1 - y0 + 1);
    for (int c = 0; c < 3; ++c) {
        out[c] = static_cast<std::uint8_t>(
            std::floor(static_cast<double>(sum[c]) / static_cast<double>(count) + 0.5));
    }
}

inline std::uint8_t maskPixel(const RasterImage& img, int x, int y,
                              const HsvRange& range) {
    const std::uint8_t* p = img.px(x, y);
    return hsvInRange(rgbToHsv(p[0], p[1], p[2]), range) ? 1 : 0;
}

// 8-neighbor dilation of one pixel.
inline std::uint8_t dilatePixel(const Mask& src, int x, int y) {
    const int x0 = std::max(0, x - 1), x1 = std::min(src.width - 1, x + 1);
    const int y0 = std::max(0, y - 1), y1 = std::min(src.height - 1, y + 1);
    for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
            if (src.at(xx, yy)) return 1;
        }
    }
    return 0;
}

} // namespace arm::vision::detail
