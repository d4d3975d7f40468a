#include "vision_detail.hpp"

namespace arm::vision::serial {

RasterImage boxBlur(const RasterImage& img, int radius) {
    if (radius <= 0) return img;
    RasterImage out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            detail::blurPixel(img, x, y, radius, out.px(x, y));
        }
    }
    return out;
}

Mask rgbToHsvMask(const RasterImage& img, const HsvRange& range) {
    Mask m{img.width, img.height,
           std::vector<std::uint8_t>(static_cast<std::size_t>(img.width) * img.height)};
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            m.set(x, y, detail::maskPixel(img, x, y, range));
        }
    }
    return m;
}

Mask dilate(const Mask& mask, int iterations) {
    Mask cur = mask;
    for (int it = 0; it < iterations; ++it) {
        Mask next = cur;
        for (int y = 0; y < cur.height; ++y) {
            for (int x = 0; x < cur.width; ++x) {
                next.set(x, y, detail::dilatePixel(cur, x, y));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

} // namespace arm::vision::serial
