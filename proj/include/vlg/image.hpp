#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vlg {

/// HxWx3 raster with channel values in [0,1], row-major, RGB interleaved.
struct ImageRaster {
    int h = 0;
    int w = 0;
    std::vector<double> px; // h*w*3

    static ImageRaster white(int h, int w);

    double& at(int y, int x, int c) { return px[static_cast<size_t>((y * w + x) * 3 + c)]; }
    double at(int y, int x, int c) const { return px[static_cast<size_t>((y * w + x) * 3 + c)]; }
    size_t size() const { return px.size(); }
};

// Binary PPM (P6, maxval 255).
void write_ppm(const std::string& path, const ImageRaster& img);
ImageRaster read_ppm(const std::string& path);

} // namespace vlg
