#include "vlg/image.hpp"

#include <cmath>
#include <fstream>

#include "vlg/common.hpp"

namespace vlg {

ImageRaster ImageRaster::white(int h, int w) {
    ImageRaster img;
    img.h = h;
    img.w = w;
    img.px.assign(static_cast<size_t>(h) * static_cast<size_t>(w) * 3, 1.0);
    return img;
}

void write_ppm(const std::string& path, const ImageRaster& img) {
    std::ofstream f(path, std::ios::binary);
    VLG_CHECK(f.good(), "cannot write image ", path);
    f << "P6\n" << img.w << " " << img.h << "\n255\n";
    std::vector<unsigned char> bytes(img.px.size());
    for (size_t i = 0; i < img.px.size(); ++i) {
        double v = img.px[i];
        v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    VLG_CHECK(f.good(), "failed writing image ", path);
}

ImageRaster read_ppm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    VLG_CHECK(f.good(), "cannot read image ", path);
    std::string magic;
    f >> magic;
    VLG_CHECK(magic == "P6", "image ", path, ": expected P6, got '", magic, "'");
    int w = 0, h = 0, maxval = 0;
    f >> w >> h >> maxval;
    VLG_CHECK(w > 0 && h > 0 && maxval == 255, "image ", path, ": bad header");
    f.get(); // single whitespace after maxval
    std::vector<unsigned char> bytes(static_cast<size_t>(w) * static_cast<size_t>(h) * 3);
    f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    VLG_CHECK(f.gcount() == static_cast<std::streamsize>(bytes.size()), "image ", path,
              ": truncated pixel data");
    ImageRaster img;
    img.h = h;
    img.w = w;
    img.px.resize(bytes.size());
    for (size_t i = 0; i < bytes.size(); ++i) img.px[i] = bytes[i] / 255.0;
    return img;
}

} // namespace vlg
