#include "vlg/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "vlg/common.hpp"

namespace vlg {

namespace {
constexpr int kSide = 32;
constexpr int kQuad = 16;

void color_rgb(ColorKind c, double* rgb) {
    rgb[0] = c == ColorKind::Red ? 1.0 : 0.0;
    rgb[1] = c == ColorKind::Green ? 1.0 : 0.0;
    rgb[2] = c == ColorKind::Blue ? 1.0 : 0.0;
}

bool is_colored(const ImageRaster& img, int y, int x) {
    return img.at(y, x, 0) + img.at(y, x, 1) + img.at(y, x, 2) < 2.0;
}
} // namespace

SceneSpec scene_from_id(int id) {
    VLG_CHECK(id >= 0 && id < kSceneCount, "scene id ", id, " out of range");
    SceneSpec s;
    s.shape = static_cast<ShapeKind>(id % 3);
    s.color = static_cast<ColorKind>((id / 3) % 3);
    s.vertical = static_cast<VPos>((id / 9) % 2);
    s.horizontal = static_cast<HPos>((id / 18) % 2);
    return s;
}

int scene_id(const SceneSpec& s) {
    return static_cast<int>(s.shape) + 3 * static_cast<int>(s.color) +
           9 * static_cast<int>(s.vertical) + 18 * static_cast<int>(s.horizontal);
}

const char* shape_name(ShapeKind s) {
    switch (s) {
        case ShapeKind::Circle: return "circle";
        case ShapeKind::Square: return "square";
        default: return "triangle";
    }
}

const char* color_name(ColorKind c) {
    switch (c) {
        case ColorKind::Red: return "red";
        case ColorKind::Green: return "green";
        default: return "blue";
    }
}

const char* vpos_name(VPos v) { return v == VPos::Top ? "top" : "bottom"; }
const char* hpos_name(HPos h) { return h == HPos::Left ? "left" : "right"; }

ImageRaster render_scene(const SceneSpec& s, int jitter_x, int jitter_y) {
    ImageRaster img = ImageRaster::white(kSide, kSide);
    double rgb[3];
    color_rgb(s.color, rgb);

    const int oy = (s.vertical == VPos::Top ? 0 : kQuad);
    const int ox = (s.horizontal == HPos::Left ? 0 : kQuad);
    const double cy = oy + kQuad / 2.0 - 0.5 + jitter_y;
    const double cx = ox + kQuad / 2.0 - 0.5 + jitter_x;

    for (int y = 0; y < kSide; ++y) {
        for (int x = 0; x < kSide; ++x) {
            bool inside = false;
            const double dy = y - cy, dx = x - cx;
            switch (s.shape) {
                case ShapeKind::Circle:
                    inside = dy * dy + dx * dx <= 5.5 * 5.5;
                    break;
                case ShapeKind::Square:
                    inside = std::fabs(dy) <= 5.0 && std::fabs(dx) <= 5.0;
                    break;
                case ShapeKind::Triangle:
                    // upright isoceles: apex at cy-5, base at cy+5
                    inside = dy >= -5.0 && dy <= 5.0 && std::fabs(dx) <= (dy + 5.0) * 0.55;
                    break;
            }
            if (inside)
                for (int c = 0; c < 3; ++c) img.at(y, x, c) = rgb[c];
        }
    }
    return img;
}

std::optional<SceneSpec> scene_oracle(const ImageRaster& img) {
    if (img.h != kSide || img.w != kSide) return std::nullopt;

    int count = 0;
    double sy = 0.0, sx = 0.0, ch[3] = {0.0, 0.0, 0.0};
    int ymin = kSide, ymax = -1, xmin = kSide, xmax = -1;
    for (int y = 0; y < kSide; ++y) {
        for (int x = 0; x < kSide; ++x) {
            if (!is_colored(img, y, x)) continue;
            ++count;
            sy += y;
            sx += x;
            for (int c = 0; c < 3; ++c) ch[c] += img.at(y, x, c);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    }
    if (count < 30) return std::nullopt; // too little ink to judge

    SceneSpec s;
    s.vertical = (sy / count < kSide / 2.0) ? VPos::Top : VPos::Bottom;
    s.horizontal = (sx / count < kSide / 2.0) ? HPos::Left : HPos::Right;

    // dominant channel must clearly win
    const int arg = static_cast<int>(std::max_element(ch, ch + 3) - ch);
    double second = -1.0;
    for (int c = 0; c < 3; ++c)
        if (c != arg) second = std::max(second, ch[c]);
    if (ch[arg] < 1.3 * (second + 1e-9)) return std::nullopt;
    s.color = static_cast<ColorKind>(arg);

    const double area = static_cast<double>(ymax - ymin + 1) * (xmax - xmin + 1);
    const double fill = count / area;
    if (fill > 0.92) {
        s.shape = ShapeKind::Square;
    } else if (fill > 0.64) {
        s.shape = ShapeKind::Circle;
    } else if (fill > 0.30) {
        s.shape = ShapeKind::Triangle;
    } else {
        return std::nullopt;
    }
    return s;
}

std::string scene_caption(const SceneSpec& s) {
    std::ostringstream os;
    os << "a " << color_name(s.color) << " " << shape_name(s.shape) << " at the "
       << vpos_name(s.vertical) << " " << hpos_name(s.horizontal);
    return os.str();
}

namespace {
std::vector<std::string> lowercase_words(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            words.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

template <class E>
std::optional<E> match_enum(const std::string& w, std::initializer_list<std::pair<const char*, E>> table) {
    for (const auto& [name, val] : table)
        if (w == name) return val;
    return std::nullopt;
}
} // namespace

std::optional<SceneSpec> parse_caption(const std::string& text) {
    // expects: a <color> <shape> at the <vertical> <horizontal>
    const auto words = lowercase_words(text);
    if (words.size() < 7 || words[0] != "a" || words[3] != "at" || words[4] != "the")
        return std::nullopt;
    const auto color = match_enum<ColorKind>(
        words[1],
        {{"red", ColorKind::Red}, {"green", ColorKind::Green}, {"blue", ColorKind::Blue}});
    const auto shape = match_enum<ShapeKind>(words[2], {{"circle", ShapeKind::Circle},
                                                        {"square", ShapeKind::Square},
                                                        {"triangle", ShapeKind::Triangle}});
    const auto vert =
        match_enum<VPos>(words[5], {{"top", VPos::Top}, {"bottom", VPos::Bottom}});
    const auto horiz =
        match_enum<HPos>(words[6], {{"left", HPos::Left}, {"right", HPos::Right}});
    if (!color || !shape || !vert || !horiz) return std::nullopt;
    return SceneSpec{*shape, *color, *vert, *horiz};
}

std::string vqa_question(const SceneSpec& s) {
    return std::string("what color is the ") + shape_name(s.shape) + "?";
}

std::string vqa_answer(const SceneSpec& s) { return color_name(s.color); }

} // namespace vlg
