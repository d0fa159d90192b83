#pragma once

#include <optional>
#include <string>

#include "vlg/image.hpp"

namespace vlg {

enum class ShapeKind { Circle, Square, Triangle };
enum class ColorKind { Red, Green, Blue };
enum class VPos { Top, Bottom };
enum class HPos { Left, Right };

/// Ground-truth attributes of a synthetic image: 3 shapes x 3 colors x 2 x 2
/// quadrants, 36 scenes total. Scene ids enumerate that space.
struct SceneSpec {
    ShapeKind shape = ShapeKind::Circle;
    ColorKind color = ColorKind::Red;
    VPos vertical = VPos::Top;
    HPos horizontal = HPos::Left;

    bool operator==(const SceneSpec&) const = default;
};

constexpr int kSceneCount = 36;

SceneSpec scene_from_id(int id); // id in [0, 36)
int scene_id(const SceneSpec& s);

const char* shape_name(ShapeKind s);
const char* color_name(ColorKind c);
const char* vpos_name(VPos v);
const char* hpos_name(HPos h);

/// Deterministic 32x32 render: solid shape on white ground in the named
/// quadrant. jitter_x/jitter_y shift the shape by whole pixels (used by the
/// oracle robustness tests; dataset renders use zero jitter).
ImageRaster render_scene(const SceneSpec& s, int jitter_x = 0, int jitter_y = 0);

/// Attribute extraction from a 32x32 raster: quadrant by colored-pixel
/// centroid, color by dominant channel, shape by bounding-box fill ratio.
/// Returns nothing when the confidence checks fail.
std::optional<SceneSpec> scene_oracle(const ImageRaster& img);

// Fixed caption grammar "a <color> <shape> at the <vertical> <horizontal>",
// constructed to be unambiguous and invertible.
std::string scene_caption(const SceneSpec& s);
std::optional<SceneSpec> parse_caption(const std::string& text);

// VQA pair "what color is the <shape>?" -> "<color>".
std::string vqa_question(const SceneSpec& s);
std::string vqa_answer(const SceneSpec& s);

} // namespace vlg
