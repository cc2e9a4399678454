#ifndef RSD_RENDER_HPP
#define RSD_RENDER_HPP

#include <string>

#include "rsd/decompose.hpp"

namespace rsd {

struct RenderOptions {
  int width = 800;
  int height = 600;
  enum class ColorBy { kind, depth };
  ColorBy color_by = ColorBy::kind;
};

// Deterministic static SVG for 1-D and 2-D decompositions: selected
// rectangles filled, residual leaves hatched. Identical inputs produce
// byte-identical output.
std::string render_svg(const Decomposition& dec,
                       const RenderOptions& options = {});

}  // namespace rsd

#endif
