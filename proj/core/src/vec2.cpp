#include "softslides/vec2.hpp"

namespace softbody {

bool is_finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace softbody
