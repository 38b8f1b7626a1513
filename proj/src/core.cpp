#include "vanet/core.hpp"

#include <algorithm>

namespace vanet {

double cosine_between(Velocity v, Vec2 d) {
    const double nv = v.speed();
    const double nd = norm(d);
    if (nv == 0.0 || nd == 0.0) {
        return 0.0;
    }
    return std::clamp(dot(v.vec(), d) / (nv * nd), -1.0, 1.0);
}

}  // namespace vanet
