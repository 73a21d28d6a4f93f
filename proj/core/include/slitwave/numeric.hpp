#pragma once

#include <cmath>
#include <numbers>

namespace slitwave::detail {

// sin(pi*t) with the argument reduced in exact arithmetic first, so the
// result is exactly zero whenever t is an integer. The plain sin(M_PI*t)
// form leaves O(|t|*eps) residue at the walls of the guide, which matters
// because the boundary-vanishing guarantee is part of the public contract.
inline double sin_pi(double t) {
    double r = std::remainder(t, 2.0);  // r in [-1, 1], exact
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(std::numbers::pi * r);
}

// cos(pi*t), reduced the same way.
inline double cos_pi(double t) {
    return sin_pi(t + 0.5);
}

}  // namespace slitwave::detail
