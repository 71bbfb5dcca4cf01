#include "solution.hpp"

#include <cmath>

namespace jumpwave {

bool Solution::in_domain(double x, double t) const {
    const double eps = 1e-12;
    return x >= family.x_lo - eps && x <= family.x_hi + eps && t >= family.t_lo - eps &&
           t <= family.t_hi + eps;
}

Solution::PointEval Solution::eval(double x, double t) const {
    require(in_domain(x, t), "query point outside the trained domain");
    require(c.size() == static_cast<Eigen::Index>(family.size()),
            "coefficient size must match family size");

    PointEval out{b, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < family.size(); ++i) {
        const AtomEval e = atom_eval(family.atoms[i], x, t);
        const double ci = c[static_cast<Eigen::Index>(i)];
        out.u += ci * e.value;
        out.u_t += ci * e.d_t;
        out.u_x += ci * e.d_x;
        out.u_xx += ci * e.d_xx;
    }
    return out;
}

double Solution::value_extended(double x, double t) const {
    if (x < family.x_lo) return 0.0;
    if (x > family.x_hi) {
        return std::exp(x) - params.strike * std::exp(-params.r * (params.maturity - t));
    }
    double u = b;
    for (std::size_t i = 0; i < family.size(); ++i) {
        u += c[static_cast<Eigen::Index>(i)] * atom_eval(family.atoms[i], x, t).value;
    }
    return u;
}

double Solution::price(double spot, double t) const {
    require(spot > 0.0, "spot must be positive");
    return eval(std::log(spot), t).u;
}

} // namespace jumpwave
