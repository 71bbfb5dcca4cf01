#include "wavelet.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace jumpwave {

AtomEval atom_eval(const WaveletAtom& atom, double x, double t) {
    const double X = atom.j_x * x - atom.k_x;
    const double T = atom.j_t * t - atom.k_t;
    const double G = std::exp(-0.5 * (X * X + T * T));

    // With f(X) = X e^{-X^2/2}: f' = (1 - X^2) e^{-X^2/2},
    // f'' = X (X^2 - 3) e^{-X^2/2}; same for the t factor.
    AtomEval e;
    e.value = X * T * G;
    e.d_x = atom.j_x * (1.0 - X * X) * T * G;
    e.d_xx = atom.j_x * atom.j_x * X * (X * X - 3.0) * T * G;
    e.d_t = atom.j_t * X * (1.0 - T * T) * G;
    return e;
}

double atom_x_factor(double j_x, double k_x, double x) {
    const double X = j_x * x - k_x;
    return X * std::exp(-0.5 * X * X);
}

double atom_t_factor(double j_t, double k_t, double t) {
    const double T = j_t * t - k_t;
    return T * std::exp(-0.5 * T * T);
}

namespace {

// Integer shift range covering [lo, hi] at scale j: centers k/j spaced by
// spacing/j, extended `margin` atoms past each edge.
std::pair<long, long> shift_range(double j, double lo, double hi, double spacing, int margin) {
    long k_lo = static_cast<long>(std::floor(j * lo / spacing)) - margin;
    long k_hi = static_cast<long>(std::ceil(j * hi / spacing)) + margin;
    return {k_lo, k_hi};
}

} // namespace

WaveletFamily build_family(const MarketParams& params, const FamilyConfig& cfg) {
    params.validate();
    require(cfg.j_x_min > 0.0 && cfg.j_t_min > 0.0, "scale bounds must be positive");
    require(cfg.j_x_levels >= 1 && cfg.j_t_levels >= 1, "scale ladder must be nonempty");
    require(cfg.spacing > 0.0, "spacing must be positive");
    require(cfg.margin >= 0, "margin must be nonnegative");

    WaveletFamily fam;
    fam.x_lo = params.x_min();
    fam.x_hi = params.x_max();
    fam.t_lo = 0.0;
    fam.t_hi = params.maturity;

    std::map<std::pair<double, double>, int> profile_index;

    for (int mx = 0; mx < cfg.j_x_levels; ++mx) {
        const double j_x = cfg.j_x_min * std::pow(2.0, mx);
        auto [kx_lo, kx_hi] = shift_range(j_x, fam.x_lo, fam.x_hi, cfg.spacing, cfg.margin);
        for (int mt = 0; mt < cfg.j_t_levels; ++mt) {
            const double j_t = cfg.j_t_min * std::pow(2.0, mt);
            auto [kt_lo, kt_hi] = shift_range(j_t, fam.t_lo, fam.t_hi, cfg.spacing, cfg.margin);
            for (long ikx = kx_lo; ikx <= kx_hi; ++ikx) {
                const double k_x = cfg.spacing * static_cast<double>(ikx);
                for (long ikt = kt_lo; ikt <= kt_hi; ++ikt) {
                    WaveletAtom atom;
                    atom.j_x = j_x;
                    atom.k_x = k_x;
                    atom.j_t = j_t;
                    atom.k_t = cfg.spacing * static_cast<double>(ikt);

                    auto key = std::make_pair(atom.j_x, atom.k_x);
                    auto it = profile_index.find(key);
                    if (it == profile_index.end()) {
                        it = profile_index.emplace(key, static_cast<int>(fam.x_profiles.size())).first;
                        fam.x_profiles.push_back({atom.j_x, atom.k_x});
                    }
                    atom.x_profile = it->second;
                    fam.atoms.push_back(atom);
                    if (fam.atoms.size() > cfg.max_atoms) {
                        throw invalid_input("wavelet family exceeds configured max_atoms");
                    }
                }
            }
        }
    }
    return fam;
}

DesignMatrices design_matrices(const WaveletFamily& family,
                               const std::vector<double>& x,
                               const std::vector<double>& t) {
    require(!x.empty() && x.size() == t.size(), "point list must be nonempty and aligned");
    require(family.size() > 0, "family must be nonempty");

    const Eigen::Index n_pts = static_cast<Eigen::Index>(x.size());
    const Eigen::Index n_atoms = static_cast<Eigen::Index>(family.size());

    DesignMatrices m;
    m.x = x;
    m.t = t;
    m.W.resize(n_pts, n_atoms);
    m.DtW.resize(n_pts, n_atoms);
    m.DxW.resize(n_pts, n_atoms);
    m.DxxW.resize(n_pts, n_atoms);

    for (Eigen::Index i = 0; i < n_atoms; ++i) {
        const WaveletAtom& atom = family.atoms[static_cast<std::size_t>(i)];
        for (Eigen::Index p = 0; p < n_pts; ++p) {
            AtomEval e = atom_eval(atom, x[static_cast<std::size_t>(p)],
                                   t[static_cast<std::size_t>(p)]);
            m.W(p, i) = e.value;
            m.DtW(p, i) = e.d_t;
            m.DxW(p, i) = e.d_x;
            m.DxxW(p, i) = e.d_xx;
        }
    }
    return m;
}

SolutionField evaluate_solution(const Vec& c, double b, const DesignMatrices& m) {
    require(c.size() == m.W.cols(), "coefficient size must match atom count");
    SolutionField f;
    f.u = m.W * c;
    f.u.array() += b;
    f.u_t = m.DtW * c;
    f.u_x = m.DxW * c;
    f.u_xx = m.DxxW * c;
    return f;
}

double profile_overlap(double j1, double k1, double j2, double k2) {
    // Complete the square in the product of the two Gaussians; odd moments
    // of the centred variable drop out.
    const double p = j1 * j1 + j2 * j2;
    const double q = j1 * k1 + j2 * k2;
    const double r = k1 * k1 + k2 * k2;
    const double c = r - q * q / p;
    const double alpha = j1 * q / p - k1;
    const double beta = j2 * q / p - k2;
    return std::exp(-0.5 * c) * std::sqrt(2.0 * M_PI / p) * (j1 * j2 / p + alpha * beta);
}

Mat mass_matrix(const WaveletFamily& family) {
    const Eigen::Index n = static_cast<Eigen::Index>(family.size());
    require(n > 0, "family must be nonempty");
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const WaveletAtom& a = family.atoms[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i; j < n; ++j) {
            const WaveletAtom& b = family.atoms[static_cast<std::size_t>(j)];
            const double v = profile_overlap(a.j_x, a.k_x, b.j_x, b.k_x) *
                             profile_overlap(a.j_t, a.k_t, b.j_t, b.k_t);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

} // namespace jumpwave
