#include "isofield/group.hpp"

#include <algorithm>
#include <cmath>

namespace isofield {

namespace detail {

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;  // fmod can land exactly on 2pi after the add
    return a;
}

std::array<double, 9> mat_mul(const std::array<double, 9>& a, const std::array<double, 9>& b) {
    std::array<double, 9> c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[3 * i + k] * b[3 * k + j];
            c[3 * i + j] = s;
        }
    return c;
}

std::array<double, 9> mat_transpose(const std::array<double, 9>& a) {
    return {a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]};
}

void require_same_group(const GroupElement& g, const GroupElement& h, const char* op) {
    if (g.group() != h.group())
        throw std::invalid_argument(std::string(op) + ": group mismatch (" + g.group().name() +
                                    " vs " + h.group().name() + ")");
}

}  // namespace detail

Group Group::cyclic(int n) {
    if (n < 1) throw std::invalid_argument("Group::cyclic: order must be >= 1");
    return Group{GroupKind::cyclic, n};
}

std::string Group::name() const {
    switch (kind) {
        case GroupKind::cyclic: return "cyclic(" + std::to_string(order) + ")";
        case GroupKind::circle: return "circle";
        case GroupKind::so3: return "so3";
    }
    return "?";
}

GroupElement GroupElement::cyclic(int order, long long index) {
    GroupElement e;
    e.group_ = Group::cyclic(order);
    long long k = index % order;
    if (k < 0) k += order;
    e.index_ = static_cast<int>(k);
    return e;
}

GroupElement GroupElement::circle(double theta) {
    GroupElement e;
    e.group_ = Group::circle();
    e.alpha_ = detail::wrap_angle(theta);
    return e;
}

GroupElement GroupElement::rotation(double alpha, double beta, double gamma) {
    // Canonicalize through the matrix form; it handles out-of-range beta and
    // the gimbal fold uniformly.
    GroupElement e;
    e.group_ = Group::so3();
    e.alpha_ = alpha;
    e.beta_ = beta;
    e.gamma_ = gamma;
    return rotation_from_matrix(Group::so3(), e.matrix());
}

std::array<double, 9> GroupElement::matrix() const {
    if (group_.kind != GroupKind::so3)
        throw std::invalid_argument("GroupElement::matrix: SO(3) only");
    const double ca = std::cos(alpha_), sa = std::sin(alpha_);
    const double cb = std::cos(beta_), sb = std::sin(beta_);
    const double cg = std::cos(gamma_), sg = std::sin(gamma_);
    // Rz(alpha) * Ry(beta) * Rz(gamma)
    return {ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb,
            sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb,
            -sb * cg,               sb * sg,                 cb};
}

GroupElement GroupElement::rotation_from_matrix(const Group& g, const std::array<double, 9>& r) {
    if (g.kind != GroupKind::so3)
        throw std::invalid_argument("rotation_from_matrix: SO(3) only");
    GroupElement e;
    e.group_ = g;
    // sin(beta) from the O(sin beta) entries; acos(r33) would amplify
    // rounding noise by ~1e8 near the poles.
    const double sb = std::hypot(r[2], r[5]);
    e.beta_ = std::atan2(sb, r[8]);
    if (sb > 1e-12) {
        e.alpha_ = detail::wrap_angle(std::atan2(r[5], r[2]));
        e.gamma_ = detail::wrap_angle(std::atan2(r[7], -r[6]));
    } else if (r[8] > 0.0) {
        // beta = 0: pure Rz(alpha+gamma); fold into alpha.
        e.beta_ = 0.0;
        e.alpha_ = detail::wrap_angle(std::atan2(r[3], r[0]));
        e.gamma_ = 0.0;
    } else {
        // beta = pi: Rz(alpha-gamma) Ry(pi); fold the difference into alpha.
        e.beta_ = kPi;
        e.alpha_ = detail::wrap_angle(std::atan2(-r[3], r[4]));
        e.gamma_ = 0.0;
    }
    return e;
}

GroupElement identity(const Group& g) {
    switch (g.kind) {
        case GroupKind::cyclic: return GroupElement::cyclic(g.order, 0);
        case GroupKind::circle: return GroupElement::circle(0.0);
        case GroupKind::so3: return GroupElement::rotation(0.0, 0.0, 0.0);
    }
    throw std::logic_error("identity: bad group kind");
}

GroupElement mul(const GroupElement& g, const GroupElement& h) {
    detail::require_same_group(g, h, "mul");
    switch (g.group().kind) {
        case GroupKind::cyclic:
            return GroupElement::cyclic(g.group().order,
                                        static_cast<long long>(g.index()) + h.index());
        case GroupKind::circle: return GroupElement::circle(g.theta() + h.theta());
        case GroupKind::so3:
            return GroupElement::rotation_from_matrix(g.group(),
                                                      detail::mat_mul(g.matrix(), h.matrix()));
    }
    throw std::logic_error("mul: bad group kind");
}

GroupElement inv(const GroupElement& g) {
    switch (g.group().kind) {
        case GroupKind::cyclic:
            return GroupElement::cyclic(g.group().order, -static_cast<long long>(g.index()));
        case GroupKind::circle: return GroupElement::circle(-g.theta());
        case GroupKind::so3:
            // (Rz(a)Ry(b)Rz(c))^-1 = Rz(pi-c) Ry(b) Rz(-pi-a)
            return GroupElement::rotation(kPi - g.gamma(), g.beta(), -kPi - g.alpha());
    }
    throw std::logic_error("inv: bad group kind");
}

double metric(const GroupElement& g, const GroupElement& h) {
    detail::require_same_group(g, h, "metric");
    switch (g.group().kind) {
        case GroupKind::cyclic: {
            const int n = g.group().order;
            int d = std::abs(g.index() - h.index());
            d = std::min(d, n - d);
            return kTwoPi * static_cast<double>(d) / static_cast<double>(n);
        }
        case GroupKind::circle: {
            double d = std::fabs(g.theta() - h.theta());
            return std::min(d, kTwoPi - d);
        }
        case GroupKind::so3: {
            // relative rotation q = g^T h; angle from atan2(|skew q|, (tr-1)/2),
            // which keeps full precision at both 0 and pi
            const auto a = g.matrix();
            const auto b = h.matrix();
            std::array<double, 9> q{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < 3; ++k) s += a[3 * k + i] * b[3 * k + j];
                    q[3 * i + j] = s;
                }
            const double c = (q[0] + q[4] + q[8] - 1.0) / 2.0;
            const double s = 0.5 * std::sqrt((q[7] - q[5]) * (q[7] - q[5]) +
                                             (q[2] - q[6]) * (q[2] - q[6]) +
                                             (q[3] - q[1]) * (q[3] - q[1]));
            return std::atan2(s, c);
        }
    }
    throw std::logic_error("metric: bad group kind");
}

bool approx_equal(const GroupElement& g, const GroupElement& h, double tol) {
    return metric(g, h) <= tol;
}

SpherePoint::SpherePoint(double theta_in, double phi_in) {
    if (theta_in < -1e-12 || theta_in > kPi + 1e-12)
        throw std::invalid_argument("SpherePoint: theta out of [0,pi]");
    theta = std::min(kPi, std::max(0.0, theta_in));
    phi = detail::wrap_angle(phi_in);
    if (theta == 0.0 || theta == kPi) phi = 0.0;
}

std::array<double, 3> SpherePoint::unit_vector() const {
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

SpherePoint SpherePoint::from_vector(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n < 1e-300) throw std::invalid_argument("SpherePoint::from_vector: zero vector");
    const double th = std::acos(std::min(1.0, std::max(-1.0, z / n)));
    double ph = std::atan2(y, x);
    if (std::fabs(std::sin(th)) < 1e-14) ph = 0.0;
    return SpherePoint(th, ph);
}

SpherePoint act(const GroupElement& g, const SpherePoint& x) {
    if (g.group().kind != GroupKind::so3)
        throw std::invalid_argument("act: SO(3) only");
    const auto r = g.matrix();
    const auto v = x.unit_vector();
    return SpherePoint::from_vector(r[0] * v[0] + r[1] * v[1] + r[2] * v[2],
                                    r[3] * v[0] + r[4] * v[1] + r[5] * v[2],
                                    r[6] * v[0] + r[7] * v[1] + r[8] * v[2]);
}

GroupElement rotation_to(const SpherePoint& x) {
    return GroupElement::rotation(x.phi, x.theta, 0.0);
}

double sphere_distance(const SpherePoint& x, const SpherePoint& y) {
    const auto a = x.unit_vector();
    const auto b = y.unit_vector();
    const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const double cx = a[1] * b[2] - a[2] * b[1];
    const double cy = a[2] * b[0] - a[0] * b[2];
    const double cz = a[0] * b[1] - a[1] * b[0];
    return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-angle initial guess, then Newton on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

QuadratureRule haar_quadrature(const Group& g, int band) {
    if (band < 1) throw std::invalid_argument("haar_quadrature: band >= 1 required");
    QuadratureRule rule;
    rule.domain = QuadratureRule::Domain::group;
    rule.group = g;
    rule.band = band;
    switch (g.kind) {
        case GroupKind::cyclic: {
            const int n = g.order;
            for (int k = 0; k < n; ++k) {
                rule.group_nodes.push_back(GroupElement::cyclic(n, k));
                rule.weights.push_back(1.0 / n);
            }
            break;
        }
        case GroupKind::circle: {
            const int n = 2 * band + 1;
            for (int k = 0; k < n; ++k) {
                rule.group_nodes.push_back(GroupElement::circle(kTwoPi * k / n));
                rule.weights.push_back(1.0 / n);
            }
            break;
        }
        case GroupKind::so3: {
            const int na = 2 * band + 1;
            const int nb = band + 1;
            std::vector<double> xs, ws;
            gauss_legendre(nb, xs, ws);
            for (int ia = 0; ia < na; ++ia) {
                const double alpha = kTwoPi * ia / na;
                for (int ib = 0; ib < nb; ++ib) {
                    const double beta = std::acos(xs[ib]);
                    for (int ic = 0; ic < na; ++ic) {
                        const double gamma = kTwoPi * ic / na;
                        rule.group_nodes.push_back(GroupElement::rotation(alpha, beta, gamma));
                        rule.weights.push_back(ws[ib] / 2.0 / (na * static_cast<double>(na)));
                    }
                }
            }
            break;
        }
    }
    return rule;
}

QuadratureRule sphere_quadrature(int band) {
    if (band < 0) throw std::invalid_argument("sphere_quadrature: band >= 0 required");
    QuadratureRule rule;
    rule.domain = QuadratureRule::Domain::sphere;
    rule.group = Group::so3();
    rule.band = band;
    const int nphi = 2 * band + 1;
    const int nth = band + 1;
    std::vector<double> xs, ws;
    gauss_legendre(nth, xs, ws);
    for (int it = 0; it < nth; ++it) {
        const double theta = std::acos(xs[it]);
        for (int ip = 0; ip < nphi; ++ip) {
            rule.sphere_nodes.emplace_back(theta, kTwoPi * ip / nphi);
            rule.weights.push_back(ws[it] / 2.0 / nphi);
        }
    }
    return rule;
}

}  // namespace isofield
