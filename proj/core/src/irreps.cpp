#include "isofield/irreps.hpp"

#include <cmath>
#include <stdexcept>

namespace isofield {

namespace {

void require_matching(const IrrepLabel& label, const GroupElement& g, const char* op) {
    if (label.group != g.group())
        throw std::invalid_argument(std::string(op) + ": label/element group mismatch (" +
                                    label.group.name() + " vs " + g.group().name() + ")");
}

/// d^l_{l,m'}(beta) = sqrt(binom(2l, l-m')) cos^{l+m'}(b/2) (-sin(b/2))^{l-m'},
/// accumulated with the sqrt factors interleaved so neither the binomial nor
/// the trig powers over/underflow on their own.
double seed_top_row(int ell, int mp, double beta) {
    const double c = std::cos(beta / 2.0);
    const double s = std::sin(beta / 2.0);
    double r = 1.0;
    for (int j = 1; j <= ell - mp; ++j) r *= -s * std::sqrt(double(ell + mp + j) / double(j));
    for (int j = 0; j < ell + mp; ++j) r *= c;
    return r;
}

/// Seed d^{l0}_{m,m'} at l0 = max(|m|,|m'|) via the top-row closed form and
/// the symmetries d_{mm'} = (-1)^{m-m'} d_{m'm} = d_{-m',-m}.
double seed_value(int m, int mp, double beta) {
    const int l0 = std::max(std::abs(m), std::abs(mp));
    if (m == l0) return seed_top_row(l0, mp, beta);
    if (m == -l0) return ((l0 + mp) % 2 == 0 ? 1.0 : -1.0) * seed_top_row(l0, -mp, beta);
    if (mp == l0) return ((m - l0) % 2 == 0 ? 1.0 : -1.0) * seed_top_row(l0, m, beta);
    return seed_top_row(l0, -m, beta);  // mp == -l0
}

}  // namespace

int IrrepLabel::dimension() const {
    switch (group.kind) {
        case GroupKind::cyclic:
        case GroupKind::circle: return 1;
        case GroupKind::so3: return 2 * n + 1;
    }
    throw std::logic_error("IrrepLabel::dimension: bad group kind");
}

IrrepLabel IrrepLabel::conjugate() const {
    switch (group.kind) {
        case GroupKind::cyclic: return IrrepLabel{group, (group.order - n) % group.order};
        case GroupKind::circle: return IrrepLabel{group, -n};
        case GroupKind::so3: return *this;
    }
    throw std::logic_error("IrrepLabel::conjugate: bad group kind");
}

std::vector<IrrepLabel> enumerate_dual(const Group& g, int count) {
    if (count < 1) throw std::invalid_argument("enumerate_dual: count >= 1 required");
    std::vector<IrrepLabel> out;
    out.reserve(count);
    switch (g.kind) {
        case GroupKind::cyclic:
            if (count > g.order)
                throw std::invalid_argument("enumerate_dual: count exceeds cyclic order");
            for (int n = 0; n < count; ++n) out.push_back({g, n});
            break;
        case GroupKind::circle:
            for (int k = 0; static_cast<int>(out.size()) < count; ++k) {
                out.push_back({g, k == 0 ? 0 : (k + 1) / 2 * (k % 2 == 1 ? 1 : -1)});
            }
            break;
        case GroupKind::so3:
            for (int ell = 0; ell < count; ++ell) out.push_back({g, ell});
            break;
    }
    return out;
}

std::vector<IrrepLabel> labels_up_to_band(const Group& g, int band) {
    switch (g.kind) {
        case GroupKind::cyclic: {
            // frequency distance of residue n is min(n, N-n), mirroring the
            // circle's |n| <= band under n <-> n - N
            std::vector<IrrepLabel> out;
            for (int n = 0; n < g.order; ++n)
                if (std::min(n, g.order - n) <= band) out.push_back({g, n});
            return out;
        }
        case GroupKind::circle: return enumerate_dual(g, 2 * band + 1);
        case GroupKind::so3: return enumerate_dual(g, band + 1);
    }
    throw std::logic_error("labels_up_to_band: bad group kind");
}

double legendre_p(int l, double x) {
    if (l < 0) throw std::invalid_argument("legendre_p: l >= 0 required");
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<Eigen::MatrixXd> wigner_d_stack(int lmax, double beta) {
    if (lmax < 0) throw std::invalid_argument("wigner_d_stack: lmax >= 0 required");
    std::vector<Eigen::MatrixXd> d;
    d.reserve(lmax + 1);
    for (int l = 0; l <= lmax; ++l) d.emplace_back(Eigen::MatrixXd::Zero(2 * l + 1, 2 * l + 1));
    d[0](0, 0) = 1.0;
    if (lmax == 0) return d;

    const double cb = std::cos(beta);
    for (int m = -lmax; m <= lmax; ++m) {
        for (int mp = -lmax; mp <= lmax; ++mp) {
            const int l0 = std::max(std::abs(m), std::abs(mp));
            double prev = 0.0;     // d^{l-1}
            double cur;            // d^{l}
            int lstart;
            if (l0 == 0) {
                cur = cb;          // d^1_{00}; d^0 = 1 already stored
                prev = 1.0;
                lstart = 1;
            } else {
                cur = seed_value(m, mp, beta);
                lstart = l0;
            }
            for (int l = lstart; l <= lmax; ++l) {
                if (l >= 1) d[l](m + l, mp + l) = cur;
                if (l == lmax) break;
                const double lp = l + 1.0;
                const double w1 =
                    l * std::sqrt((lp * lp - m * m) * (lp * lp - mp * mp));
                const double w2 = (2.0 * l + 1.0) * (l * lp * cb - m * mp);
                const double w3 =
                    lp * std::sqrt((double(l) * l - m * m) * (double(l) * l - mp * mp));
                const double next = (w2 * cur - w3 * prev) / w1;
                prev = cur;
                cur = next;
            }
        }
    }
    return d;
}

Eigen::MatrixXcd irrep_matrix(const IrrepLabel& label, const GroupElement& g) {
    require_matching(label, g, "irrep_matrix");
    const Complex i(0.0, 1.0);
    switch (label.group.kind) {
        case GroupKind::cyclic: {
            Eigen::MatrixXcd m(1, 1);
            m(0, 0) = std::exp(-i * (kTwoPi * label.n * g.index() / label.group.order));
            return m;
        }
        case GroupKind::circle: {
            Eigen::MatrixXcd m(1, 1);
            m(0, 0) = std::exp(-i * (double(label.n) * g.theta()));
            return m;
        }
        case GroupKind::so3: {
            const int ell = label.n;
            const auto d = wigner_d_stack(ell, g.beta());
            Eigen::MatrixXcd out(2 * ell + 1, 2 * ell + 1);
            for (int a = -ell; a <= ell; ++a) {
                const Complex ea = std::exp(-i * (double(a) * g.alpha()));
                for (int b = -ell; b <= ell; ++b) {
                    out(a + ell, b + ell) =
                        ea * d[ell](a + ell, b + ell) * std::exp(-i * (double(b) * g.gamma()));
                }
            }
            return out;
        }
    }
    throw std::logic_error("irrep_matrix: bad group kind");
}

std::vector<Eigen::MatrixXcd> so3_matrices(int lmax, const GroupElement& g) {
    if (g.group().kind != GroupKind::so3)
        throw std::invalid_argument("so3_matrices: SO(3) element required");
    const Complex i(0.0, 1.0);
    const auto d = wigner_d_stack(lmax, g.beta());
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(lmax + 1);
    for (int ell = 0; ell <= lmax; ++ell) {
        Eigen::MatrixXcd m(2 * ell + 1, 2 * ell + 1);
        for (int a = -ell; a <= ell; ++a) {
            const Complex ea = std::exp(-i * (double(a) * g.alpha()));
            for (int b = -ell; b <= ell; ++b)
                m(a + ell, b + ell) =
                    ea * d[ell](a + ell, b + ell) * std::exp(-i * (double(b) * g.gamma()));
        }
        out.push_back(std::move(m));
    }
    return out;
}

double so3_character(int ell, double omega) {
    // chi_ell(omega) = U_{2ell}(cos(omega/2)), Chebyshev second kind.
    const double x = std::cos(omega / 2.0);
    double u0 = 1.0, u1 = 2.0 * x;
    if (ell == 0) return u0;
    for (int k = 2; k <= 2 * ell; ++k) {
        const double u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

Complex character(const IrrepLabel& label, const GroupElement& g) {
    require_matching(label, g, "character");
    switch (label.group.kind) {
        case GroupKind::cyclic:
        case GroupKind::circle: return irrep_matrix(label, g)(0, 0);
        case GroupKind::so3:
            return Complex(so3_character(label.n, metric(identity(g.group()), g)), 0.0);
    }
    throw std::logic_error("character: bad group kind");
}

double normalized_assoc_legendre(int ell, int m, double x) {
    if (m < 0 || m > ell) throw std::invalid_argument("normalized_assoc_legendre: 0 <= m <= l");
    const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    // diagonal f_m^m, then one step off the diagonal, then ascend in l
    double fmm = 1.0;
    for (int k = 1; k <= m; ++k) fmm *= -s * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
    if (ell == m) return fmm;
    double prev = fmm;
    double cur = x * std::sqrt(2.0 * m + 3.0) * fmm;
    double a_prev = std::sqrt(2.0 * m + 3.0);
    for (int l = m + 2; l <= ell; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        const double next = a * (x * cur - prev / a_prev);
        prev = cur;
        cur = next;
        a_prev = a;
    }
    return cur;
}

Complex sph_harmonic(int ell, int m, const SpherePoint& x) {
    if (std::abs(m) > ell) throw std::invalid_argument("sph_harmonic: |m| <= l required");
    if (m < 0) {
        const Complex y = sph_harmonic(ell, -m, x);
        return (m % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
    }
    const double f = normalized_assoc_legendre(ell, m, std::cos(x.theta));
    const Complex i(0.0, 1.0);
    return f * std::exp(i * (double(m) * x.phi));
}

}  // namespace isofield
