#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isofield/irreps.hpp"
#include "isofield/stats.hpp"

using namespace isofield;

namespace {

GroupElement random_rotation(Rng& rng) {
    return GroupElement::rotation(kTwoPi * rng.uniform(),
                                  std::acos(rng.uniform_symmetric()),
                                  kTwoPi * rng.uniform());
}

// exp(A) by scaling-and-squaring Taylor; plenty for (2l+1)-dim generators.
Eigen::MatrixXcd expm(Eigen::MatrixXcd a) {
    int squarings = 0;
    double nrm = a.cwiseAbs().sum();
    while (nrm > 0.25) {
        a /= 2.0;
        nrm /= 2.0;
        ++squarings;
    }
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd term = result;
    for (int k = 1; k <= 24; ++k) {
        term = term * a / double(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// Angular-momentum generators in the |l m> basis, m ascending.
Eigen::MatrixXcd jy_generator(int ell) {
    const int d = 2 * ell + 1;
    Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(d, d);
    for (int m = -ell; m < ell; ++m)
        jp(m + 1 + ell, m + ell) = std::sqrt(double(ell) * (ell + 1) - double(m) * (m + 1));
    const Complex i(0.0, 1.0);
    return (jp - jp.adjoint()) / (2.0 * i);
}

Eigen::MatrixXcd jz_generator(int ell) {
    const int d = 2 * ell + 1;
    Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(d, d);
    for (int m = -ell; m <= ell; ++m) jz(m + ell, m + ell) = double(m);
    return jz;
}

// Oracle: D^l(a,b,g) = exp(-ia Jz) exp(-ib Jy) exp(-ig Jz).
Eigen::MatrixXcd wigner_oracle(int ell, double a, double b, double g) {
    const Complex i(0.0, 1.0);
    return expm(-i * a * jz_generator(ell)) * expm(-i * b * jy_generator(ell)) *
           expm(-i * g * jz_generator(ell));
}

}  // namespace

TEST_CASE("dual enumeration order and dimensions") {
    auto zc = enumerate_dual(Group::cyclic(4), 4);
    for (int n = 0; n < 4; ++n) CHECK(zc[n].n == n);
    CHECK_THROWS_AS(enumerate_dual(Group::cyclic(4), 5), std::invalid_argument);

    auto circ = enumerate_dual(Group::circle(), 5);
    CHECK(circ[0].n == 0);
    CHECK(circ[1].n == 1);
    CHECK(circ[2].n == -1);
    CHECK(circ[3].n == 2);
    CHECK(circ[4].n == -2);

    auto rot = enumerate_dual(Group::so3(), 3);
    CHECK(rot[0].dimension() == 1);
    CHECK(rot[1].dimension() == 3);
    CHECK(rot[2].dimension() == 5);
}

TEST_CASE("irrep matrices at the identity") {
    for (const Group& g : {Group::cyclic(5), Group::circle(), Group::so3()}) {
        for (const auto& lab : labels_up_to_band(g, 2)) {
            const auto m = irrep_matrix(lab, identity(g));
            CHECK((m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <
                  1e-12);
        }
    }
}

TEST_CASE("one-dimensional matrix coefficients") {
    // circle n=2 at theta=pi/4 -> e^{-i pi/2} = -i
    auto m = irrep_matrix({Group::circle(), 2}, GroupElement::circle(kPi / 4));
    CHECK(std::abs(m(0, 0) - Complex(0, -1)) < 1e-14);
    // cyclic N=4, n=1, k=2 -> e^{-i pi} = -1
    auto c = irrep_matrix({Group::cyclic(4), 1}, GroupElement::cyclic(4, 2));
    CHECK(std::abs(c(0, 0) - Complex(-1, 0)) < 1e-14);
}

TEST_CASE("wigner little-d against the J_y exponential oracle") {
    // closed-form anchor: d^1_00(pi/3) = cos(pi/3) = 0.5
    auto d1 = wigner_d_stack(1, kPi / 3);
    CHECK(d1[1](1, 1) == doctest::Approx(0.5));

    for (int ell = 1; ell <= 4; ++ell) {
        for (double beta : {0.2, 1.1, 2.7}) {
            const auto d = wigner_d_stack(ell, beta);
            const Complex i(0, 1);
            const Eigen::MatrixXcd oracle = expm(-i * beta * jy_generator(ell));
            CHECK((d[ell].cast<Complex>() - oracle).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("wigner D against the full exponential oracle") {
    Rng rng(7);
    for (int ell = 1; ell <= 3; ++ell) {
        for (int t = 0; t < 5; ++t) {
            const auto g = random_rotation(rng);
            const auto D = irrep_matrix({Group::so3(), ell}, g);
            const auto O = wigner_oracle(ell, g.alpha(), g.beta(), g.gamma());
            CHECK((D - O).cwiseAbs().maxCoeff() < 1e-11);
        }
    }
}

TEST_CASE("unitarity and the homomorphism property") {
    Rng rng(13);
    for (int t = 0; t < 8; ++t) {
        const auto g = random_rotation(rng);
        const auto h = random_rotation(rng);
        for (int ell = 0; ell <= 6; ++ell) {
            const IrrepLabel lab{Group::so3(), ell};
            const auto Dg = irrep_matrix(lab, g);
            CHECK((Dg * Dg.adjoint() - Eigen::MatrixXcd::Identity(Dg.rows(), Dg.cols()))
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
            const auto Dh = irrep_matrix(lab, h);
            const auto Dgh = irrep_matrix(lab, mul(g, h));
            CHECK((Dgh - Dg * Dh).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("wigner-d symmetry d_{mm'} = (-1)^{m-m'} d_{m'm}") {
    const auto d = wigner_d_stack(8, 1.234);
    for (int ell = 0; ell <= 8; ++ell)
        for (int m = -ell; m <= ell; ++m)
            for (int mp = -ell; mp <= ell; ++mp) {
                const double sgn = ((m - mp) % 2 == 0) ? 1.0 : -1.0;
                CHECK(std::fabs(d[ell](m + ell, mp + ell) - sgn * d[ell](mp + ell, m + ell)) <
                      1e-10);
            }
}

TEST_CASE("wigner-d stays orthogonal at high degree") {
    for (int ell : {32, 64}) {
        for (double beta : {0.4, 1.6, 3.0}) {
            const auto d = wigner_d_stack(ell, beta);
            const auto& top = d[ell];
            CHECK((top * top.transpose() -
                   Eigen::MatrixXd::Identity(top.rows(), top.cols()))
                      .cwiseAbs()
                      .maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("characters") {
    for (int ell = 0; ell <= 4; ++ell)
        CHECK(character({Group::so3(), ell}, identity(Group::so3())).real() ==
              doctest::Approx(2.0 * ell + 1.0));

    // rotation angle pi/2 at l=1: sin(3pi/4)/sin(pi/4) = 1, trace oracle agrees
    const auto g = GroupElement::rotation(0, kPi / 2, 0);
    CHECK(character({Group::so3(), 1}, g).real() == doctest::Approx(1.0));
    CHECK(std::abs(character({Group::so3(), 1}, g) -
                   irrep_matrix({Group::so3(), 1}, g).trace()) < 1e-12);

    CHECK(std::abs(character({Group::cyclic(4), 1}, GroupElement::cyclic(4, 2)) -
                   Complex(-1, 0)) < 1e-14);

    // centrality and the trace identity on random elements
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        const auto x = random_rotation(rng);
        const auto h = random_rotation(rng);
        const auto conj_x = mul(mul(h, x), inv(h));
        for (int ell = 1; ell <= 5; ++ell) {
            const IrrepLabel lab{Group::so3(), ell};
            CHECK(std::abs(character(lab, conj_x) - character(lab, x)) < 1e-10);
            CHECK(std::abs(character(lab, x) - irrep_matrix(lab, x).trace()) < 1e-12);
        }
    }
}

TEST_CASE("schur and character orthonormality at band 3") {
    for (const Group& g : {Group::cyclic(6), Group::circle(), Group::so3()}) {
        const int band = 3;
        const auto rule = haar_quadrature(g, band);
        const auto labels = labels_up_to_band(g, band);

        // character orthonormality
        for (std::size_t a = 0; a < labels.size(); ++a)
            for (std::size_t b = a; b < labels.size(); ++b) {
                Complex acc(0, 0);
                for (std::size_t k = 0; k < rule.size(); ++k)
                    acc += rule.weights[k] * character(labels[a], rule.group_nodes[k]) *
                           std::conj(character(labels[b], rule.group_nodes[k]));
                CHECK(std::abs(acc - (a == b ? 1.0 : 0.0)) < 1e-8);
            }

        // schur orthonormality of sqrt(d) pi_ij across two low labels
        const auto& la = labels[0];
        const auto& lb = labels[labels.size() - 1];
        for (const auto& l1 : {la, lb})
            for (const auto& l2 : {la, lb}) {
                const int d1 = l1.dimension(), d2 = l2.dimension();
                for (int i1 = 0; i1 < d1; ++i1)
                    for (int j1 = 0; j1 < d1; ++j1)
                        for (int i2 = 0; i2 < d2; ++i2)
                            for (int j2 = 0; j2 < d2; ++j2) {
                                Complex acc(0, 0);
                                for (std::size_t k = 0; k < rule.size(); ++k) {
                                    const auto m1 = irrep_matrix(l1, rule.group_nodes[k]);
                                    const auto m2 = irrep_matrix(l2, rule.group_nodes[k]);
                                    acc += rule.weights[k] * std::sqrt(double(d1) * d2) *
                                           m1(i1, j1) * std::conj(m2(i2, j2));
                                }
                                const bool same = l1 == l2 && i1 == i2 && j1 == j2;
                                CHECK(std::abs(acc - (same ? 1.0 : 0.0)) < 1e-8);
                            }
            }
    }
}

TEST_CASE("sum rule: sum_ij pi_ij(g) conj(pi_ij(h)) = chi(g h^-1)") {
    Rng rng(19);
    for (int t = 0; t < 10; ++t) {
        const auto g = random_rotation(rng);
        const auto h = random_rotation(rng);
        for (int ell = 0; ell <= 4; ++ell) {
            const IrrepLabel lab{Group::so3(), ell};
            const Complex lhs =
                irrep_matrix(lab, g).cwiseProduct(irrep_matrix(lab, h).conjugate()).sum();
            const Complex rhs = character(lab, mul(g, inv(h)));
            CHECK(std::abs(lhs - rhs) < 1e-9);
        }
    }
}

TEST_CASE("spherical harmonics") {
    Rng rng(23);
    SpherePoint x(1.1, 2.2);
    CHECK(std::abs(sph_harmonic(0, 0, x) - Complex(1, 0)) < 1e-14);
    CHECK(sph_harmonic(1, 0, SpherePoint::north_pole()).real() ==
          doctest::Approx(std::sqrt(3.0)));
    CHECK_THROWS_AS(sph_harmonic(1, 2, x), std::invalid_argument);

    // conjugation symmetry
    for (int t = 0; t < 10; ++t) {
        SpherePoint p(std::acos(rng.uniform_symmetric()), kTwoPi * rng.uniform());
        for (int ell = 0; ell <= 5; ++ell)
            for (int m = 0; m <= ell; ++m) {
                const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
                CHECK(std::abs(sph_harmonic(ell, -m, p) -
                               sgn * std::conj(sph_harmonic(ell, m, p))) < 1e-12);
            }
    }

    // unit norm under the probability measure, via quadrature
    const auto rule = sphere_quadrature(4);
    Complex norm21(0, 0);
    for (std::size_t k = 0; k < rule.size(); ++k)
        norm21 += rule.weights[k] * sph_harmonic(2, 1, rule.sphere_nodes[k]) *
                  std::conj(sph_harmonic(2, 1, rule.sphere_nodes[k]));
    CHECK(std::abs(norm21 - 1.0) < 1e-9);
}

TEST_CASE("harmonics relate to the m'=0 column of wigner D") {
    // Y_lm(g . north) = sqrt(2l+1) conj(D^l_{m0}(g))
    Rng rng(29);
    for (int t = 0; t < 10; ++t) {
        const auto g = random_rotation(rng);
        const auto x = act(g, SpherePoint::north_pole());
        for (int ell = 0; ell <= 4; ++ell) {
            const auto D = irrep_matrix({Group::so3(), ell}, g);
            for (int m = -ell; m <= ell; ++m) {
                const Complex expect = std::sqrt(2.0 * ell + 1.0) * std::conj(D(m + ell, ell));
                CHECK(std::abs(sph_harmonic(ell, m, x) - expect) < 1e-10);
            }
        }
    }
}

TEST_CASE("normalized associated legendre matches closed forms") {
    for (double x : {-0.8, -0.1, 0.3, 0.9}) {
        CHECK(normalized_assoc_legendre(0, 0, x) == doctest::Approx(1.0));
        CHECK(normalized_assoc_legendre(1, 0, x) == doctest::Approx(std::sqrt(3.0) * x));
        const double s = std::sqrt(1 - x * x);
        CHECK(normalized_assoc_legendre(1, 1, x) == doctest::Approx(-std::sqrt(1.5) * s));
        CHECK(normalized_assoc_legendre(2, 0, x) ==
              doctest::Approx(std::sqrt(5.0) * 0.5 * (3 * x * x - 1)));
    }
}
