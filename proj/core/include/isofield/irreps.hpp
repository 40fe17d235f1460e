#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "isofield/group.hpp"

namespace isofield {

using Complex = std::complex<double>;

/// Label of an equivalence class in the dual.
///
/// cyclic: frequency n in [0, N); circle: frequency n in Z;
/// so3: degree ell >= 0.
struct IrrepLabel {
    Group group;
    int n = 0;

    int dimension() const;
    /// Label of the conjugate representation (n -> N-n, n -> -n, ell -> ell).
    IrrepLabel conjugate() const;
    bool trivial() const { return n == 0; }

    friend bool operator==(const IrrepLabel& a, const IrrepLabel& b) {
        return a.group == b.group && a.n == b.n;
    }
    friend bool operator<(const IrrepLabel& a, const IrrepLabel& b) { return a.n < b.n; }
};

/// Deterministic enumeration of the dual: cyclic 0,1,...; circle 0,1,-1,2,-2,...;
/// so3 ell = 0,1,2,...
std::vector<IrrepLabel> enumerate_dual(const Group& g, int count);

/// Labels with |frequency| (resp. degree) <= band, in enumeration order.
std::vector<IrrepLabel> labels_up_to_band(const Group& g, int band);

/// Unitary irrep matrix D^pi(g). 1x1 e^{-i n theta} for Z_N and U(1);
/// Wigner D^ell_{mm'}(alpha,beta,gamma) = e^{-im alpha} d^ell_{mm'}(beta) e^{-im' gamma}
/// for SO(3), rows/cols indexed by m, m' ascending from -ell to ell.
Eigen::MatrixXcd irrep_matrix(const IrrepLabel& label, const GroupElement& g);

/// All of D^0(g) .. D^lmax(g) from a single Wigner-d stack; cheaper than
/// per-degree irrep_matrix calls when assembling transform plans.
std::vector<Eigen::MatrixXcd> so3_matrices(int lmax, const GroupElement& g);

/// Character chi_pi(g) = trace D^pi(g). For SO(3) this is evaluated through
/// the class function U_{2ell}(cos(omega/2)) of the rotation angle, an
/// independent route from the Wigner-D trace.
Complex character(const IrrepLabel& label, const GroupElement& g);

/// SO(3) character as a function of the rotation angle.
double so3_character(int ell, double omega);

/// Wigner little-d matrices d^0..d^lmax at angle beta, each (2l+1)x(2l+1)
/// with m ascending. Three-term recursion in l per (m,m') pair, seeded with
/// the closed forms at l = max(|m|,|m'|) (d^0 = 1, d^1 direct for the m=m'=0 chain).
std::vector<Eigen::MatrixXd> wigner_d_stack(int lmax, double beta);

/// Legendre polynomial P_l(x) by the standard recurrence.
double legendre_p(int l, double x);

/// Orthonormal-on-probability-measure spherical harmonic:
/// Y_lm = sqrt((2l+1)(l-m)!/(l+m)!) P_l^m(cos theta) e^{im phi}, Condon-Shortley
/// phase included, so Y_00 = 1 and <Y_lm, Y_l'm'> = delta delta under the
/// unit-mass surface measure.
Complex sph_harmonic(int ell, int m, const SpherePoint& x);

/// sqrt((2l+1)(l-m)!/(l+m)!) P_l^m(x) for m >= 0 (the theta part of Y_lm).
double normalized_assoc_legendre(int ell, int m, double x);

}  // namespace isofield
