#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace isofield {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Which compact group a value belongs to.
enum class GroupKind { cyclic, circle, so3 };

/// Group descriptor: the kind plus the order N for cyclic groups.
struct Group {
    GroupKind kind = GroupKind::circle;
    int order = 0;  // N for cyclic, unused otherwise

    static Group cyclic(int n);
    static Group circle() { return Group{GroupKind::circle, 0}; }
    static Group so3() { return Group{GroupKind::so3, 0}; }

    friend bool operator==(const Group& a, const Group& b) {
        return a.kind == b.kind && a.order == b.order;
    }
    friend bool operator!=(const Group& a, const Group& b) { return !(a == b); }

    std::string name() const;
};

/// Element of Z_N, U(1) or SO(3), canonicalized at construction.
///
/// Parametrization: cyclic index in [0,N); circle angle in [0,2pi);
/// SO(3) ZYZ Euler angles alpha in [0,2pi), beta in [0,pi], gamma in [0,2pi),
/// with gimbal-degenerate elements (beta = 0 or pi) folded so gamma = 0.
class GroupElement {
  public:
    static GroupElement cyclic(int order, long long index);
    static GroupElement circle(double theta);
    static GroupElement rotation(double alpha, double beta, double gamma);
    static GroupElement rotation_from_matrix(const Group& g, const std::array<double, 9>& r);

    const Group& group() const { return group_; }

    int index() const { return index_; }       // cyclic
    double theta() const { return alpha_; }    // circle
    double alpha() const { return alpha_; }    // so3
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }

    /// 3x3 rotation matrix, row-major. SO(3) only.
    std::array<double, 9> matrix() const;

  private:
    GroupElement() = default;
    Group group_;
    int index_ = 0;
    double alpha_ = 0.0, beta_ = 0.0, gamma_ = 0.0;
};

/// Point on S^2: colatitude theta in [0,pi], longitude phi in [0,2pi).
struct SpherePoint {
    double theta = 0.0;
    double phi = 0.0;

    SpherePoint() = default;
    SpherePoint(double theta_in, double phi_in);

    std::array<double, 3> unit_vector() const;
    static SpherePoint north_pole() { return SpherePoint(0.0, 0.0); }
    static SpherePoint from_vector(double x, double y, double z);
};

GroupElement identity(const Group& g);
GroupElement mul(const GroupElement& g, const GroupElement& h);
GroupElement inv(const GroupElement& g);

/// Bi-invariant distance: arc length on Z_N and U(1); the rotation angle
/// omega(g^-1 h) = arccos((trace-1)/2) on SO(3).
double metric(const GroupElement& g, const GroupElement& h);

/// Equality of group elements is metric-based, never bitwise.
bool approx_equal(const GroupElement& g, const GroupElement& h, double tol = 1e-9);

/// Left action of SO(3) on S^2.
SpherePoint act(const GroupElement& g, const SpherePoint& x);

/// A rotation carrying the north pole to x (transitivity witness).
GroupElement rotation_to(const SpherePoint& x);

/// Great-circle distance on S^2.
double sphere_distance(const SpherePoint& x, const SpherePoint& y);

/// Nodes and normalized weights of an exact Haar / surface-measure rule.
///
/// Weights sum to 1. A rule of band B integrates products of matrix
/// coefficients (resp. spherical harmonics) with labels up to B exactly.
struct QuadratureRule {
    enum class Domain { group, sphere };
    Domain domain = Domain::group;
    Group group;  // meaningful for Domain::group
    int band = 0;
    std::vector<GroupElement> group_nodes;
    std::vector<SpherePoint> sphere_nodes;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Haar quadrature exact up to band B.
/// Cyclic: all N points at weight 1/N. Circle: 2B+1 uniform angles.
/// SO(3): uniform alpha,gamma grids (2B+1 each) x Gauss-Legendre in cos(beta)
/// (B+1 nodes), normalized to total mass 1.
QuadratureRule haar_quadrature(const Group& g, int band);

/// Product rule on S^2 exact for Y_lm * conj(Y_l'm') with l,l' <= band;
/// normalized surface measure (total mass 1).
QuadratureRule sphere_quadrature(int band);

/// Gauss-Legendre nodes/weights on [-1,1]; weights sum to 2.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

namespace detail {
std::array<double, 9> mat_mul(const std::array<double, 9>& a, const std::array<double, 9>& b);
std::array<double, 9> mat_transpose(const std::array<double, 9>& a);
double wrap_angle(double a);  // into [0, 2pi)
void require_same_group(const GroupElement& g, const GroupElement& h, const char* op);
}  // namespace detail

}  // namespace isofield
