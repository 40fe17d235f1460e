#pragma once

#include "isofield/field.hpp"

namespace isofield {

/// m(delta) = sup over a metric ball of radius delta of the mean-square
/// increment E|T(g) - T(e)|^2, computed exactly from the spectrum.
struct ModulusCurve {
    std::vector<double> deltas;
    std::vector<double> modulus;
    double total_variance = 0.0;
    int grid_points = 0;  // search-grid resolution the suprema were taken over

    void validate() const;  // m(0)=0, nondecreasing, m <= 4*variance
};

/// Empirical two-point statistics against the analytic covariance.
struct CovarianceEntry {
    std::string name;
    Complex analytic;
    ZCheck real_part;
    ZCheck imag_part;
};

struct CovarianceReport {
    std::vector<CovarianceEntry> entries;
    bool pass = true;
};

/// Outcome of feeding a (possibly discontinuous) covariance through the
/// character projection machinery.
struct NuggetVerdict {
    std::map<int, double> recovered;     // alpha-hat per label
    double reconstruction_at_identity = 0.0;
    double claimed_at_identity = 0.0;
    double defect = 0.0;                 // claimed - reconstructed
    bool realizable = false;
    std::string note;
};

struct MomentReport {
    std::vector<ZCheck> checks;
    bool pass = true;
};

struct ConvergencePoint {
    int prefix = 0;
    double analytic_residual = 0.0;
    ZCheck fixed_point;   // MC estimate at g0 vs analytic tail
    ZCheck integrated;    // MC estimate of the L^2(G) residual vs analytic tail
    ZCheck consistency;   // paired fixed-point vs integrated
};

/// E|T(g) - T(e)|^2 = 2 (R(e) - Re R(g)).
double ms_increment(const PowerSpectrum& spec, const GroupElement& g);

/// Sphere version through the reduced covariance at distance d(x,y).
double ms_increment_sphere(const PowerSpectrum& spec, const SpherePoint& x, const SpherePoint& y);

/// Modulus over the given search grid. For circle/SO(3) domains each delta's
/// boundary element is added to the grid, so attainable suprema are hit
/// exactly. Deltas must be sorted ascending.
ModulusCurve continuity_modulus(const PowerSpectrum& spec, const std::vector<double>& deltas,
                                const std::vector<GroupElement>& grid);

/// Default search grid: all of Z_N, or `n` uniform angles/rotation angles.
std::vector<GroupElement> default_modulus_grid(const Group& g, int n);

/// Sphere modulus from the reduced covariance (Legendre route).
ModulusCurve sphere_modulus(const PowerSpectrum& spec, const std::vector<double>& deltas,
                            int angle_grid = 256);

/// Same quantity computed on SO(3) through the lifted field T_x(g) = T(g.x)
/// restricted to motions of the base point (Wigner-d route). Agrees with
/// sphere_modulus to quadrature precision; this is the Theorem-2 reduction.
ModulusCurve sphere_modulus_via_lift(const PowerSpectrum& spec, const std::vector<double>& deltas,
                                     int angle_grid = 256);

/// Term-by-term upper bound sum_pi d_pi alpha_pi max_{omega<=delta}
/// (2 - 2 Re chi_pi / d_pi); dominates m(delta) and vanishes with delta.
double modulus_term_bound(const PowerSpectrum& spec, double delta, int angle_grid = 256);

struct MonteCarloOptions {
    std::size_t replicates = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
    double z_threshold = 4.0;
    RealStructure structure = RealStructure::complex_field;
};

/// The Lemma's integrated functionals: compares mixed Re/Im moments up to
/// order 4 of (T(f_1..f_m)) and (T^h(f_1..f_m)), T(f) = <T, f>_G by
/// quadrature per replicate. Fewer than 100 replicates is refused.
MomentReport isotropy_functional_test(const PowerSpectrum& spec, const GroupElement& h,
                                      const std::vector<FieldCoefficients>& test_functions,
                                      const MonteCarloOptions& opt);

/// Empirical cov(T^pi(g), conj(T^pi'(h))) with z-scores; pi != pi'.
MomentReport uncorrelatedness_test(const PowerSpectrum& spec, const IrrepLabel& pi,
                                   const IrrepLabel& pi_prime, const GroupElement& g,
                                   const GroupElement& h, const MonteCarloOptions& opt);

/// Empirical covariance of (T(g_1..g_k)) vs (T(h g_1..g_k)) entrywise;
/// the sampler-isotropy check.
CovarianceReport isotropy_covariance_test(const PowerSpectrum& spec, const GroupElement& h,
                                          const std::vector<GroupElement>& points,
                                          const MonteCarloOptions& opt);

/// Partial-sum residuals at g0 over dual-enumeration prefixes, fixed-point and
/// integrated, against the analytic tails.
std::vector<ConvergencePoint> convergence_curve(const PowerSpectrum& spec,
                                                const std::vector<int>& prefixes,
                                                const GroupElement& g0,
                                                const MonteCarloOptions& opt);

/// alpha_pi = <R, chi_pi> over the rule (characters route); imaginary parts
/// are reported via max_imag.
struct RecoveredSpectrum {
    std::map<int, double> alpha;
    double max_imag = 0.0;
    bool nonnegative(double tol) const;
};
RecoveredSpectrum spectrum_of_covariance(const Eigen::VectorXcd& r_values,
                                         const QuadratureRule& rule);

/// Sphere variant: R given as values of the zonal function around the north
/// pole on a sphere rule; alpha_l = <R, Y_l0>/sqrt(2l+1).
RecoveredSpectrum spectrum_of_zonal_covariance(const Eigen::VectorXcd& r_values,
                                               const QuadratureRule& rule);

/// Feeds the covariance "variance at 0 / constant off the diagonal" through
/// spectrum recovery. The diagonal is a Haar-null set, so the grid function is
/// the off-diagonal constant; realizable iff the defect vanishes and all
/// recovered alphas are nonnegative.
NuggetVerdict nugget_analysis(double variance_at_zero, double off_diagonal, const DomainSpec& d,
                              int band, double tol = 1e-9);

/// One tested instance of the covariance-continuity chain of inequalities.
struct ContinuityEntry {
    double lhs = 0.0;    // |Gamma(x1,y1) - Gamma(x2,y2)|
    double bound = 0.0;  // Cauchy-Schwarz majorant
    bool pass = false;
};

/// Verifies |Gamma(x1,y1)-Gamma(x2,y2)| <= sqrt(Gamma(x1,x1) ms(y1,y2)) +
/// sqrt(Gamma(y2,y2) ms(x1,x2)) + tol on each quadruple (x1,y1,x2,y2).
std::vector<ContinuityEntry> covariance_continuity_check(
    const PowerSpectrum& spec, const std::vector<std::array<SpherePoint, 4>>& quadruples,
    double tol = 1e-9);

}  // namespace isofield
