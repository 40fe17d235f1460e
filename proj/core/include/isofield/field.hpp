#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "isofield/spectrum.hpp"
#include "isofield/stats.hpp"

namespace isofield {

/// Peter-Weyl coefficients of a band-limited field.
///
/// Group domains store one d_pi x d_pi block per label, synthesizing as
/// T(g) = sum_pi d_pi sum_ij c^pi_ij pi_ij(g). The sphere domain stores a
/// (2l+1)-vector a_l of harmonic coefficients per degree, synthesizing as
/// T(x) = sum_lm a_lm Y_lm(x).
struct FieldCoefficients {
    DomainSpec domain;
    std::map<int, Eigen::MatrixXcd> blocks;

    static FieldCoefficients zero(const DomainSpec& d, const std::vector<IrrepLabel>& labels);

    int band() const;
    void validate() const;

    /// sum_pi d_pi sum_ij |c_ij|^2 (group) / sum_lm |a_lm|^2 (sphere):
    /// the L^2 norm^2 of the synthesized field.
    double parseval_norm2() const;
};

enum class RealStructure { complex_field, real_field };

/// One realization: coefficients plus seed provenance.
struct FieldSample {
    FieldCoefficients coeffs;
    std::uint64_t master_seed = 0;
    std::uint64_t replicate = 0;
};

/// Draws independent complex Gaussian coefficients with E|c^pi_ij|^2 =
/// alpha_pi / d_pi^2 (group) or E|a_lm|^2 = alpha_l (sphere). real_field ties
/// conjugate labels/entries together so the synthesized field is real; it
/// requires a conjugate-symmetric spectrum. Deterministic in (seed, replicate).
FieldSample sample_gaussian(const PowerSpectrum& spec, std::uint64_t seed, std::uint64_t replicate,
                            RealStructure rs = RealStructure::complex_field);

Complex evaluate(const FieldCoefficients& coeffs, const GroupElement& g);
Complex evaluate(const FieldSample& sample, const GroupElement& g);
Complex evaluate_on_sphere(const FieldCoefficients& coeffs, const SpherePoint& x);
Complex evaluate_on_sphere(const FieldSample& sample, const SpherePoint& x);

/// Sphere coefficients as the m'=0 column of SO(3) blocks:
/// c^l_{m,0} = (-1)^m a_{l,-m} / sqrt(2l+1), so that evaluating the group
/// coefficients at g reproduces T(g . north_pole).
FieldCoefficients lift_to_group(const FieldCoefficients& sphere_coeffs);

/// Dense synthesis/analysis operator over a fixed node set: basis matrix
/// P[node, flat(pi,i,j)] = pi_ij(g_node) (resp. Y_lm(x_node)), assembled once
/// and reused across replicates. Synthesis is P * (d_pi * c); analysis is
/// P^H * (w .* values).
class TransformPlan {
  public:
    TransformPlan(const QuadratureRule& rule, const std::vector<IrrepLabel>& labels);
    TransformPlan(const DomainSpec& domain, const std::vector<GroupElement>& points,
                  const std::vector<IrrepLabel>& labels);
    TransformPlan(const std::vector<SpherePoint>& points, const std::vector<IrrepLabel>& labels);

    const std::vector<IrrepLabel>& labels() const { return labels_; }
    std::size_t nodes() const { return basis_.rows(); }
    std::size_t coeff_size() const { return basis_.cols(); }

    Eigen::VectorXcd synthesize(const FieldCoefficients& coeffs) const;
    /// Quadrature analysis; requires the plan to carry rule weights.
    FieldCoefficients analyze_values(const Eigen::VectorXcd& values) const;

    Eigen::VectorXcd flatten(const FieldCoefficients& coeffs, bool scale_by_dim) const;
    FieldCoefficients unflatten(const Eigen::VectorXcd& flat) const;

    const Eigen::MatrixXcd& basis() const { return basis_; }
    const std::vector<double>& weights() const { return weights_; }

  private:
    void build_group(const DomainSpec& domain, const std::vector<GroupElement>& points);
    void build_sphere(const std::vector<SpherePoint>& points);

    DomainSpec domain_;
    std::vector<IrrepLabel> labels_;
    std::vector<int> offsets_;
    Eigen::MatrixXcd basis_;
    std::vector<double> weights_;  // empty for point plans
};

/// Analysis result; `aliased` is set when the rule band cannot resolve the
/// requested labels or the declared band of the input field.
struct AnalyzeResult {
    FieldCoefficients coeffs;
    bool aliased = false;
    std::string note;
};

/// Forward Peter-Weyl transform of grid values:
/// c^pi_ij = sum_k w_k f(g_k) conj(pi_ij(g_k)).
AnalyzeResult analyze(const Eigen::VectorXcd& values, const QuadratureRule& rule,
                      const std::vector<IrrepLabel>& labels,
                      std::optional<int> field_band = std::nullopt);

/// Component field T^pi on the rule's own nodes, via analyze-then-synthesize.
Eigen::VectorXcd project(const Eigen::VectorXcd& values, const QuadratureRule& rule,
                         const IrrepLabel& label);

/// Same component through the character convolution
/// T^pi(g) = d_pi sum_k w_k f(g_k) chi_pi(g_k^-1 g); representative-independent
/// route used to cross-check `project`.
Eigen::VectorXcd project_convolution(const Eigen::VectorXcd& values, const QuadratureRule& rule,
                                     const IrrepLabel& label);

/// Coefficients restricted to the first n labels of the dual enumeration.
FieldCoefficients partial_sum_coeffs(const FieldCoefficients& coeffs, int n);
/// Complement of partial_sum_coeffs.
FieldCoefficients residual_coeffs(const FieldCoefficients& coeffs, int n);

/// sum_k w_k |v_k|^2.
double quadrature_norm2(const Eigen::VectorXcd& values, const QuadratureRule& rule);
/// <f1, f2> = sum_k w_k f1_k conj(f2_k).
Complex quadrature_inner(const Eigen::VectorXcd& f1, const Eigen::VectorXcd& f2,
                         const QuadratureRule& rule);

}  // namespace isofield
