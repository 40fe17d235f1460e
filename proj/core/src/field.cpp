#include "isofield/field.hpp"

#include <cmath>
#include <stdexcept>

namespace isofield {

namespace {

int block_rows(const DomainSpec& d, int label) {
    return IrrepLabel{d.group, label}.dimension();
}

int block_cols(const DomainSpec& d, int label) {
    return d.on_sphere ? 1 : IrrepLabel{d.group, label}.dimension();
}

/// Complex Gaussian with E|z|^2 = var; or real Gaussian with E z^2 = var.
Complex draw(Rng& rng, double var, bool real_draw) {
    if (var == 0.0) {
        // keep the stream aligned regardless of the spectrum's zeros
        rng.gaussian();
        rng.gaussian();
        return Complex(0.0, 0.0);
    }
    const double g1 = rng.gaussian();
    const double g2 = rng.gaussian();
    if (real_draw) return Complex(std::sqrt(var) * g1, 0.0);
    const double s = std::sqrt(var / 2.0);
    return Complex(s * g1, s * g2);
}

}  // namespace

FieldCoefficients FieldCoefficients::zero(const DomainSpec& d,
                                          const std::vector<IrrepLabel>& labels) {
    FieldCoefficients c;
    c.domain = d;
    for (const auto& lab : labels)
        c.blocks[lab.n] = Eigen::MatrixXcd::Zero(block_rows(d, lab.n), block_cols(d, lab.n));
    return c;
}

int FieldCoefficients::band() const {
    int b = 0;
    for (const auto& [n, m] : blocks) b = std::max(b, std::abs(n));
    return b;
}

void FieldCoefficients::validate() const {
    for (const auto& [n, m] : blocks) {
        if (m.rows() != block_rows(domain, n) || m.cols() != block_cols(domain, n))
            throw std::invalid_argument("FieldCoefficients: block shape mismatch at label " +
                                        std::to_string(n));
    }
}

double FieldCoefficients::parseval_norm2() const {
    double s = 0.0;
    for (const auto& [n, m] : blocks) {
        const double d = IrrepLabel{domain.group, n}.dimension();
        s += (domain.on_sphere ? 1.0 : d) * m.squaredNorm();
    }
    return s;
}

FieldSample sample_gaussian(const PowerSpectrum& spec, std::uint64_t seed, std::uint64_t replicate,
                            RealStructure rs) {
    const DomainSpec& d = spec.domain();
    if (rs == RealStructure::real_field && !spec.conjugate_symmetric())
        throw std::invalid_argument(
            "sample_gaussian: real structure requires a conjugate-symmetric spectrum");

    FieldSample out;
    out.master_seed = seed;
    out.replicate = replicate;
    out.coeffs = FieldCoefficients::zero(d, spec.labels());
    Rng rng(derive_seed(seed, replicate));

    for (const auto& lab : spec.labels()) {
        auto& block = out.coeffs.blocks[lab.n];
        const double a = spec.alpha(lab.n);
        const int dim = lab.dimension();

        if (d.on_sphere) {
            // a_lm down the column, m ascending; real field ties m and -m.
            const int ell = lab.n;
            if (rs == RealStructure::complex_field) {
                for (int m = -ell; m <= ell; ++m) block(m + ell, 0) = draw(rng, a, false);
            } else {
                block(ell, 0) = draw(rng, a, true);
                for (int m = 1; m <= ell; ++m) {
                    const Complex z = draw(rng, a, false);
                    block(m + ell, 0) = z;
                    block(-m + ell, 0) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(z);
                }
            }
            continue;
        }

        const double var = a / (double(dim) * dim);
        if (rs == RealStructure::complex_field) {
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) block(i, j) = draw(rng, var, false);
            continue;
        }

        // Real structure: pair each entry with its conjugate slot.
        switch (d.group.kind) {
            case GroupKind::cyclic:
            case GroupKind::circle: {
                const int cn = lab.conjugate().n;
                if (cn == lab.n) {
                    block(0, 0) = draw(rng, var, true);
                } else if (out.coeffs.blocks.count(cn) &&
                           (d.group.kind == GroupKind::circle ? lab.n > cn
                                                              : lab.n < cn)) {
                    const Complex z = draw(rng, var, false);
                    block(0, 0) = z;
                    out.coeffs.blocks[cn](0, 0) = std::conj(z);
                }
                break;
            }
            case GroupKind::so3: {
                const int ell = lab.n;
                // pair (m,m') with (-m,-m'); c_{-m,-m'} = (-1)^{m-m'} conj(c_{mm'})
                for (int m = -ell; m <= ell; ++m) {
                    for (int mp = -ell; mp <= ell; ++mp) {
                        if (m == 0 && mp == 0) {
                            block(ell, ell) = draw(rng, var, true);
                        } else if (m > 0 || (m == 0 && mp > 0)) {
                            const Complex z = draw(rng, var, false);
                            const double sgn = ((m - mp) % 2 == 0) ? 1.0 : -1.0;
                            block(m + ell, mp + ell) = z;
                            block(-m + ell, -mp + ell) = sgn * std::conj(z);
                        }
                    }
                }
                break;
            }
        }
    }
    return out;
}

Complex evaluate(const FieldCoefficients& coeffs, const GroupElement& g) {
    if (coeffs.domain.group != g.group())
        throw std::invalid_argument("evaluate: domain mismatch");
    Complex t(0.0, 0.0);
    for (const auto& [n, block] : coeffs.blocks) {
        const IrrepLabel lab{coeffs.domain.group, n};
        if (coeffs.domain.on_sphere) {
            // lifted synthesis: T(g) = sum_lm a_lm sqrt(2l+1) conj(D^l_{m0}(g))
            const int ell = n;
            const auto D = irrep_matrix(lab, g);
            const double sd = std::sqrt(2.0 * ell + 1.0);
            for (int m = -ell; m <= ell; ++m)
                t += block(m + ell, 0) * sd * std::conj(D(m + ell, ell));
            continue;
        }
        const auto D = irrep_matrix(lab, g);
        t += double(lab.dimension()) * block.cwiseProduct(D).sum();
    }
    return t;
}

Complex evaluate(const FieldSample& sample, const GroupElement& g) {
    return evaluate(sample.coeffs, g);
}

Complex evaluate_on_sphere(const FieldCoefficients& coeffs, const SpherePoint& x) {
    if (!coeffs.domain.on_sphere)
        throw std::invalid_argument("evaluate_on_sphere: sphere-domain coefficients required");
    Complex t(0.0, 0.0);
    for (const auto& [ell, block] : coeffs.blocks) {
        for (int m = -ell; m <= ell; ++m) t += block(m + ell, 0) * sph_harmonic(ell, m, x);
    }
    return t;
}

Complex evaluate_on_sphere(const FieldSample& sample, const SpherePoint& x) {
    return evaluate_on_sphere(sample.coeffs, x);
}

FieldCoefficients lift_to_group(const FieldCoefficients& sphere_coeffs) {
    if (!sphere_coeffs.domain.on_sphere)
        throw std::invalid_argument("lift_to_group: sphere-domain coefficients required");
    FieldCoefficients out;
    out.domain = DomainSpec::so3();
    for (const auto& [ell, a] : sphere_coeffs.blocks) {
        Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(2 * ell + 1, 2 * ell + 1);
        const double sd = std::sqrt(2.0 * ell + 1.0);
        for (int m = -ell; m <= ell; ++m) {
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            block(m + ell, ell) = sgn * a(-m + ell, 0) / sd;
        }
        out.blocks[ell] = block;
    }
    return out;
}

void TransformPlan::build_group(const DomainSpec& domain, const std::vector<GroupElement>& points) {
    if (domain.on_sphere)
        throw std::invalid_argument(
            "TransformPlan: group-point plans take group-domain coefficients; lift first");
    domain_ = domain;
    int cols = 0;
    offsets_.clear();
    for (const auto& lab : labels_) {
        offsets_.push_back(cols);
        cols += lab.dimension() * lab.dimension();
    }
    basis_.resize(points.size(), cols);
    const bool rot = domain.group.kind == GroupKind::so3;
    int lmax = 0;
    for (const auto& lab : labels_) lmax = std::max(lmax, std::abs(lab.n));
    for (std::size_t k = 0; k < points.size(); ++k) {
        std::vector<Eigen::MatrixXcd> stack;
        if (rot) stack = so3_matrices(lmax, points[k]);
        for (std::size_t li = 0; li < labels_.size(); ++li) {
            const Eigen::MatrixXcd D =
                rot ? stack[labels_[li].n] : irrep_matrix(labels_[li], points[k]);
            const int d = labels_[li].dimension();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) basis_(k, offsets_[li] + i * d + j) = D(i, j);
        }
    }
}

void TransformPlan::build_sphere(const std::vector<SpherePoint>& points) {
    domain_ = DomainSpec::sphere();
    int cols = 0;
    offsets_.clear();
    for (const auto& lab : labels_) {
        offsets_.push_back(cols);
        cols += lab.dimension();
    }
    basis_.resize(points.size(), cols);
    for (std::size_t k = 0; k < points.size(); ++k) {
        for (std::size_t li = 0; li < labels_.size(); ++li) {
            const int ell = labels_[li].n;
            for (int m = -ell; m <= ell; ++m)
                basis_(k, offsets_[li] + m + ell) = sph_harmonic(ell, m, points[k]);
        }
    }
}

TransformPlan::TransformPlan(const QuadratureRule& rule, const std::vector<IrrepLabel>& labels)
    : labels_(labels) {
    weights_ = rule.weights;
    if (rule.domain == QuadratureRule::Domain::group) {
        build_group(DomainSpec{rule.group, false}, rule.group_nodes);
    } else {
        build_sphere(rule.sphere_nodes);
    }
}

TransformPlan::TransformPlan(const DomainSpec& domain, const std::vector<GroupElement>& points,
                             const std::vector<IrrepLabel>& labels)
    : labels_(labels) {
    build_group(domain, points);
}

TransformPlan::TransformPlan(const std::vector<SpherePoint>& points,
                             const std::vector<IrrepLabel>& labels)
    : labels_(labels) {
    build_sphere(points);
}

Eigen::VectorXcd TransformPlan::flatten(const FieldCoefficients& coeffs,
                                        bool scale_by_dim) const {
    Eigen::VectorXcd flat = Eigen::VectorXcd::Zero(basis_.cols());
    for (std::size_t li = 0; li < labels_.size(); ++li) {
        auto it = coeffs.blocks.find(labels_[li].n);
        if (it == coeffs.blocks.end()) continue;
        const auto& block = it->second;
        const int d = labels_[li].dimension();
        const double scale = scale_by_dim && !domain_.on_sphere ? double(d) : 1.0;
        const int width = domain_.on_sphere ? 1 : d;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < width; ++j)
                flat(offsets_[li] + i * width + j) = scale * block(i, j);
    }
    return flat;
}

FieldCoefficients TransformPlan::unflatten(const Eigen::VectorXcd& flat) const {
    FieldCoefficients out = FieldCoefficients::zero(domain_, labels_);
    for (std::size_t li = 0; li < labels_.size(); ++li) {
        auto& block = out.blocks[labels_[li].n];
        const int d = labels_[li].dimension();
        const int width = domain_.on_sphere ? 1 : d;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < width; ++j) block(i, j) = flat(offsets_[li] + i * width + j);
    }
    return out;
}

Eigen::VectorXcd TransformPlan::synthesize(const FieldCoefficients& coeffs) const {
    if (domain_.on_sphere) {
        // sphere basis already holds Y_lm; coefficients enter unscaled.
        return basis_ * flatten(coeffs, false);
    }
    return basis_ * flatten(coeffs, true);
}

FieldCoefficients TransformPlan::analyze_values(const Eigen::VectorXcd& values) const {
    if (weights_.empty())
        throw std::invalid_argument("TransformPlan::analyze_values: plan has no quadrature weights");
    if (static_cast<std::size_t>(values.size()) != weights_.size())
        throw std::invalid_argument("TransformPlan::analyze_values: value/node count mismatch");
    Eigen::VectorXcd weighted(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) weighted(k) = values(k) * weights_[k];
    return unflatten(basis_.adjoint() * weighted);
}

AnalyzeResult analyze(const Eigen::VectorXcd& values, const QuadratureRule& rule,
                      const std::vector<IrrepLabel>& labels, std::optional<int> field_band) {
    AnalyzeResult res;
    int want = 0;
    for (const auto& lab : labels) want = std::max(want, std::abs(lab.n));
    if (field_band) want = std::max(want, *field_band);
    const bool cyclic_ok = rule.group.kind == GroupKind::cyclic &&
                           rule.domain == QuadratureRule::Domain::group;
    if (!cyclic_ok && rule.band < want) {
        res.aliased = true;
        res.note = "aliasing: rule band " + std::to_string(rule.band) +
                   " below field band " + std::to_string(want);
    }
    TransformPlan plan(rule, labels);
    res.coeffs = plan.analyze_values(values);
    return res;
}

Eigen::VectorXcd project(const Eigen::VectorXcd& values, const QuadratureRule& rule,
                         const IrrepLabel& label) {
    TransformPlan plan(rule, {label});
    return plan.synthesize(plan.analyze_values(values));
}

Eigen::VectorXcd project_convolution(const Eigen::VectorXcd& values, const QuadratureRule& rule,
                                     const IrrepLabel& label) {
    if (rule.domain != QuadratureRule::Domain::group)
        throw std::invalid_argument("project_convolution: group rules only");
    const std::size_t n = rule.size();
    Eigen::VectorXcd out(n);
    const double d = label.dimension();
    const Group& g = rule.group;

    if (g.kind == GroupKind::so3) {
        // chi_l(g_k^-1 g_j) depends only on the relative rotation angle;
        // work from cached 3x3 matrices.
        std::vector<std::array<double, 9>> mats(n);
        for (std::size_t k = 0; k < n; ++k) mats[k] = rule.group_nodes[k].matrix();
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                double tr = 0.0;
                for (int t = 0; t < 9; ++t) tr += mats[k][t] * mats[j][t];
                const double omega = std::acos(std::min(1.0, std::max(-1.0, (tr - 1.0) / 2.0)));
                acc += values(k) * rule.weights[k] * so3_character(label.n, omega);
            }
            out(j) = d * acc;
        }
        return out;
    }

    for (std::size_t j = 0; j < n; ++j) {
        Complex acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const GroupElement rel = mul(inv(rule.group_nodes[k]), rule.group_nodes[j]);
            acc += values(k) * rule.weights[k] * character(label, rel);
        }
        out(j) = d * acc;
    }
    return out;
}

FieldCoefficients partial_sum_coeffs(const FieldCoefficients& coeffs, int n) {
    if (n < 0) throw std::invalid_argument("partial_sum_coeffs: n >= 0 required");
    FieldCoefficients out;
    out.domain = coeffs.domain;
    if (n == 0) return out;
    const auto order = enumerate_dual(coeffs.domain.group, n);
    for (const auto& lab : order) {
        auto it = coeffs.blocks.find(lab.n);
        if (it != coeffs.blocks.end()) out.blocks[lab.n] = it->second;
    }
    return out;
}

FieldCoefficients residual_coeffs(const FieldCoefficients& coeffs, int n) {
    FieldCoefficients kept = partial_sum_coeffs(coeffs, n);
    FieldCoefficients out;
    out.domain = coeffs.domain;
    for (const auto& [label, block] : coeffs.blocks)
        if (!kept.blocks.count(label)) out.blocks[label] = block;
    return out;
}

double quadrature_norm2(const Eigen::VectorXcd& values, const QuadratureRule& rule) {
    if (static_cast<std::size_t>(values.size()) != rule.size())
        throw std::invalid_argument("quadrature_norm2: value/node count mismatch");
    double s = 0.0;
    for (Eigen::Index k = 0; k < values.size(); ++k) s += rule.weights[k] * std::norm(values(k));
    return s;
}

Complex quadrature_inner(const Eigen::VectorXcd& f1, const Eigen::VectorXcd& f2,
                         const QuadratureRule& rule) {
    if (f1.size() != f2.size() || static_cast<std::size_t>(f1.size()) != rule.size())
        throw std::invalid_argument("quadrature_inner: size mismatch");
    Complex s(0.0, 0.0);
    for (Eigen::Index k = 0; k < f1.size(); ++k) s += rule.weights[k] * f1(k) * std::conj(f2(k));
    return s;
}

}  // namespace isofield
