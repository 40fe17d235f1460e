#include "isofield/spectrum.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace isofield {

std::string DomainSpec::name() const {
    if (on_sphere) return "sphere";
    return group.kind == GroupKind::cyclic ? "cyclic"
           : group.kind == GroupKind::circle ? "circle"
                                             : "so3";
}

DomainSpec DomainSpec::parse(const std::string& name, int cyclic_order) {
    if (name == "cyclic") return DomainSpec::cyclic(cyclic_order);
    if (name == "circle") return DomainSpec::circle();
    if (name == "so3") return DomainSpec::so3();
    if (name == "sphere") return DomainSpec::sphere();
    throw std::invalid_argument("DomainSpec::parse: unknown domain '" + name + "'");
}

PowerSpectrum::PowerSpectrum(DomainSpec domain, std::map<int, double> alphas)
    : domain_(domain), alphas_(std::move(alphas)) {
    for (const auto& [n, a] : alphas_) {
        if (a < 0.0)
            throw std::invalid_argument("PowerSpectrum: negative alpha at label " +
                                        std::to_string(n));
        switch (domain_.group.kind) {
            case GroupKind::cyclic:
                if (n < 0 || n >= domain_.group.order)
                    throw std::invalid_argument("PowerSpectrum: cyclic label out of [0,N)");
                band_ = std::max(band_, std::min(n, domain_.group.order - n));
                break;
            case GroupKind::circle:
            case GroupKind::so3:
                if (domain_.group.kind == GroupKind::so3 && n < 0)
                    throw std::invalid_argument("PowerSpectrum: degree must be >= 0");
                band_ = std::max(band_, std::abs(n));
                break;
        }
    }
}

double PowerSpectrum::alpha(int label) const {
    auto it = alphas_.find(label);
    return it == alphas_.end() ? 0.0 : it->second;
}

double PowerSpectrum::total_variance() const {
    double v = 0.0;
    for (const auto& [n, a] : alphas_) v += IrrepLabel{domain_.group, n}.dimension() * a;
    return v;
}

bool PowerSpectrum::conjugate_symmetric(double tol) const {
    for (const auto& [n, a] : alphas_) {
        const IrrepLabel conj = IrrepLabel{domain_.group, n}.conjugate();
        if (std::fabs(alpha(conj.n) - a) > tol) return false;
    }
    return true;
}

std::vector<IrrepLabel> PowerSpectrum::labels() const {
    std::vector<IrrepLabel> out;
    for (const auto& lab : labels_up_to_band(domain_.group, band_)) {
        if (alphas_.count(lab.n)) out.push_back(lab);
    }
    return out;
}

namespace {

/// Mirror-aware label weight: families key off |n| on the circle and off
/// min(n, N-n) on cyclic groups, keeping spectra conjugate-symmetric.
int family_key(const DomainSpec& d, int n) {
    switch (d.group.kind) {
        case GroupKind::cyclic: return std::min(n, d.group.order - n);
        case GroupKind::circle: return std::abs(n);
        case GroupKind::so3: return n;
    }
    return n;
}

PowerSpectrum from_family(const DomainSpec& d, int band,
                          const std::function<double(int)>& f) {
    std::map<int, double> a;
    for (const auto& lab : labels_up_to_band(d.group, band)) a[lab.n] = f(family_key(d, lab.n));
    return PowerSpectrum(d, std::move(a));
}

}  // namespace

PowerSpectrum PowerSpectrum::geometric(const DomainSpec& d, int band, double ratio) {
    if (ratio < 0.0) throw std::invalid_argument("PowerSpectrum::geometric: ratio >= 0");
    return from_family(d, band, [&](int k) { return std::pow(ratio, k); });
}

PowerSpectrum PowerSpectrum::delta(const DomainSpec& d, int label0) {
    std::map<int, double> a;
    a[label0] = 1.0;
    const IrrepLabel conj = IrrepLabel{d.group, label0}.conjugate();
    a[conj.n] = 1.0;
    return PowerSpectrum(d, std::move(a));
}

PowerSpectrum PowerSpectrum::polynomial(const DomainSpec& d, int band, double power) {
    return from_family(d, band, [&](int k) { return std::pow(1.0 + k, -power); });
}

Complex covariance_from_spectrum(const PowerSpectrum& spec, const GroupElement& g) {
    if (spec.domain().group != g.group())
        throw std::invalid_argument("covariance_from_spectrum: domain mismatch");
    Complex r(0.0, 0.0);
    for (const auto& [n, a] : spec.alphas()) {
        if (a == 0.0) continue;
        r += a * character(IrrepLabel{spec.domain().group, n}, g);
    }
    return r;
}

double sphere_covariance_angle(const PowerSpectrum& spec, double t) {
    if (!spec.domain().on_sphere)
        throw std::invalid_argument("sphere_covariance_angle: sphere-domain spectrum required");
    const double c = std::cos(t);
    double r = 0.0;
    for (const auto& [ell, a] : spec.alphas()) {
        if (a == 0.0) continue;
        r += (2.0 * ell + 1.0) * a * legendre_p(ell, c);
    }
    return r;
}

double sphere_covariance(const PowerSpectrum& spec, const SpherePoint& x, const SpherePoint& y) {
    return sphere_covariance_angle(spec, sphere_distance(x, y));
}

}  // namespace isofield
