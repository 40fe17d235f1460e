#pragma once

#include <map>
#include <string>

#include "isofield/irreps.hpp"

namespace isofield {

/// Where a field lives: a group, or S^2 carried by SO(3).
struct DomainSpec {
    Group group;
    bool on_sphere = false;  // only with GroupKind::so3

    static DomainSpec cyclic(int n) { return {Group::cyclic(n), false}; }
    static DomainSpec circle() { return {Group::circle(), false}; }
    static DomainSpec so3() { return {Group::so3(), false}; }
    static DomainSpec sphere() { return {Group::so3(), true}; }

    std::string name() const;
    static DomainSpec parse(const std::string& name, int cyclic_order);

    friend bool operator==(const DomainSpec& a, const DomainSpec& b) {
        return a.group == b.group && a.on_sphere == b.on_sphere;
    }
    friend bool operator!=(const DomainSpec& a, const DomainSpec& b) { return !(a == b); }
};

/// Nonnegative spectral weights alpha_pi defining the isotropic covariance
/// R(g) = sum_pi alpha_pi chi_pi(g); total variance sum_pi d_pi alpha_pi.
class PowerSpectrum {
  public:
    PowerSpectrum(DomainSpec domain, std::map<int, double> alphas);

    const DomainSpec& domain() const { return domain_; }
    const std::map<int, double>& alphas() const { return alphas_; }
    double alpha(int label) const;
    int band() const { return band_; }

    double total_variance() const;
    bool conjugate_symmetric(double tol = 0.0) const;

    /// Labels carried by the spectrum (including explicit zeros), enumeration order.
    std::vector<IrrepLabel> labels() const;

    // Built-in families so experiment configs need no external data.
    static PowerSpectrum geometric(const DomainSpec& d, int band, double ratio);
    static PowerSpectrum delta(const DomainSpec& d, int label0);
    static PowerSpectrum polynomial(const DomainSpec& d, int band, double power);

  private:
    DomainSpec domain_;
    std::map<int, double> alphas_;
    int band_ = 0;
};

/// R(g) = sum alpha_pi chi_pi(g). Central; real for conjugate-symmetric spectra.
Complex covariance_from_spectrum(const PowerSpectrum& spec, const GroupElement& g);

/// Reduced sphere covariance at great-circle distance t:
/// R~(t) = sum_l (2l+1) alpha_l P_l(cos t).
double sphere_covariance_angle(const PowerSpectrum& spec, double t);

/// Gamma(x, y) = R~(d(x,y)) for sphere-domain spectra.
double sphere_covariance(const PowerSpectrum& spec, const SpherePoint& x, const SpherePoint& y);

}  // namespace isofield
