// Acceptance gate: runs every criterion at its stated tolerance and prints
// one [PASS]/[FAIL] line per criterion. Exits nonzero if any fails.
//
// Usage: acceptance [--cli <path-to-isofield-binary>]
// (criterion 10 drives the CLI; it fails if the path is not supplied)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "isofield/analysis.hpp"

using namespace isofield;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    if (!pass) ++g_failures;
    std::fflush(stdout);
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

FieldCoefficients random_band_limited(const DomainSpec& d, int band, std::uint64_t seed) {
    Rng rng(seed);
    auto c = FieldCoefficients::zero(d, labels_up_to_band(d.group, band));
    for (auto& [n, block] : c.blocks)
        for (int i = 0; i < block.rows(); ++i)
            for (int j = 0; j < block.cols(); ++j)
                block(i, j) = Complex(rng.uniform_symmetric(), rng.uniform_symmetric());
    return c;
}

GroupElement random_rotation(Rng& rng) {
    return GroupElement::rotation(kTwoPi * rng.uniform(),
                                  std::acos(rng.uniform_symmetric()),
                                  kTwoPi * rng.uniform());
}

// 1. Schur + character orthonormality on SO(3), B = 8, within 1e-8, under 30 s.
void criterion_1() {
    const double t0 = now_seconds();
    const int band = 8;
    const auto rule = haar_quadrature(Group::so3(), band);
    const auto labels = labels_up_to_band(Group::so3(), band);
    TransformPlan plan(rule, labels);

    Eigen::MatrixXcd scaled = plan.basis();
    int col = 0;
    for (const auto& lab : labels) {
        const double s = std::sqrt(double(lab.dimension()));
        for (int k = 0; k < lab.dimension() * lab.dimension(); ++k) scaled.col(col++) *= s;
    }
    for (Eigen::Index r = 0; r < scaled.rows(); ++r)
        scaled.row(r) *= std::sqrt(rule.weights[r]);
    const Eigen::MatrixXcd gram = scaled.adjoint() * scaled;
    const double schur_err =
        (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();

    double char_err = 0.0;
    for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = a; b < labels.size(); ++b) {
            Complex acc(0, 0);
            for (std::size_t k = 0; k < rule.size(); ++k)
                acc += rule.weights[k] * character(labels[a], rule.group_nodes[k]) *
                       std::conj(character(labels[b], rule.group_nodes[k]));
            char_err = std::max(char_err, std::abs(acc - Complex(a == b ? 1.0 : 0.0, 0.0)));
        }

    const double elapsed = now_seconds() - t0;
    const bool pass = schur_err < 1e-8 && char_err < 1e-8 && elapsed < 30.0;
    report(1, pass,
           "Schur/character orthonormality, SO(3) B=8: max|<.,.> - delta| = " + fmt(schur_err) +
               " / " + fmt(char_err) + " (tol 1e-8), " + fmt(elapsed) + " s (< 30 s)");
}

// 2. analyze(evaluate) round trip on Z_12, U(1) B=16, SO(3) B=8.
void criterion_2() {
    double coeff_err = 0.0, parseval_err = 0.0;
    struct Case {
        DomainSpec d;
        int band;
        std::uint64_t seed;
    };
    const std::vector<Case> cases = {{DomainSpec::cyclic(12), 11, 11},
                                     {DomainSpec::circle(), 16, 12},
                                     {DomainSpec::so3(), 8, 13}};
    for (const auto& [d, band, seed] : cases) {
        const auto rule = haar_quadrature(d.group, band);
        const auto labels = labels_up_to_band(d.group, band);
        const auto c = random_band_limited(d, band, seed);
        TransformPlan plan(rule, labels);
        const Eigen::VectorXcd values = plan.synthesize(c);
        const auto res = analyze(values, rule, labels);
        for (const auto& [n, block] : c.blocks)
            coeff_err =
                std::max(coeff_err, (res.coeffs.blocks.at(n) - block).cwiseAbs().maxCoeff());
        parseval_err = std::max(
            parseval_err, std::fabs(quadrature_norm2(values, rule) - c.parseval_norm2()));
    }
    const bool pass = coeff_err < 1e-9 && parseval_err < 1e-8;
    report(2, pass,
           "Peter-Weyl round trip Z_12 / U(1) B=16 / SO(3) B=8: coeff err " + fmt(coeff_err) +
               " (tol 1e-9), Parseval " + fmt(parseval_err) + " (tol 1e-8)");
}

// 3. Projection laws: idempotence, annihilation, convolution = analyze-synthesize.
void criterion_3() {
    double idem = 0.0, annih = 0.0, routes = 0.0;
    struct Case {
        DomainSpec d;
        int band;
        std::uint64_t seed;
    };
    const std::vector<Case> cases = {{DomainSpec::cyclic(12), 11, 21},
                                     {DomainSpec::circle(), 8, 22},
                                     {DomainSpec::so3(), 4, 23}};
    for (const auto& [d, band, seed] : cases) {
        const auto rule = haar_quadrature(d.group, band);
        const auto labels = labels_up_to_band(d.group, band);
        const auto c = random_band_limited(d, band, seed);
        TransformPlan plan(rule, labels);
        const Eigen::VectorXcd values = plan.synthesize(c);
        for (const auto& lab : labels) {
            const auto comp = project(values, rule, lab);
            idem = std::max(idem, (project(comp, rule, lab) - comp).cwiseAbs().maxCoeff());
            routes = std::max(
                routes, (project_convolution(values, rule, lab) - comp).cwiseAbs().maxCoeff());
            const auto& other = lab == labels.front() ? labels.back() : labels.front();
            annih = std::max(annih, project(comp, rule, other).cwiseAbs().maxCoeff());
        }
    }
    const bool pass = idem < 1e-9 && annih < 1e-9 && routes < 1e-9;
    report(3, pass,
           "projection laws: idempotence " + fmt(idem) + ", cross-label " + fmt(annih) +
               ", convolution vs synthesis " + fmt(routes) + " (tol 1e-9 each)");
}

// 4. Variance identity + sampler isotropy, geometric 0.5 up to l = 6, 1e4 replicates.
void criterion_4() {
    const auto spec = PowerSpectrum::geometric(DomainSpec::so3(), 6, 0.5);
    MonteCarloOptions opt{10000, 0xA11CE, 4, 4.0, RealStructure::complex_field};

    const std::size_t n = opt.replicates;
    std::vector<double> sq(n);
    const GroupElement e = identity(Group::so3());
    const auto labels = spec.labels();
    std::vector<Eigen::MatrixXcd> De;
    for (const auto& lab : labels) De.push_back(irrep_matrix(lab, e));
    run_replicates(n, opt.workers, [&](std::size_t r) {
        const auto s = sample_gaussian(spec, opt.seed, r, opt.structure);
        Complex t(0, 0);
        for (std::size_t li = 0; li < labels.size(); ++li)
            t += double(labels[li].dimension()) *
                 s.coeffs.blocks.at(labels[li].n).cwiseProduct(De[li]).sum();
        sq[r] = std::norm(t);
    });
    const auto var_check = mean_against("var", sq, spec.total_variance(), 3.0);

    Rng rng(0xBEE);
    std::vector<GroupElement> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(random_rotation(rng));
    const auto iso = isotropy_covariance_test(spec, random_rotation(rng), pts, opt);
    double max_z = 0;
    for (const auto& entry : iso.entries)
        max_z = std::max({max_z, std::fabs(entry.real_part.z), std::fabs(entry.imag_part.z)});

    const bool pass = var_check.pass && iso.pass;
    report(4, pass,
           "variance identity |z| = " + fmt(std::fabs(var_check.z)) +
               " (3 SE), sampler isotropy on 5 points max|z| = " + fmt(max_z) + " (< 4)");
}

// 5. Uncorrelated components for all label pairs up to l = 4, 1e4 replicates.
void criterion_5() {
    const auto spec = PowerSpectrum::geometric(DomainSpec::so3(), 4, 0.5);
    MonteCarloOptions opt{10000, 0x5EED5, 4, 4.0, RealStructure::complex_field};
    Rng rng(0xCAB);
    const auto g = random_rotation(rng);
    const auto h = random_rotation(rng);
    double max_z = 0;
    bool pass = true;
    for (int l1 = 0; l1 <= 4; ++l1)
        for (int l2 = l1 + 1; l2 <= 4; ++l2) {
            const auto rep =
                uncorrelatedness_test(spec, {Group::so3(), l1}, {Group::so3(), l2}, g, h, opt);
            pass = pass && rep.pass;
            for (const auto& c : rep.checks) max_z = std::max(max_z, std::fabs(c.z));
        }
    report(5, pass,
           "uncorrelated components, all l != l' <= 4 (10 pairs): max|z| = " + fmt(max_z) +
               " (< 4)");
}

// 6. Partial-sum convergence: fixed-point and integrated residuals vs analytic
//    tails, and their mutual consistency.
void criterion_6() {
    std::map<int, double> a;
    for (int l = 0; l <= 4; ++l) a[l] = std::pow(2.0, -l);
    const PowerSpectrum spec(DomainSpec::so3(), a);
    MonteCarloOptions opt{10000, 0xC0FFEE, 4, 3.0, RealStructure::complex_field};
    Rng rng(0xDAD);
    const auto curve = convergence_curve(spec, {0, 1, 2, 3, 4, 5}, random_rotation(rng), opt);
    bool pass = true;
    double max_z = 0;
    for (const auto& pt : curve) {
        pass = pass && pt.fixed_point.pass && pt.integrated.pass && pt.consistency.pass;
        max_z = std::max({max_z, std::fabs(pt.fixed_point.z), std::fabs(pt.integrated.z),
                          std::fabs(pt.consistency.z)});
    }
    report(6, pass,
           "L2 convergence over 6 prefixes: fixed-point, integrated and paired residuals all "
           "within 3 SE (max|z| = " +
               fmt(max_z) + ")");
}

// 7. Modulus of continuity: exact values for the delta-spectrum, monotonicity,
//    decay ratio, and sphere-vs-lift agreement.
void criterion_7() {
    const PowerSpectrum d1(DomainSpec::so3(), {{1, 1.0}});
    const std::vector<double> deltas{0.01, 0.1, 0.5};
    const auto curve = continuity_modulus(d1, deltas, default_modulus_grid(Group::so3(), 256));
    double value_err = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i)
        value_err =
            std::max(value_err, std::fabs(curve.modulus[i] - 4.0 * (1.0 - std::cos(deltas[i]))));
    const bool monotone = curve.modulus[0] <= curve.modulus[1] + 1e-15 &&
                          curve.modulus[1] <= curve.modulus[2] + 1e-15;
    const double ratio = curve.modulus[0] / curve.modulus[2];

    const PowerSpectrum sd(DomainSpec::sphere(), {{1, 1.0}});
    const auto sph = sphere_modulus(sd, deltas);
    const auto lift = sphere_modulus_via_lift(sd, deltas);
    const auto gen = PowerSpectrum::geometric(DomainSpec::sphere(), 5, 0.5);
    const auto sph2 = sphere_modulus(gen, deltas);
    const auto lift2 = sphere_modulus_via_lift(gen, deltas);
    double lift_err = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        lift_err = std::max(lift_err, std::fabs(sph.modulus[i] - lift.modulus[i]));
        lift_err = std::max(lift_err, std::fabs(sph2.modulus[i] - lift2.modulus[i]));
    }

    const bool pass = value_err < 1e-9 && monotone && ratio < 1e-2 && lift_err < 1e-9;
    report(7, pass,
           "modulus: |m - 4(1-cos d)| = " + fmt(value_err) +
               " (tol 1e-9), nondecreasing, m(0.01)/m(0.5) = " + fmt(ratio) +
               " (< 1e-2), sphere-vs-lift " + fmt(lift_err) + " (tol 1e-9)");
}

// 8. The Lemma: T(f) and T^h(f) share mixed moments up to order 4.
void criterion_8() {
    std::map<int, double> a;
    for (int l = 0; l <= 4; ++l) a[l] = std::pow(2.0, -l);
    const PowerSpectrum spec(DomainSpec::so3(), a);
    MonteCarloOptions opt{10000, 0xFACADE, 4, 4.0, RealStructure::complex_field};

    std::vector<FieldCoefficients> fs;
    auto chi = FieldCoefficients::zero(DomainSpec::so3(), {{Group::so3(), 1}});
    chi.blocks[1] = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
    fs.push_back(chi);
    fs.push_back(random_band_limited(DomainSpec::so3(), 2, 0xF00D));

    Rng rng(0xE44);
    const auto rep = isotropy_functional_test(spec, random_rotation(rng), fs, opt);
    double max_z = 0;
    for (const auto& c : rep.checks) max_z = std::max(max_z, std::fabs(c.z));
    report(8, rep.pass,
           "integrated functionals, f = chi_1 and random band-limited f, moments to order 4: "
           "max|z| = " +
               fmt(max_z) + " (< 4)");
}

// 9. Nugget non-realizability and the constant positive control.
void criterion_9() {
    bool pass = true;
    std::string detail;
    for (const auto& d : {DomainSpec::so3(), DomainSpec::sphere()}) {
        const auto v = nugget_analysis(1.0, 0.0, d, 8);
        double max_alpha = 0;
        for (const auto& [n, al] : v.recovered)
            if (n != 0) max_alpha = std::max(max_alpha, std::fabs(al));
        const bool ok = !v.realizable && std::fabs(v.defect - 1.0) < 1e-12 &&
                        max_alpha < 1e-12 && std::fabs(v.recovered.at(0)) < 1e-12;
        pass = pass && ok;
        if (d.on_sphere) detail = "max nontrivial |alpha| = " + fmt(max_alpha);

        const auto ctrl = nugget_analysis(0.7, 0.7, d, 8);
        pass = pass && ctrl.realizable && std::fabs(ctrl.defect) < 1e-12;
    }
    report(9, pass,
           "nugget (1,0): defect = 1, realizable = false, " + detail +
               " (tol 1e-12); control (c,c) realizable = true");
}

// 10. CLI determinism: byte-identical verify reports, worker-count invariance.
void criterion_10(const std::string& cli) {
    if (cli.empty()) {
        report(10, false, "determinism: no --cli <path> supplied, cannot drive the binary");
        return;
    }
    const fs::path dir = fs::temp_directory_path() / "isofield_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"group": "so3", "band": 4,
                   "spectrum": {"source": "named", "family": "geometric", "parameter": 0.5},
                   "replicates": 2000, "seed": 97531, "workers": 1,
                   "out_dir": ")" << (dir / "out1").string() << R"("})";
    }
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string base = "verify --config " + (dir / "cfg.json").string();
    bool pass = run(base) == 0;
    pass = pass && run(base + " --out " + (dir / "out2").string()) == 0;
    pass = pass && run(base + " --out " + (dir / "out8").string() + " --workers 8") == 0;
    const std::string r1 = slurp(dir / "out1" / "verify_report.json");
    const std::string r2 = slurp(dir / "out2" / "verify_report.json");
    std::string r8 = slurp(dir / "out8" / "verify_report.json");
    const bool identical = !r1.empty() && r1 == r2;
    // workers differ only in the config echo inside the report? they don't:
    // the report carries no worker count, so bytes must match too
    const bool worker_invariant = r1 == r8;
    pass = pass && identical && worker_invariant;
    fs::remove_all(dir);
    report(10, pass,
           std::string("cmd_verify determinism: rerun byte-identical = ") +
               (identical ? "yes" : "no") + ", 1 vs 8 workers identical = " +
               (worker_invariant ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--cli" && i + 1 < argc) cli = argv[++i];
    }

    const double t0 = now_seconds();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(cli);
    std::printf("acceptance total: %.1f s, %d failure(s)\n", now_seconds() - t0, g_failures);
    return g_failures == 0 ? 0 : 1;
}
