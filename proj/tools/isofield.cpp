// isofield: configuration-driven experiment runner around the harmonic
// analysis core. Subcommands: simulate | verify | modulus | nugget | transform.
// Exit codes: 0 pass, 1 test failure, 2 config error, 3 numerical-validity error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "isofield/analysis.hpp"

using json = nlohmann::ordered_json;
using namespace isofield;
namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

constexpr int kExitPass = 0;
constexpr int kExitTestFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct ExperimentConfig {
    DomainSpec domain = DomainSpec::so3();
    int band = 6;
    std::string spectrum_source = "named";  // named | file
    std::string family = "geometric";
    double family_parameter = 0.5;
    std::string spectrum_path;
    std::size_t replicates = 10000;
    std::uint64_t seed = 20260809;
    int workers = 1;
    bool real_field = false;
    std::vector<double> deltas{0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
    double variance_at_zero = 1.0;
    double off_diagonal = 0.0;
    std::string coefficients_path;
    std::string suite = "all";
    std::string out_dir = "out";

    json snapshot;  // verbatim config document for the manifest
};

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    cfg.snapshot = doc;
    try {
        if (doc.value("schema_version", kSchemaVersion) != kSchemaVersion)
            throw ConfigError("unsupported schema_version");
        const std::string group = doc.at("group").get<std::string>();
        cfg.domain = DomainSpec::parse(group, doc.value("cyclic_order", 0));
        cfg.band = doc.value("band", cfg.band);
        if (doc.contains("spectrum")) {
            const auto& s = doc["spectrum"];
            cfg.spectrum_source = s.value("source", "named");
            cfg.family = s.value("family", cfg.family);
            cfg.family_parameter = s.value("parameter", cfg.family_parameter);
            cfg.spectrum_path = s.value("path", "");
        }
        cfg.replicates = doc.value("replicates", cfg.replicates);
        cfg.seed = doc.value("seed", cfg.seed);
        cfg.workers = doc.value("workers", cfg.workers);
        cfg.real_field = doc.value("real_field", cfg.real_field);
        if (doc.contains("deltas")) cfg.deltas = doc["deltas"].get<std::vector<double>>();
        cfg.variance_at_zero = doc.value("variance_at_zero", cfg.variance_at_zero);
        cfg.off_diagonal = doc.value("off_diagonal", cfg.off_diagonal);
        cfg.coefficients_path = doc.value("coefficients_path", "");
        cfg.suite = doc.value("suite", cfg.suite);
        cfg.out_dir = doc.value("out_dir", cfg.out_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    if (cfg.band < 1) throw ConfigError("band must be >= 1");
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    return cfg;
}

PowerSpectrum spectrum_from_file(const ExperimentConfig& cfg) {
    std::ifstream in(cfg.spectrum_path);
    if (!in) throw ConfigError("cannot open spectrum file: " + cfg.spectrum_path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("spectrum file is not valid JSON: ") + e.what());
    }
    try {
        const std::string group = doc.at("group").get<std::string>();
        const DomainSpec d = DomainSpec::parse(group, doc.value("N", 0));
        if (d != cfg.domain) throw ConfigError("spectrum file domain differs from config");
        std::map<int, double> alphas;
        for (const auto& e : doc.at("entries"))
            alphas[e.at("label").get<int>()] = e.at("alpha").get<double>();
        return PowerSpectrum(d, std::move(alphas));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad spectrum file: ") + e.what());
    }
}

PowerSpectrum build_spectrum(const ExperimentConfig& cfg) {
    if (cfg.spectrum_source == "file") return spectrum_from_file(cfg);
    if (cfg.spectrum_source != "named")
        throw ConfigError("spectrum.source must be 'named' or 'file'");
    if (cfg.family == "geometric")
        return PowerSpectrum::geometric(cfg.domain, cfg.band, cfg.family_parameter);
    if (cfg.family == "delta")
        return PowerSpectrum::delta(cfg.domain, static_cast<int>(cfg.family_parameter));
    if (cfg.family == "polynomial")
        return PowerSpectrum::polynomial(cfg.domain, cfg.band, cfg.family_parameter);
    throw ConfigError("unknown spectrum family: " + cfg.family);
}

/// Collects output files, digests them for the manifest, writes last.
class OutputSink {
  public:
    explicit OutputSink(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << content;
        files_.push_back({name, fnv1a_hex(content)});
    }

    void write_json(const std::string& name, const json& doc) { write(name, doc.dump(2) + "\n"); }

    void finalize_manifest(const std::string& command, const ExperimentConfig& cfg,
                           const json& results, double wall_seconds) {
        json manifest;
        manifest["schema_version"] = kSchemaVersion;
        manifest["tool_version"] = kToolVersion;
        manifest["command"] = command;
        manifest["wall_clock_sec"] = wall_seconds;
        manifest["config"] = cfg.snapshot;
        manifest["results"] = results;
        json files = json::array();
        for (const auto& [name, digest] : files_)
            files.push_back({{"path", name}, {"digest", digest}});
        manifest["files"] = files;
        write_json("manifest.json", manifest);
    }

  private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

json check_to_json(const ZCheck& c, std::uint64_t seed, std::size_t replicates,
                   const std::string& detail = "") {
    json j;
    j["test"] = c.name;
    j["statistic"] = c.statistic;
    j["se"] = c.se;
    j["z"] = c.z;
    j["pass"] = c.pass;
    j["seed"] = seed;
    j["replicates"] = replicates;
    if (!detail.empty()) j["detail"] = detail;
    return j;
}

json deterministic_check(const std::string& name, double statistic, bool pass,
                         const std::string& detail = "") {
    json j;
    j["test"] = name;
    j["statistic"] = statistic;
    j["se"] = 0.0;
    j["z"] = 0.0;
    j["pass"] = pass;
    j["seed"] = 0;
    j["replicates"] = 0;
    if (!detail.empty()) j["detail"] = detail;
    return j;
}

QuadratureRule domain_rule(const DomainSpec& d, int band) {
    return d.on_sphere ? sphere_quadrature(band) : haar_quadrature(d.group, band);
}

std::vector<GroupElement> probe_points(const Group& g, int count, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0xABCD));
    std::vector<GroupElement> pts{identity(g)};
    while (static_cast<int>(pts.size()) < count) {
        switch (g.kind) {
            case GroupKind::cyclic:
                pts.push_back(GroupElement::cyclic(
                    g.order, static_cast<long long>(rng.uniform() * g.order)));
                break;
            case GroupKind::circle:
                pts.push_back(GroupElement::circle(kTwoPi * rng.uniform()));
                break;
            case GroupKind::so3:
                pts.push_back(GroupElement::rotation(kTwoPi * rng.uniform(),
                                                     std::acos(rng.uniform_symmetric()),
                                                     kTwoPi * rng.uniform()));
                break;
        }
    }
    return pts;
}

std::vector<SpherePoint> sphere_probe_points(int count, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0xABCE));
    std::vector<SpherePoint> pts{SpherePoint::north_pole()};
    while (static_cast<int>(pts.size()) < count)
        pts.emplace_back(std::acos(rng.uniform_symmetric()), kTwoPi * rng.uniform());
    return pts;
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

json coefficients_to_json(const FieldCoefficients& c, int cyclic_order) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["group"] = c.domain.name();
    if (c.domain.group.kind == GroupKind::cyclic) doc["N"] = cyclic_order;
    doc["band"] = c.band();
    json entries = json::array();
    for (const auto& [n, block] : c.blocks) {
        json re = json::array(), im = json::array();
        for (int i = 0; i < block.rows(); ++i) {
            json rrow = json::array(), irow = json::array();
            for (int j = 0; j < block.cols(); ++j) {
                rrow.push_back(block(i, j).real());
                irow.push_back(block(i, j).imag());
            }
            re.push_back(rrow);
            im.push_back(irow);
        }
        entries.push_back({{"label", n}, {"re", re}, {"im", im}});
    }
    doc["entries"] = entries;
    return doc;
}

FieldCoefficients coefficients_from_json(const json& doc) {
    const DomainSpec d = DomainSpec::parse(doc.at("group").get<std::string>(), doc.value("N", 0));
    FieldCoefficients c;
    c.domain = d;
    for (const auto& e : doc.at("entries")) {
        const int n = e.at("label").get<int>();
        const auto& re = e.at("re");
        const auto& im = e.at("im");
        const int rows = re.size();
        const int cols = rows > 0 ? static_cast<int>(re[0].size()) : 0;
        Eigen::MatrixXcd block(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                block(i, j) = Complex(re[i][j].get<double>(), im[i][j].get<double>());
        c.blocks[n] = block;
    }
    c.validate();
    return c;
}

void require_band_covers_spectrum(const ExperimentConfig& cfg, const PowerSpectrum& spec) {
    if (cfg.band < spec.band())
        throw NumericalError("aliasing: config band " + std::to_string(cfg.band) +
                             " below spectrum band " + std::to_string(spec.band()));
}

void require_statistical_replicates(const ExperimentConfig& cfg) {
    if (cfg.replicates < 100)
        throw ConfigError("statistical suites need replicates >= 100");
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    require_statistical_replicates(cfg);
    const PowerSpectrum spec = build_spectrum(cfg);
    require_band_covers_spectrum(cfg, spec);

    OutputSink sink(cfg.out_dir);
    const RealStructure rs =
        cfg.real_field ? RealStructure::real_field : RealStructure::complex_field;
    const std::size_t n = cfg.replicates;

    std::vector<Complex> at_probe0(n);
    std::vector<double> mass(n);
    std::vector<std::vector<Complex>> at_probe;

    std::string covariance_csv =
        "point,distance,analytic_re,analytic_im,empirical_re,empirical_im,se_re,se_im,z_re,z_im\n";

    if (!cfg.domain.on_sphere) {
        const auto points = probe_points(cfg.domain.group, 5, cfg.seed);
        const auto labels = spec.labels();
        TransformPlan plan(cfg.domain, points, labels);
        at_probe.assign(points.size(), std::vector<Complex>(n));
        run_replicates(n, cfg.workers, [&](std::size_t r) {
            const auto s = sample_gaussian(spec, cfg.seed, r, rs);
            const Eigen::VectorXcd vals = plan.basis() * plan.flatten(s.coeffs, true);
            for (std::size_t p = 0; p < points.size(); ++p) at_probe[p][r] = vals(p);
            at_probe0[r] = vals(0);
            mass[r] = s.coeffs.parseval_norm2();
        });
        for (std::size_t p = 0; p < points.size(); ++p) {
            const Complex analytic =
                covariance_from_spectrum(spec, mul(points[p], inv(points[0])));
            std::vector<double> re(n), im(n);
            for (std::size_t r = 0; r < n; ++r) {
                const Complex prod = at_probe[p][r] * std::conj(at_probe0[r]);
                re[r] = prod.real();
                im[r] = prod.imag();
            }
            const auto cr = mean_against("re", re, analytic.real(), 3.0);
            const auto ci = mean_against("im", im, analytic.imag(), 3.0);
            covariance_csv += std::to_string(p) + "," +
                              format_double(metric(points[p], points[0])) + "," +
                              format_double(analytic.real()) + "," +
                              format_double(analytic.imag()) + "," +
                              format_double(cr.statistic) + "," + format_double(ci.statistic) +
                              "," + format_double(cr.se) + "," + format_double(ci.se) + "," +
                              format_double(cr.z) + "," + format_double(ci.z) + "\n";
        }
    } else {
        const auto points = sphere_probe_points(5, cfg.seed);
        at_probe.assign(points.size(), std::vector<Complex>(n));
        run_replicates(n, cfg.workers, [&](std::size_t r) {
            const auto s = sample_gaussian(spec, cfg.seed, r, rs);
            for (std::size_t p = 0; p < points.size(); ++p)
                at_probe[p][r] = evaluate_on_sphere(s, points[p]);
            at_probe0[r] = at_probe[0][r];
            mass[r] = s.coeffs.parseval_norm2();
        });
        for (std::size_t p = 0; p < points.size(); ++p) {
            const double analytic = sphere_covariance(spec, points[p], points[0]);
            std::vector<double> re(n), im(n);
            for (std::size_t r = 0; r < n; ++r) {
                const Complex prod = at_probe[p][r] * std::conj(at_probe0[r]);
                re[r] = prod.real();
                im[r] = prod.imag();
            }
            const auto cr = mean_against("re", re, analytic, 3.0);
            const auto ci = mean_against("im", im, 0.0, 3.0);
            covariance_csv += std::to_string(p) + "," +
                              format_double(sphere_distance(points[p], points[0])) + "," +
                              format_double(analytic) + ",0," + format_double(cr.statistic) +
                              "," + format_double(ci.statistic) + "," + format_double(cr.se) +
                              "," + format_double(ci.se) + "," + format_double(cr.z) + "," +
                              format_double(ci.z) + "\n";
        }
    }

    std::string rep_csv = "replicate,t0_re,t0_im,parseval_mass\n";
    for (std::size_t r = 0; r < n; ++r)
        rep_csv += std::to_string(r) + "," + format_double(at_probe0[r].real()) + "," +
                   format_double(at_probe0[r].imag()) + "," + format_double(mass[r]) + "\n";

    sink.write("covariance.csv", covariance_csv);
    sink.write("replicates.csv", rep_csv);

    json results = json::array();
    results.push_back({{"test", "simulate"}, {"pass", true}});
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.finalize_manifest("simulate", cfg, results, wall);
    return kExitPass;
}

// ---------------------------------------------------------------------------
// verify

json suite_orthonormality(const ExperimentConfig& cfg, bool& all_pass) {
    json checks = json::array();
    const auto rule = domain_rule(cfg.domain, cfg.band);
    const auto labels = labels_up_to_band(cfg.domain.group, cfg.band);
    TransformPlan plan(rule, labels);

    // Gram of the scaled basis functions under the rule
    Eigen::MatrixXcd scaled = plan.basis();
    if (!cfg.domain.on_sphere) {
        int col = 0;
        for (const auto& lab : labels) {
            const double s = std::sqrt(double(lab.dimension()));
            for (int k = 0; k < lab.dimension() * lab.dimension(); ++k) scaled.col(col++) *= s;
        }
    }
    for (Eigen::Index r = 0; r < scaled.rows(); ++r)
        scaled.row(r) *= std::sqrt(rule.weights[r]);
    const Eigen::MatrixXcd gram = scaled.adjoint() * scaled;
    const double err =
        (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    const bool pass = err < 1e-8;
    all_pass = all_pass && pass;
    checks.push_back(deterministic_check("orthonormality.gram", err, pass));

    if (!cfg.domain.on_sphere) {
        double cerr = 0.0;
        for (std::size_t a = 0; a < labels.size(); ++a)
            for (std::size_t b = a; b < labels.size(); ++b) {
                Complex acc(0, 0);
                for (std::size_t k = 0; k < rule.size(); ++k)
                    acc += rule.weights[k] * character(labels[a], rule.group_nodes[k]) *
                           std::conj(character(labels[b], rule.group_nodes[k]));
                cerr = std::max(cerr, std::abs(acc - Complex(a == b ? 1.0 : 0.0, 0.0)));
            }
        const bool cpass = cerr < 1e-8;
        all_pass = all_pass && cpass;
        checks.push_back(deterministic_check("orthonormality.characters", cerr, cpass));
    }
    return checks;
}

json suite_roundtrip(const ExperimentConfig& cfg, const PowerSpectrum& spec, bool& all_pass) {
    json checks = json::array();
    const int field_band = spec.band();
    const auto rule = domain_rule(cfg.domain, cfg.band);
    const auto labels = labels_up_to_band(cfg.domain.group, field_band);
    const auto c = random_band_limited(cfg.domain, field_band, derive_seed(cfg.seed, 0xF1E1D));

    TransformPlan plan(rule, labels);
    const Eigen::VectorXcd values = plan.synthesize(c);
    const auto res = analyze(values, rule, labels, field_band);

    if (res.aliased) {
        all_pass = false;
        checks.push_back(deterministic_check("roundtrip.coefficients", -1.0, false, res.note));
        return checks;
    }
    double err = 0;
    for (const auto& [n, block] : c.blocks)
        err = std::max(err, (res.coeffs.blocks.at(n) - block).cwiseAbs().maxCoeff());
    bool pass = err < 1e-9;
    all_pass = all_pass && pass;
    checks.push_back(deterministic_check("roundtrip.coefficients", err, pass));

    const double parseval = std::fabs(quadrature_norm2(values, rule) - c.parseval_norm2());
    pass = parseval < 1e-8;
    all_pass = all_pass && pass;
    checks.push_back(deterministic_check("roundtrip.parseval", parseval, pass));
    return checks;
}

json suite_uncorrelatedness(const ExperimentConfig& cfg, const PowerSpectrum& spec,
                            bool& all_pass) {
    json checks = json::array();
    MonteCarloOptions opt{cfg.replicates, cfg.seed, cfg.workers, 4.0,
                          cfg.real_field ? RealStructure::real_field
                                         : RealStructure::complex_field};

    std::vector<IrrepLabel> active;
    for (const auto& lab : spec.labels())
        if (spec.alpha(lab.n) > 0.0) active.push_back(lab);

    if (!cfg.domain.on_sphere) {
        const auto pts = probe_points(cfg.domain.group, 2, cfg.seed ^ 0x51);
        int tested = 0;
        for (std::size_t a = 0; a < active.size() && tested < 3; ++a)
            for (std::size_t b = a + 1; b < active.size() && tested < 3; ++b, ++tested) {
                auto rep =
                    uncorrelatedness_test(spec, active[a], active[b], pts[0], pts[1], opt);
                for (const auto& ch : rep.checks) {
                    all_pass = all_pass && ch.pass;
                    checks.push_back(check_to_json(
                        {"uncorrelated." + std::to_string(active[a].n) + "v" +
                             std::to_string(active[b].n) + "." + ch.name,
                         ch.statistic, ch.se, ch.z, ch.pass},
                        cfg.seed, cfg.replicates));
                }
            }
        return checks;
    }

    // sphere: per-degree component fields at two points
    const auto pts = sphere_probe_points(2, cfg.seed ^ 0x51);
    const std::size_t n = cfg.replicates;
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < active.size() && pairs.size() < 3; ++a)
        for (std::size_t b = a + 1; b < active.size() && pairs.size() < 3; ++b)
            pairs.push_back({active[a].n, active[b].n});
    for (const auto& [l1, l2] : pairs) {
        std::vector<double> re(n), im(n);
        run_replicates(n, cfg.workers, [&](std::size_t r) {
            const auto s = sample_gaussian(spec, cfg.seed, r, opt.structure);
            Complex t1(0, 0), t2(0, 0);
            for (int m = -l1; m <= l1; ++m)
                t1 += s.coeffs.blocks.at(l1)(m + l1, 0) * sph_harmonic(l1, m, pts[0]);
            for (int m = -l2; m <= l2; ++m)
                t2 += s.coeffs.blocks.at(l2)(m + l2, 0) * sph_harmonic(l2, m, pts[1]);
            const Complex prod = t1 * std::conj(t2);
            re[r] = prod.real();
            im[r] = prod.imag();
        });
        auto cr = mean_against(
            "uncorrelated." + std::to_string(l1) + "v" + std::to_string(l2) + ".cov_re", re, 0.0,
            4.0);
        auto ci = mean_against(
            "uncorrelated." + std::to_string(l1) + "v" + std::to_string(l2) + ".cov_im", im, 0.0,
            4.0);
        all_pass = all_pass && cr.pass && ci.pass;
        checks.push_back(check_to_json(cr, cfg.seed, cfg.replicates));
        checks.push_back(check_to_json(ci, cfg.seed, cfg.replicates));
    }
    return checks;
}

json suite_convergence(const ExperimentConfig& cfg, const PowerSpectrum& spec, bool& all_pass) {
    json checks = json::array();
    MonteCarloOptions opt{cfg.replicates, cfg.seed, cfg.workers, 4.0,
                          cfg.real_field ? RealStructure::real_field
                                         : RealStructure::complex_field};
    const int nlab = static_cast<int>(spec.labels().size());
    std::vector<int> prefixes;
    for (int p = 0; p <= nlab; ++p) prefixes.push_back(p);

    GroupElement g0 = identity(cfg.domain.group);
    if (!cfg.domain.on_sphere) {
        g0 = probe_points(cfg.domain.group, 2, cfg.seed ^ 0x77)[1];
    } else {
        g0 = rotation_to(sphere_probe_points(2, cfg.seed ^ 0x77)[1]);
    }

    const auto curve = convergence_curve(spec, prefixes, g0, opt);
    for (const auto& pt : curve) {
        for (const ZCheck* ch : {&pt.fixed_point, &pt.integrated, &pt.consistency}) {
            all_pass = all_pass && ch->pass;
            checks.push_back(
                check_to_json({"convergence." + ch->name, ch->statistic, ch->se, ch->z, ch->pass},
                              cfg.seed, cfg.replicates,
                              "analytic tail " + format_double(pt.analytic_residual)));
        }
    }
    return checks;
}

json suite_isotropy(const ExperimentConfig& cfg, const PowerSpectrum& spec, bool& all_pass) {
    json checks = json::array();
    MonteCarloOptions opt{cfg.replicates, cfg.seed, cfg.workers, 4.0,
                          cfg.real_field ? RealStructure::real_field
                                         : RealStructure::complex_field};

    if (!cfg.domain.on_sphere) {
        const auto pts = probe_points(cfg.domain.group, 5, cfg.seed ^ 0x99);
        const auto h = probe_points(cfg.domain.group, 2, cfg.seed ^ 0xAA)[1];
        const auto cov = isotropy_covariance_test(spec, h, pts, opt);
        for (const auto& e : cov.entries) {
            for (const ZCheck* ch : {&e.real_part, &e.imag_part}) {
                all_pass = all_pass && ch->pass;
                checks.push_back(check_to_json(
                    {"isotropy." + ch->name, ch->statistic, ch->se, ch->z, ch->pass}, cfg.seed,
                    cfg.replicates));
            }
        }

        // Lemma: integrated functionals, f = chi_1 and one random band-limited f
        std::vector<FieldCoefficients> fs;
        const auto labels = labels_up_to_band(cfg.domain.group, std::min(1, spec.band()));
        const IrrepLabel lab = labels.back();
        auto chi = FieldCoefficients::zero(cfg.domain, {lab});
        chi.blocks[lab.n] = Eigen::MatrixXcd::Identity(lab.dimension(), lab.dimension()) /
                            double(lab.dimension());
        fs.push_back(chi);
        fs.push_back(random_band_limited(cfg.domain, std::min(2, spec.band()),
                                         derive_seed(cfg.seed, 0xF2)));
        const auto rep = isotropy_functional_test(spec, h, fs, opt);
        for (const auto& ch : rep.checks) {
            all_pass = all_pass && ch.pass;
            checks.push_back(
                check_to_json({"lemma." + ch.name, ch.statistic, ch.se, ch.z, ch.pass}, cfg.seed,
                              cfg.replicates));
        }
        return checks;
    }

    // sphere: compare covariances of (T(x_i)) and (T(h x_i)) pairwise
    const auto pts = sphere_probe_points(5, cfg.seed ^ 0x99);
    const auto h = probe_points(Group::so3(), 2, cfg.seed ^ 0xAA)[1];
    const std::size_t n = cfg.replicates;
    const std::size_t k = pts.size();
    std::vector<std::vector<Complex>> base(k, std::vector<Complex>(n));
    std::vector<std::vector<Complex>> moved(k, std::vector<Complex>(n));
    run_replicates(n, cfg.workers, [&](std::size_t r) {
        const auto s = sample_gaussian(spec, cfg.seed, r, opt.structure);
        for (std::size_t p = 0; p < k; ++p) {
            base[p][r] = evaluate_on_sphere(s, pts[p]);
            moved[p][r] = evaluate_on_sphere(s, act(h, pts[p]));
        }
    });
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            std::vector<double> xr(n), yr(n);
            for (std::size_t r = 0; r < n; ++r) {
                xr[r] = (base[i][r] * std::conj(base[j][r])).real();
                yr[r] = (moved[i][r] * std::conj(moved[j][r])).real();
            }
            auto ch = paired_zero(
                "isotropy.cov(" + std::to_string(i) + "," + std::to_string(j) + "):re", xr, yr,
                4.0);
            all_pass = all_pass && ch.pass;
            checks.push_back(check_to_json(ch, cfg.seed, cfg.replicates));
        }
    return checks;
}

int cmd_verify(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    require_statistical_replicates(cfg);
    const PowerSpectrum spec = build_spectrum(cfg);
    OutputSink sink(cfg.out_dir);

    bool all_pass = true;
    json suites = json::object();
    const auto want = [&](const char* name) { return cfg.suite == "all" || cfg.suite == name; };
    if (want("orthonormality")) suites["orthonormality"] = suite_orthonormality(cfg, all_pass);
    if (want("roundtrip")) suites["roundtrip"] = suite_roundtrip(cfg, spec, all_pass);
    if (want("uncorrelatedness"))
        suites["uncorrelatedness"] = suite_uncorrelatedness(cfg, spec, all_pass);
    if (want("convergence")) suites["convergence"] = suite_convergence(cfg, spec, all_pass);
    if (want("isotropy")) suites["isotropy"] = suite_isotropy(cfg, spec, all_pass);
    if (suites.empty()) throw ConfigError("unknown suite: " + cfg.suite);

    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "verify";
    report["seed"] = cfg.seed;
    report["replicates"] = cfg.replicates;
    report["pass"] = all_pass;
    report["suites"] = suites;
    sink.write_json("verify_report.json", report);

    json results = json::array();
    for (const auto& [name, checks] : suites.items()) {
        bool suite_pass = true;
        for (const auto& c : checks) suite_pass = suite_pass && c.at("pass").get<bool>();
        results.push_back({{"test", name}, {"pass", suite_pass}});
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.finalize_manifest("verify", cfg, results, wall);
    return all_pass ? kExitPass : kExitTestFailure;
}

// ---------------------------------------------------------------------------
// modulus

int cmd_modulus(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const PowerSpectrum spec = build_spectrum(cfg);
    OutputSink sink(cfg.out_dir);

    std::vector<double> deltas = cfg.deltas;
    std::sort(deltas.begin(), deltas.end());

    ModulusCurve curve;
    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["command"] = "modulus";
    summary["total_variance"] = spec.total_variance();

    if (cfg.domain.on_sphere) {
        curve = sphere_modulus(spec, deltas);
        const auto lifted = sphere_modulus_via_lift(spec, deltas);
        double agreement = 0;
        for (std::size_t i = 0; i < deltas.size(); ++i)
            agreement = std::max(agreement, std::fabs(curve.modulus[i] - lifted.modulus[i]));
        summary["lift_agreement"] = agreement;
        summary["lift_agreement_pass"] = agreement < 1e-9;
    } else {
        curve = continuity_modulus(spec, deltas, default_modulus_grid(cfg.domain.group, 512));
    }

    std::string csv = "delta,modulus\n";
    for (std::size_t i = 0; i < deltas.size(); ++i)
        csv += format_double(curve.deltas[i]) + "," + format_double(curve.modulus[i]) + "\n";
    sink.write("modulus.csv", csv);

    summary["finest_delta_bound"] =
        deltas.empty() ? 0.0 : modulus_term_bound(spec, deltas.front());
    summary["deltas"] = curve.deltas;
    summary["modulus"] = curve.modulus;
    sink.write_json("modulus_summary.json", summary);

    json results = json::array();
    results.push_back({{"test", "modulus"}, {"pass", true}});
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.finalize_manifest("modulus", cfg, results, wall);
    return kExitPass;
}

// ---------------------------------------------------------------------------
// nugget

int cmd_nugget(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    OutputSink sink(cfg.out_dir);

    const auto verdict =
        nugget_analysis(cfg.variance_at_zero, cfg.off_diagonal, cfg.domain, cfg.band);
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "nugget";
    doc["variance_at_zero"] = verdict.claimed_at_identity;
    doc["off_diagonal"] = cfg.off_diagonal;
    doc["reconstruction_at_identity"] = verdict.reconstruction_at_identity;
    doc["defect"] = verdict.defect;
    doc["realizable"] = verdict.realizable;
    doc["note"] = verdict.note;
    json rec = json::array();
    for (const auto& [n, a] : verdict.recovered) rec.push_back({{"label", n}, {"alpha", a}});
    doc["recovered_spectrum"] = rec;
    sink.write_json("nugget.json", doc);

    json results = json::array();
    results.push_back({{"test", "nugget"}, {"pass", true}});
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.finalize_manifest("nugget", cfg, results, wall);
    return kExitPass;
}

// ---------------------------------------------------------------------------
// transform

int cmd_transform(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.coefficients_path.empty())
        throw ConfigError("transform needs coefficients_path in the config");
    std::ifstream in(cfg.coefficients_path);
    if (!in) throw ConfigError("cannot open coefficients file: " + cfg.coefficients_path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("coefficients file is not valid JSON: ") + e.what());
    }
    FieldCoefficients c;
    try {
        c = coefficients_from_json(doc);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad coefficients file: ") + e.what());
    }
    if (c.domain != cfg.domain) throw ConfigError("coefficients domain differs from config");
    if (cfg.band < c.band() && cfg.domain.group.kind != GroupKind::cyclic)
        throw NumericalError("aliasing: config band " + std::to_string(cfg.band) +
                             " below coefficients band " + std::to_string(c.band()));

    OutputSink sink(cfg.out_dir);
    const auto rule = domain_rule(cfg.domain, cfg.band);
    const auto labels = labels_up_to_band(cfg.domain.group, std::max(cfg.band, c.band()));
    TransformPlan plan(rule, labels);
    const Eigen::VectorXcd values = plan.synthesize(c);
    const auto res = analyze(values, rule, labels, c.band());

    double err = 0;
    for (const auto& [n, block] : c.blocks)
        err = std::max(err, (res.coeffs.blocks.at(n) - block).cwiseAbs().maxCoeff());

    sink.write_json("coefficients_out.json",
                    coefficients_to_json(res.coeffs, cfg.domain.group.order));
    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "transform";
    report["nodes"] = rule.size();
    report["band"] = cfg.band;
    report["roundtrip_max_error"] = err;
    report["aliased"] = res.aliased;
    if (res.aliased) report["detail"] = res.note;
    sink.write_json("transform_report.json", report);

    json results = json::array();
    results.push_back({{"test", "transform"}, {"pass", !res.aliased && err < 1e-9}});
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.finalize_manifest("transform", cfg, results, wall);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isotropic random fields on compact groups: simulate, transform, verify"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> replicates_override;
    std::optional<std::string> out_override;
    std::optional<int> workers_override;

    for (const char* name : {"simulate", "verify", "modulus", "nugget", "transform"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--seed", seed_override, "override master seed");
        sub->add_option("--replicates", replicates_override, "override replicate count");
        sub->add_option("--out", out_override, "override output directory");
        sub->add_option("--workers", workers_override, "override worker count");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        ExperimentConfig cfg = load_config(config_path);
        if (seed_override) {
            cfg.seed = *seed_override;
            cfg.snapshot["seed"] = *seed_override;
        }
        if (replicates_override) {
            cfg.replicates = *replicates_override;
            cfg.snapshot["replicates"] = *replicates_override;
        }
        if (out_override) {
            cfg.out_dir = *out_override;
            cfg.snapshot["out_dir"] = *out_override;
        }
        if (workers_override) {
            cfg.workers = *workers_override;
            cfg.snapshot["workers"] = *workers_override;
        }

        if (command == "simulate") return cmd_simulate(cfg);
        if (command == "verify") return cmd_verify(cfg);
        if (command == "modulus") return cmd_modulus(cfg);
        if (command == "nugget") return cmd_nugget(cfg);
        if (command == "transform") return cmd_transform(cfg);
        std::cerr << "unknown command\n";
        return kExitConfigError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical-validity error: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
