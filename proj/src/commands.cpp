#include "bergman/commands.hpp"
#include "bergman/acceptance.hpp"
#include "bergman/config.hpp"
#include "bergman/report_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace bergman {

namespace fs = std::filesystem;

namespace {

struct Run {
    ExperimentConfig cfg;
    DomainModel d;
    fs::path dir;
    std::ostream& out;
    std::ostream& err;

    std::ofstream file(const std::string& name) const
    {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f)
            throw Error(ErrorKind::InvalidParameter, "cannot write " + (dir / name).string());
        f.imbue(std::locale::classic());
        return f;
    }
};

std::string point_text(const Complex& z)
{
    cdouble c = to_cdouble(z);
    return csv_double(c.real()) + "," + csv_double(c.imag());
}

MomentMatrix build_gram(const Run& r) { return gram(r.d, r.cfg.degree_max, r.cfg.quadrature); }

int cmd_ortho(const Run& r)
{
    MomentMatrix M = build_gram(r);
    OrthonormalSystem sys = orthonormalize(M);
    r.file("system.json") << system_to_json(sys);
    auto lam = r.file("lambda.csv");
    write_lambda_csv(lam, sys, r.d.capacity);
    Real res = orthonormality_residual(sys, M);
    r.out << "degree_max " << sys.degree_max << "\nprecision_bits " << sys.precision << "\nself_check_gap "
          << to_sci(M.self_check_gap, 3) << "\northonormality_residual " << to_sci(res, 3) << '\n';
    return 0;
}

int cmd_tables(const Run& r)
{
    MomentMatrix M = build_gram(r);
    OrthonormalSystem sys = orthonormalize(M);
    Real R = Real(3) / 2;
    LaurentSeries L = psi_laurent(r.d, R, default_laurent_count(R));
    FaberSystem fab = faber_polys(L, r.cfg.degree_max);
    CoefficientTables t = build_tables(r.d, sys, M, fab, r.cfg.h_rows, r.cfg.table_J);
    auto tc = r.file("tables.csv");
    write_tables_csv(tc, t);
    auto ac = r.file("alpha.csv");
    write_alpha_csv(ac, t.alpha);
    r.file("tables.json") << tables_to_json(t);
    Real worst(0);
    for (const auto& v : t.identity)
        worst = std::max(worst, Real(abs(v)));
    r.out << "faber_route_gap " << to_sci(fab.route_gap, 3) << "\nidentity_residual_max " << to_sci(worst, 3)
          << "\nalpha_lower_max " << to_sci(t.alpha_lower_max, 3) << "\nfit_alpha_C " << to_sci(t.fit_alpha_C, 6)
          << "\nfit_h_B " << to_sci(t.fit_h_B, 6) << '\n';
    return 0;
}

int cmd_zeros(const Run& r)
{
    OrthonormalSystem sys = orthonormalize(build_gram(r));
    auto zc = r.file("zeros.csv");
    auto sc = r.file("zeros_summary.csv");
    write_zeros_header(zc);
    write_zero_summary_header(sc);
    double worst_gamma = 0;
    for (int n = 1; n <= r.cfg.degree_max; ++n) {
        ZeroSet zs = poly_zeros(sys, n, r.cfg.precision_bits);
        ZeroSummary s = zero_diagnostics(zs, r.d);
        write_zero_rows(zc, s);
        write_zero_summary_row(sc, s, zs);
        worst_gamma = std::max(worst_gamma, s.max_dist_gamma);
    }
    r.out << "degrees 1.." << r.cfg.degree_max << "\nmax_dist_gamma " << csv_double(worst_gamma) << '\n';
    return 0;
}

int cmd_asymptotics(const Run& r)
{
    OrthonormalSystem sys = orthonormalize(build_gram(r));
    auto dc = r.file("deviations.csv");
    write_deviations_header(dc);
    std::vector<Complex> pts = r.cfg.exterior_points;
    pts.insert(pts.end(), r.cfg.interior_points.begin(), r.cfg.interior_points.end());
    int used = 0;
    for (const auto& z : pts) {
        DeviationPoint pt;
        try {
            pt = prepare_deviation(r.d, z, r.cfg.annulus);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::MapInversionFailure || e.kind() == ErrorKind::ScalingError)
                throw;
            r.err << "skipping " << point_text(z) << ": " << e.what() << '\n';
            continue;
        }
        ++used;
        for (int n = r.cfg.n_min; n <= r.cfg.degree_max; ++n)
            write_deviation_row(dc, deviation_at(sys, n, pt));
    }
    auto pc = r.file("profile.csv");
    write_profile_header(pc);
    for (const auto& z : r.cfg.interior_points) {
        std::optional<Real> rz;
        if (r.d.has_interior()) {
            try {
                rz = classify_point(r.d, z, r.cfg.annulus).r;
            } catch (const Error& e) {
                r.err << "no r(z) at " << point_text(z) << ": " << e.what() << '\n';
            }
        }
        write_profile_rows(pc, z, nth_root_profile(sys, z, 1, r.cfg.degree_max, rz));
    }
    r.out << "deviation_points " << used << "\nprofile_points " << r.cfg.interior_points.size() << '\n';
    return 0;
}

int cmd_continuation(const Run& r)
{
    auto rc = r.file("raster.csv");
    write_raster(rc, r.d, r.cfg.annulus, r.cfg.raster);
    auto pc = r.file("points.csv");
    pc << "re_z,im_z,p,r,ring_count,in_omega_star,re_phi1,im_phi1\n";
    for (const auto& z : r.cfg.interior_points) {
        ContinuationResult c = classify_point(r.d, z, r.cfg.annulus);
        pc << point_text(z) << ',' << c.p << ',' << to_sci(c.r, 17) << ',' << c.ring_count << ','
           << (c.in_omega_star ? 1 : 0) << ',';
        if (c.phi1)
            pc << to_sci(c.phi1->real(), 17) << ',' << to_sci(c.phi1->imag(), 17);
        else
            pc << ',';
        pc << '\n';
    }
    r.out << "raster " << r.cfg.raster.nx << "x" << r.cfg.raster.ny << "\npoints " << r.cfg.interior_points.size()
          << '\n';
    return 0;
}

int cmd_verify(const Run& r)
{
    AcceptanceOptions opt;
    if (!r.cfg.verify_full)
        opt.scope = r.cfg.domain;
    opt.work_dir = r.dir.string();
    auto vf = r.file("verify.txt");
    bool failed = false;
    run_acceptance(opt, [&](const CriterionResult& c) {
        std::string line = format_result(c);
        r.out << line << std::endl;
        vf << line << '\n';
        failed = failed || c.status == "FAIL";
    });
    return failed ? 1 : 0;
}

} // namespace

int run_command(const std::string& sub, const std::string& config_path, const std::optional<std::string>& out_dir,
                std::ostream& out, std::ostream& err)
{
    static const char* subs[] = {"ortho", "tables", "zeros", "asymptotics", "continuation", "verify"};
    if (std::find(std::begin(subs), std::end(subs), sub) == std::end(subs)) {
        err << "unknown subcommand '" << sub << "'\n";
        return 2;
    }
    ExperimentConfig cfg;
    DomainModel d;
    try {
        cfg = load_config(config_path);
        if (out_dir)
            cfg.out_dir = *out_dir;
        d = parse_domain_spec(cfg.domain);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.kind() == ErrorKind::ConfigError ? 2 : 1;
    }
    try {
        PrecisionScope ps(cfg.precision_bits);
        fs::create_directories(cfg.out_dir);
        Run r{cfg, d, fs::path(cfg.out_dir), out, err};
        r.file("config.json") << config_to_json(cfg);
        if (sub == "ortho")
            return cmd_ortho(r);
        if (sub == "tables")
            return cmd_tables(r);
        if (sub == "zeros")
            return cmd_zeros(r);
        if (sub == "asymptotics")
            return cmd_asymptotics(r);
        if (sub == "continuation")
            return cmd_continuation(r);
        return cmd_verify(r);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace bergman
