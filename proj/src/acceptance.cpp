#include "bergman/acceptance.hpp"
#include "bergman/asymptotics.hpp"
#include "bergman/faber.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

namespace bergman {

namespace {

struct Entry {
    DomainModel d;
    int N = 0;
    unsigned P = 0;
    MomentMatrix M;
    OrthonormalSystem sys;
    std::unique_ptr<FaberSystem> fab;
    std::map<int, CMatrix<Real>> alpha;
};

const std::map<std::string, int> kDegree = {
    {"disk", 64}, {"ellipse:rho=1.5", 48}, {"ngon:N=4", 64}, {"lens", 32}, {"ngon:N=3", 30}, {"ngon:N=5", 64},
};

unsigned precision_for(int N) { return unsigned(std::max(256, 4 * N + 64)); }

class Context {
public:
    explicit Context(const AcceptanceOptions& opt) : opt_(opt)
    {
        if (opt.scope) {
            PrecisionScope ps(256);
            scope_name_ = parse_domain_spec(*opt.scope).name;
        }
    }

    bool in_scope(const std::string& spec) const
    {
        if (!opt_.scope)
            return true;
        PrecisionScope ps(256);
        return parse_domain_spec(spec).name == scope_name_;
    }

    Entry& entry(const std::string& spec)
    {
        auto it = cache_.find(spec);
        if (it != cache_.end())
            return *it->second;
        auto e = std::make_unique<Entry>();
        auto deg = kDegree.find(spec);
        e->N = deg == kDegree.end() ? 32 : deg->second;
        e->P = precision_for(e->N);
        PrecisionScope ps(e->P);
        e->d = parse_domain_spec(spec);
        e->M = gram(e->d, e->N, QuadratureScheme{});
        e->sys = orthonormalize(e->M);
        return *cache_.emplace(spec, std::move(e)).first->second;
    }

    const FaberSystem& faber(Entry& e)
    {
        if (!e.fab) {
            PrecisionScope ps(e.P);
            Real R = Real(3) / 2;
            LaurentSeries L = psi_laurent(e.d, R, default_laurent_count(R));
            e.fab = std::make_unique<FaberSystem>(faber_polys(L, e.N));
        }
        return *e.fab;
    }

    const CMatrix<Real>& alpha(Entry& e, int kmax)
    {
        auto it = e.alpha.find(kmax);
        if (it != e.alpha.end())
            return it->second;
        PrecisionScope ps(e.P);
        return e.alpha.emplace(kmax, alpha_table(e.d, e.sys, kmax)).first->second;
    }

private:
    const AcceptanceOptions& opt_;
    std::string scope_name_;
    std::map<std::string, std::unique_ptr<Entry>> cache_;
};

std::string sci(const Real& x) { return to_sci(x, 2); }
std::string sci(double x) { return to_sci(Real(x), 2); }

Real max_abs_diff(const Complex& a, const Complex& b) { return cabs(a - b); }

struct Check {
    bool pass = true;
    std::vector<std::string> notes;
    void add(bool ok, const std::string& note)
    {
        pass = pass && ok;
        notes.push_back(note);
    }
    CriterionResult result(int id) const
    {
        CriterionResult r;
        r.id = id;
        if (notes.empty()) {
            r.status = "SKIP";
            r.detail = "no domain in scope";
            return r;
        }
        r.status = pass ? "PASS" : "FAIL";
        for (std::size_t i = 0; i < notes.size(); ++i)
            r.detail += (i ? "; " : "") + notes[i];
        return r;
    }
};

Complex cpt(double x, double y) { return Complex(Real(x), Real(y)); }

// 1. disk closed forms.
CriterionResult c1(Context& ctx)
{
    Check ck;
    if (!ctx.in_scope("disk"))
        return ck.result(1);
    Entry& e = ctx.entry("disk");
    PrecisionScope ps(e.P);
    const int n_max = 32;
    Real coeff(0), lam(0);
    for (int n = 0; n <= n_max; ++n) {
        Real s = sqrt(Real(n + 1));
        for (int k = 0; k <= n; ++k)
            coeff = std::max(coeff, max_abs_diff(e.sys.coeffs(n, k), Complex(k == n ? s : Real(0))));
        lam = std::max(lam, Real(abs(e.sys.leading[n] - s)));
    }
    const auto& A = ctx.alpha(e, 2 * n_max);
    Real al(0), hj(0);
    for (int n = 0; n <= n_max; ++n) {
        for (int k = n; k <= 2 * n_max; ++k)
            al = std::max(al, max_abs_diff(A(n, k), Complex(k == n ? sqrt(Real(n + 1)) : Real(0))));
        auto h = hg_tables(A, n, n_max);
        for (int j = 0; j <= n_max; ++j)
            hj = std::max(hj, max_abs_diff(h[j], Complex(j == 0 ? 1 : 0)));
    }
    QEvaluator qe(e.d);
    Real qerr(0);
    for (auto z : {cpt(0.3, 0), cpt(0, 0.5), cpt(-0.2, 0.4), cpt(0.6, -0.1), cpt(-0.45, -0.45)}) {
        auto Q = qe.eval(z, n_max);
        Complex zn(1);
        for (int n = 0; n <= n_max; ++n) {
            qerr = std::max(qerr, max_abs_diff(Q[n], Real(n + 1) * zn));
            zn *= z;
        }
    }
    AnnulusConfig cfg = resolve_annulus(e.d, AnnulusConfig{});
    Real aerr(0);
    for (auto z : {cpt(2, 0), cpt(0, 1.5), cpt(-1.2, 0.9), cpt(1.1, -1.1), cpt(-3, -0.5)}) {
        DeviationPoint pt = prepare_deviation(e.d, z, cfg);
        for (int n = 1; n <= n_max; ++n)
            aerr = std::max(aerr, cabs(deviation_at(e.sys, n, pt).A));
    }
    const Real tol("1e-30");
    ck.add(coeff < tol, "coeff " + sci(coeff));
    ck.add(lam < tol, "lambda " + sci(lam));
    ck.add(al < tol, "alpha " + sci(al));
    ck.add(hj < tol, "h " + sci(hj));
    ck.add(qerr < tol, "Q " + sci(qerr));
    ck.add(aerr < tol, "A_n " + sci(aerr));
    return ck.result(1);
}

// Independent 2-D tensor quadrature of z^j conj(z)^k / pi.
Complex area_moment(const DomainModel& d, int j, int k, const std::string& spec, const Real& rho)
{
    const auto& g = gauss_legendre<Real>(24);
    Complex sum(0);
    if (spec == "disk" || spec.rfind("ellipse", 0) == 0) {
        Real a(1), b(1);
        if (spec != "disk") {
            a = (rho + 1 / rho) / 2;
            b = (rho - 1 / rho) / 2;
        }
        const int T = 48;
        for (int t = 0; t < T; ++t) {
            Real th = 2 * pi_value() * Real(t) / Real(T);
            Complex e(a * cos(th), b * sin(th));
            for (std::size_t i = 0; i < g.size(); ++i) {
                Real r = g.nodes[i];
                Complex z = e * r;
                Complex v = std::pow(z, j) * std::pow(std::conj(z), k);
                sum += v * (g.weights[i] * r * a * b);
            }
        }
        return sum * (2 * pi_value() / Real(T)) / pi_value();
    }
    const auto& c = d.corners;
    for (std::size_t m = 0; m < c.size(); ++m) {
        Complex v0 = c[m].location, v1 = c[(m + 1) % c.size()].location;
        Complex e = v1 - v0;
        Real jac = abs((std::conj(v0) * e).imag());
        for (std::size_t iu = 0; iu < g.size(); ++iu)
            for (std::size_t it = 0; it < g.size(); ++it) {
                Real u = g.nodes[iu], t = g.nodes[it];
                Complex z = (v0 + e * t) * u;
                Complex v = std::pow(z, j) * std::pow(std::conj(z), k);
                sum += v * (g.weights[iu] * g.weights[it] * u * jac);
            }
    }
    return sum / pi_value();
}

// 2. boundary moments against area quadrature.
CriterionResult c2(Context& ctx)
{
    Check ck;
    PrecisionScope ps(256);
    for (std::string spec : {"disk", "ellipse:rho=1.5", "ngon:N=4"}) {
        if (!ctx.in_scope(spec))
            continue;
        DomainModel d = parse_domain_spec(spec);
        Real worst(0);
        for (int j = 0; j <= 8; ++j)
            for (int k = 0; k <= 8; ++k) {
                Complex b = boundary_moment(d, j, k, QuadratureScheme{});
                Complex a = area_moment(d, j, k, spec, Real(3) / 2);
                worst = std::max(worst, cabs(a - b));
            }
        ck.add(worst < Real("1e-25"), spec + " " + sci(worst));
    }
    return ck.result(2);
}

// 3. lambda identity.
CriterionResult c3(Context& ctx)
{
    Check ck;
    for (std::string spec : {"disk", "lens", "ngon:N=4"}) {
        if (!ctx.in_scope(spec))
            continue;
        Entry& e = ctx.entry(spec);
        const FaberSystem& fab = ctx.faber(e);
        PrecisionScope ps(e.P);
        Real worst(0);
        for (int n = 0; n <= 32; ++n)
            worst = std::max(worst, Real(abs(identity_residual(e.sys, fab, e.M, n))));
        ck.add(worst < Real("1e-20"), spec + " " + sci(worst));
    }
    return ck.result(3);
}

// 4. alpha below the diagonal.
CriterionResult c4(Context& ctx)
{
    Check ck;
    for (std::string spec : {"ngon:N=4", "lens"}) {
        if (!ctx.in_scope(spec))
            continue;
        Entry& e = ctx.entry(spec);
        const auto& A = ctx.alpha(e, std::min(e.N, 48));
        PrecisionScope ps(e.P);
        Real worst(0);
        for (int n = 1; n <= 24; ++n)
            for (int k = 0; k < n; ++k)
                worst = std::max(worst, cabs(A(n, k)));
        ck.add(worst < Real("1e-18"), spec + " " + sci(worst));
    }
    return ck.result(4);
}

// 5. series representation with growing truncation.
CriterionResult c5(Context& ctx)
{
    Check ck;
    if (!ctx.in_scope("ngon:N=4"))
        return ck.result(5);
    Entry& e = ctx.entry("ngon:N=4");
    const auto& A = ctx.alpha(e, 48);
    PrecisionScope ps(e.P);
    QEvaluator qe(e.d);
    for (auto z : {cpt(0.3, 0), cpt(0.15, 0.15), cpt(-0.1, 0.35)}) {
        auto Q = qe.eval(z, 48);
        for (int n : {8, 16}) {
            auto h = hg_tables(A, n, 32);
            Complex lhs = A(n, n) * eval_p(e.sys, n, z);
            std::vector<Real> err;
            for (int J : {8, 16, 32}) {
                Complex s(0);
                for (int j = 0; j <= J; ++j)
                    s += h[j] * Q[n + j];
                err.push_back(cabs(s - lhs) / cabs(lhs));
            }
            bool ok = err[1] * 2 <= err[0] && err[2] * 2 <= err[1];
            ck.add(ok, "z=" + sci(to_cdouble(z).real()) + "," + sci(to_cdouble(z).imag()) + " n=" + std::to_string(n) +
                           " " + sci(err[0]) + "/" + sci(err[1]) + "/" + sci(err[2]));
        }
    }
    return ck.result(5);
}

// 6. zeros on the symmetry sets.
CriterionResult c6(Context& ctx)
{
    Check ck;
    for (std::string spec : {"ngon:N=4", "ngon:N=3", "lens"}) {
        if (!ctx.in_scope(spec))
            continue;
        Entry& e = ctx.entry(spec);
        PrecisionScope ps(e.P);
        double worst = 0, im = 0;
        for (int n = 1; n <= 30; ++n) {
            ZeroSet zs = poly_zeros(e.sys, n, e.P);
            ZeroSummary s = zero_diagnostics(zs, e.d);
            if (spec == "lens") {
                worst = std::max(worst, s.max_abs_re);
                for (const auto& r : s.rows)
                    im = std::max(im, std::abs(r.z.imag()));
            } else {
                worst = std::max(worst, s.max_dist_gamma);
            }
        }
        if (spec == "lens")
            ck.add(worst < 1e-8 && im < 1, "lens max|Re| " + sci(worst) + " max|Im| " + sci(im));
        else
            ck.add(worst < 1e-6, spec + " " + sci(worst));
    }
    return ck.result(6);
}

// Running max of |p_n(z)|^(1/n) over n = 48..64.
Real tail_limsup(const OrthonormalSystem& sys, const Complex& z)
{
    return nth_root_profile(sys, z, 48, 64).running_max.back();
}

// 7. R_5 dichotomy.
CriterionResult c7(Context& ctx)
{
    Check ck;
    if (!ctx.in_scope("ngon:N=5"))
        return ck.result(7);
    Entry& e = ctx.entry("ngon:N=5");
    PrecisionScope ps(e.P);
    ZeroSet zs = poly_zeros(e.sys, 50, e.P);
    ZeroSummary s = zero_diagnostics(zs, e.d);
    ck.add(s.max_dist_gamma > 0.05, "n=50 max dist to spokes " + sci(s.max_dist_gamma));
    Real lim = tail_limsup(e.sys, cpt(0.95, 0));
    ck.add(abs(lim - 1) < Real("0.05"), "limsup proxy at 0.95 " + sci(lim));
    return ck.result(7);
}

struct Growth {
    Real min, last, sup;
};

template <class F>
Growth scan(int lo, int hi, F f)
{
    Growth g{Real(1e300), Real(0), Real(0)};
    for (int n = lo; n <= hi; ++n) {
        Real v = f(n);
        g.min = std::min(g.min, v);
        g.sup = std::max(g.sup, v);
        g.last = v;
    }
    return g;
}

// 8. exterior rate.
CriterionResult c8(Context& ctx)
{
    Check ck;
    for (std::string spec : {"ellipse:rho=1.5", "ngon:N=4"}) {
        if (!ctx.in_scope(spec))
            continue;
        Entry& e = ctx.entry(spec);
        PrecisionScope ps(e.P);
        AnnulusConfig cfg;
        const double rad[] = {1.25, 1.4, 1.55, 1.7, 1.9};
        bool ok = true;
        Real worst_sup(0), worst_ratio(0);
        for (int i = 0; i < 5; ++i) {
            Real th = pi_value() * Real(2 * i + 1) / 4;
            Complex z = e.d.psi(polar_unit(th) * Real(rad[i]));
            DeviationPoint pt = prepare_deviation(e.d, z, cfg);
            Growth g = scan(8, 48, [&](int n) { return Real(n) * cabs(deviation_at(e.sys, n, pt).A); });
            ok = ok && boost::multiprecision::isfinite(g.sup) && g.last <= 2 * g.min;
            worst_sup = std::max(worst_sup, g.sup);
            worst_ratio = std::max(worst_ratio, g.last / g.min);
        }
        ck.add(ok, spec + " sup " + sci(worst_sup) + " last/min " + sci(worst_ratio));
    }
    return ck.result(8);
}

// 9. across the boundary at mid-edge.
CriterionResult c9(Context& ctx)
{
    Check ck;
    if (!ctx.in_scope("ngon:N=4"))
        return ck.result(9);
    Entry& e = ctx.entry("ngon:N=4");
    PrecisionScope ps(e.P);
    AnnulusConfig cfg = resolve_annulus(e.d, AnnulusConfig{});
    Complex mid = cpt(0.5, 0.5);
    Complex normal = Complex(Real(1), Real(1)) / sqrt(Real(2));
    for (int sgn : {1, -1}) {
        Complex z = mid + normal * Real(sgn) / Real(1000);
        DeviationPoint pt = prepare_deviation(e.d, z, cfg);
        Growth g = scan(8, 48, [&](int n) { return Real(n) * cabs(deviation_at(e.sys, n, pt).A) / log(Real(n)); });
        ck.add(boost::multiprecision::isfinite(g.sup) && g.last <= 2 * g.min,
               std::string(regime_name(pt.regime)) + " sup " + sci(g.sup) + " last/min " + sci(g.last / g.min));
    }
    return ck.result(9);
}

// 10. limsup proxy against r(z).
CriterionResult c10(Context& ctx)
{
    Check ck;
    if (!ctx.in_scope("ngon:N=4"))
        return ck.result(10);
    Entry& e = ctx.entry("ngon:N=4");
    PrecisionScope ps(e.P);
    AnnulusConfig cfg = resolve_annulus(e.d, AnnulusConfig{});
    for (auto z : {cpt(0.05, 0.05), cpt(0.1, 0.1), cpt(0.15, 0.15)}) {
        ContinuationResult c = classify_point(e.d, z, cfg);
        Real lim = tail_limsup(e.sys, z);
        ck.add(c.p == 1 && abs(lim - c.r) < Real("0.02"),
               "p=" + std::to_string(c.p) + " r " + to_sci(c.r, 4) + " proxy " + to_sci(lim, 4));
    }
    return ck.result(10);
}

// 11. residue formula on an inner contour.
CriterionResult c11(Context& ctx)
{
    Check ck;
    if (!ctx.in_scope("ngon:N=4"))
        return ck.result(11);
    Entry& e = ctx.entry("ngon:N=4");
    PrecisionScope ps(e.P);
    AnnulusConfig cfg = resolve_annulus(e.d, AnnulusConfig{});
    QEvaluator qe(e.d);
    for (auto z : {cpt(0.3, 0.2), cpt(0.1, 0.3), cpt(0.15, 0.15)}) {
        ContinuationResult c = classify_point(e.d, z, cfg);
        PhiValue ph = Phi_full(e.d, z, cfg);
        Real second = cfg.rho_in;
        for (const auto& rr : c.zeros)
            if (cabs(rr.w) < c.r - c.r * cfg.tie_window && cabs(rr.w) > second)
                second = cabs(rr.w);
        Real rho_mid = (c.r + second) / 2;
        auto Q = qe.eval(z, 32);
        std::vector<Real> K;
        for (int n = 8; n <= 32; ++n) {
            Complex main = Real(n + 1) * ph.derivative * pow(ph.value, n);
            K.push_back(cabs(Q[n] - main) / (Real(n + 1) * pow(rho_mid, n)));
        }
        Real first = *std::max_element(K.begin(), K.begin() + 13);
        Real late = *std::max_element(K.begin() + 13, K.end());
        ck.add(c.p == 1 && boost::multiprecision::isfinite(first) && late <= 2 * first,
               "rho_mid " + to_sci(rho_mid, 3) + " K " + sci(std::max(first, late)) + " late/early " +
                   sci(late / first));
    }
    return ck.result(11);
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string run_capture(const std::string& cmd)
{
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return out;
    char buf[4096];
    std::size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0)
        out.append(buf, k);
    pclose(p);
    return out;
}

// 12. determinism.
CriterionResult c12(Context& ctx, const AcceptanceOptions& opt)
{
    Check ck;
    std::string spec = opt.scope ? *opt.scope : "ngon:N=4";
    auto render = [&] {
        PrecisionScope ps(256);
        DomainModel d = parse_domain_spec(spec);
        OrthonormalSystem sys = orthonormalize(gram(d, 16, QuadratureScheme{}));
        std::ostringstream os;
        os << system_to_json(sys);
        write_zeros_header(os);
        for (int n = 1; n <= 16; ++n)
            write_zero_rows(os, zero_diagnostics(poly_zeros(sys, n, 256), d));
        return os.str();
    };
    std::string a = render(), b = render();
    ck.add(a == b, spec + " in-process " + std::to_string(a.size()) + " bytes");
    if (!opt.exe.empty()) {
        namespace fs = std::filesystem;
        fs::path dir = fs::path(opt.work_dir) / "determinism";
        fs::create_directories(dir);
        {
            std::ofstream cfg(dir / "disk.json", std::ios::binary);
            cfg << "{\"domain\": \"disk\", \"degree_max\": 16}\n";
        }
        std::string outs[2], files[2];
        for (int r = 0; r < 2; ++r) {
            fs::path od = dir / "out";
            outs[r] = run_capture("'" + opt.exe + "' verify --config '" + (dir / "disk.json").string() + "' --out '" +
                                  od.string() + "' 2>&1");
            files[r] = slurp((od / "verify.txt").string()) + slurp((od / "config.json").string());
        }
        ck.add(!outs[0].empty() && outs[0] == outs[1] && files[0] == files[1],
               "cli verify x2 " + std::to_string(outs[0].size()) + " bytes");
    }
    (void)ctx;
    return ck.result(12);
}

} // namespace

std::string format_result(const CriterionResult& r)
{
    std::string id = std::to_string(r.id);
    if (id.size() < 2)
        id = " " + id;
    return "criterion " + id + ": " + r.status + "  " + r.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& report)
{
    Context ctx(opt);
    std::vector<CriterionResult> out;
    auto wanted = [&](int id) { return opt.only.empty() || std::count(opt.only.begin(), opt.only.end(), id) > 0; };
    std::vector<std::function<CriterionResult()>> crit = {
        [&] { return c1(ctx); }, [&] { return c2(ctx); },  [&] { return c3(ctx); },  [&] { return c4(ctx); },
        [&] { return c5(ctx); }, [&] { return c6(ctx); },  [&] { return c7(ctx); },  [&] { return c8(ctx); },
        [&] { return c9(ctx); }, [&] { return c10(ctx); }, [&] { return c11(ctx); }, [&] { return c12(ctx, opt); },
    };
    for (std::size_t i = 0; i < crit.size(); ++i) {
        if (!wanted(int(i) + 1))
            continue;
        CriterionResult r;
        try {
            r = crit[i]();
        } catch (const Error& e) {
            r.id = int(i) + 1;
            r.status = "FAIL";
            r.detail = e.what();
        }
        if (report)
            report(r);
        out.push_back(r);
    }
    return out;
}

} // namespace bergman
