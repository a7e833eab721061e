#include "bergman/asymptotics.hpp"
#include "bergman/faber.hpp"

#include <cmath>
#include <limits>

namespace bergman {

const char* regime_name(Regime r)
{
    switch (r) {
    case Regime::Exterior: return "exterior";
    case Regime::Interior: return "interior";
    case Regime::OmegaStar: return "omega-star";
    }
    return "?";
}

namespace {

// phi_1 near a known value: Newton on h(w) = varphi(z).
Complex follow_phi1(const DomainModel& d, const Complex& z, const Complex& w0, const AnnulusConfig& cfg)
{
    Complex v = d.varphi(z);
    Complex w = w0;
    for (int it = 0; it < 40; ++it) {
        Complex dh;
        ExtValue h = h_eval(d, w, cfg, &dh);
        if (h.infinite)
            break;
        Complex step = (h.value - v) / dh;
        w -= step;
        if (cabs(step) < pow2(8 - int(precision_bits())))
            break;
    }
    return w;
}

Complex ipow(Complex b, int e)
{
    Complex r(1);
    while (e > 0) {
        if (e & 1)
            r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

} // namespace

DeviationPoint prepare_deviation(const DomainModel& d, const Complex& z, const AnnulusConfig& cfg)
{
    DeviationPoint pt;
    pt.z = z;
    cdouble zd = to_cdouble(z);
    double bd = d.boundary_distance(zd);
    bool inside = d.inside(zd);
    PhiValue ph = Phi_full(d, z, cfg);
    pt.Phi = ph.value;
    pt.dPhi = ph.derivative;
    pt.regime = ph.interior ? Regime::Interior : (bd < 1e-12 ? Regime::OmegaStar : Regime::Exterior);

    Real hs = pow2(-int(precision_bits()) / 3);
    pt.derivative_gap = Real(-1);
    if (pt.regime == Regime::Exterior && bd > 4 * hs.convert_to<double>()) {
        Complex fd = (d.phi(z + hs) - d.phi(z - hs)) / (2 * hs);
        pt.derivative_gap = cabs(fd - pt.dPhi);
    } else if (pt.regime == Regime::Interior && inside) {
        Complex fp = follow_phi1(d, z + hs, pt.Phi, cfg);
        Complex fm = follow_phi1(d, z - hs, pt.Phi, cfg);
        pt.derivative_gap = cabs((fp - fm) / (2 * hs) - pt.dPhi);
    }
    if (pt.derivative_gap > pow2(-int(precision_bits()) / 2) * (1 + cabs(pt.dPhi)))
        throw Error(ErrorKind::MapInversionFailure,
                    "analytic Phi' disagrees with the central difference by " + to_sci(pt.derivative_gap, 4));
    return pt;
}

DeviationRecord deviation_at(const OrthonormalSystem& sys, int n, const DeviationPoint& pt)
{
    DeviationRecord rec;
    rec.n = n;
    rec.z = pt.z;
    rec.regime = pt.regime;
    rec.aux = cabs(pt.Phi);
    rec.derivative_gap = pt.derivative_gap;
    Complex p = eval_p(sys, n, pt.z);
    if (p == Complex(0)) {
        rec.A = Complex(-1);
        return rec;
    }
    if (n <= 64) {
        Complex den = sqrt(Real(n + 1)) * pt.dPhi * ipow(pt.Phi, n);
        if (den == Complex(0) || !boost::multiprecision::isfinite(cabs(den)))
            throw Error(ErrorKind::ScalingError, "Phi^n left the exponent range at n = " + std::to_string(n));
        rec.A = p / den - Complex(1);
        return rec;
    }
    Complex lg = clog(p) - (Complex(log(Real(n + 1)) / 2) + clog(pt.dPhi) + clog(pt.Phi) * Real(n));
    rec.A = cexp(lg) - Complex(1);
    return rec;
}

DeviationRecord deviation(const DomainModel& d, const OrthonormalSystem& sys, int n, const Complex& z,
                          const AnnulusConfig& cfg)
{
    return deviation_at(sys, n, prepare_deviation(d, z, cfg));
}

RateFit rate_fit(const std::string& quantity, const std::string& model, const std::vector<int>& n,
                 const std::vector<Real>& values)
{
    if (n.size() != values.size())
        throw Error(ErrorKind::InvalidParameter, "rate fit needs matching sample lists");
    RateFit f;
    f.quantity = quantity;
    f.model = model;
    f.n = n;
    f.value = values;
    f.sup = Real(0);
    Real run(0);
    for (std::size_t i = 0; i < n.size(); ++i) {
        Real s = values[i];
        if (model == "n")
            s *= n[i];
        else if (model == "n/log n")
            s *= Real(n[i]) / log(Real(n[i]));
        f.scaled.push_back(s);
        if (s > f.sup)
            f.sup = s;
        if (i == 0 || values[i] > run)
            run = values[i];
        f.running_max.push_back(run);
    }
    return f;
}

RateFit nth_root_profile(const OrthonormalSystem& sys, const Complex& z, int n_lo, int n_hi,
                         const std::optional<Real>& r)
{
    if (n_lo < 1 || n_hi < n_lo || n_hi > sys.degree_max)
        throw Error(ErrorKind::DegreeOutOfRange, "profile degree range not available");
    std::vector<int> ns;
    std::vector<Real> vals;
    for (int n = n_lo; n <= n_hi; ++n) {
        Real a = cabs(eval_p(sys, n, z));
        ns.push_back(n);
        vals.push_back(a > 0 ? exp(log(a) / n) : Real(0));
    }
    RateFit f = rate_fit("nth_root", "raw", ns, vals);
    f.reference = r ? *r : Real(-1);
    return f;
}

ZeroSet poly_zeros(const OrthonormalSystem& sys, int n, unsigned precision)
{
    if (n < 1 || n > sys.degree_max)
        throw Error(ErrorKind::DegreeOutOfRange, "zero degree out of range");
    PrecisionScope scope(std::min(precision, precision_bits()));
    const unsigned P = precision_bits();
    std::vector<Complex> a(n + 1);
    for (int j = 0; j <= n; ++j)
        a[j] = Complex(Real(sys.coeffs(n, j).real()), Real(sys.coeffs(n, j).imag()));
    Real lead = cabs(a[n]);
    Real radius = Real(1);
    // Start on a circle of radius 1/gamma estimated from lambda_n ~ sqrt(n+1) gamma^(n+1).
    if (n >= 1 && sys.leading.size() > std::size_t(n)) {
        Real g = exp((log(sys.leading[n]) - log(Real(n + 1)) / 2) / Real(n + 1));
        if (g > 0)
            radius = Real(1) / g;
    }

    std::vector<cdouble> ad(n + 1);
    for (int j = 0; j <= n; ++j)
        ad[j] = to_cdouble(a[j]);
    std::vector<cdouble> zd(n);
    for (int k = 0; k < n; ++k)
        zd[k] = std::polar(radius.convert_to<double>(), 6.283185307179586 * k / n + 0.4);
    int sweeps = 0;
    for (; sweeps < 100; ++sweeps) {
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            cdouble p = ad[n], dp = 0;
            for (int j = n - 1; j >= 0; --j) {
                dp = dp * zd[i] + p;
                p = p * zd[i] + ad[j];
            }
            if (dp == 0.0)
                continue;
            cdouble ratio = p / dp;
            cdouble s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i)
                    s += 1.0 / (zd[i] - zd[j]);
            cdouble corr = ratio / (1.0 - ratio * s);
            if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag()))
                continue;
            zd[i] -= corr;
            worst = std::max(worst, std::abs(corr) / std::max(1.0, std::abs(zd[i])));
        }
        if (worst < 1e-14)
            break;
    }

    std::vector<Complex> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = to_complex(zd[k]);
    Real target = pow2(64 - int(P));
    Real step_floor = pow2(8 - int(P));
    Real worst_res(0);
    for (; sweeps < 500; ++sweeps) {
        Real worst_corr(0);
        worst_res = Real(0);
        Real zmax(1);
        for (const auto& zi : z)
            if (cabs(zi) > zmax)
                zmax = cabs(zi);
        Real scale = lead * boost::multiprecision::pow(zmax, n);
        for (int i = 0; i < n; ++i) {
            Complex p = a[n], dp(0);
            for (int j = n - 1; j >= 0; --j) {
                dp = dp * z[i] + p;
                p = p * z[i] + a[j];
            }
            Real res = cabs(p) / scale;
            if (res > worst_res)
                worst_res = res;
            if (dp == Complex(0) || p == Complex(0))
                continue;
            Complex ratio = p / dp;
            Complex s(0);
            for (int j = 0; j < n; ++j)
                if (j != i)
                    s += Complex(1) / (z[i] - z[j]);
            Complex corr = ratio / (Complex(1) - ratio * s);
            z[i] -= corr;
            Real c = cabs(corr) / (cabs(z[i]) > 1 ? cabs(z[i]) : Real(1));
            if (c > worst_corr)
                worst_corr = c;
        }
        if (worst_res < target / 4 && worst_corr < step_floor)
            break;
        if (worst_res < target / 4 && sweeps > 0 && worst_corr < sqrt(target))
            break;
    }
    ZeroSet zs;
    zs.n = n;
    zs.sweeps = sweeps;
    Real zmax(1);
    for (const auto& zi : z)
        if (cabs(zi) > zmax)
            zmax = cabs(zi);
    Real scale = lead * boost::multiprecision::pow(zmax, n);
    zs.max_residual = Real(0);
    for (const auto& zi : z) {
        Real r = cabs(eval_coeffs(a, zi)) / scale;
        if (r > zs.max_residual)
            zs.max_residual = r;
    }
    if (!(zs.max_residual < target))
        throw Error(ErrorKind::RootFailure,
                    "Aberth iteration stalled after " + std::to_string(sweeps) + " sweeps with residual " +
                        to_sci(zs.max_residual, 4));
    zs.zeros = std::move(z);
    return zs;
}

double distance_to_gamma(const DomainModel& d, cdouble z)
{
    auto sp = d.spokes();
    if (sp.empty())
        return std::numeric_limits<double>::quiet_NaN();
    double best = 1e300;
    for (const auto& [a, b] : sp)
        best = std::min(best, segment_distance(z, a, b));
    return best;
}

ZeroSummary zero_diagnostics(const ZeroSet& zs, const DomainModel& d)
{
    ZeroSummary s;
    s.n = zs.n;
    s.phi_histogram.assign(11, 0);
    s.min_dist_corners = 1e300;
    for (const auto& z : zs.zeros) {
        ZeroRow row;
        row.z = to_cdouble(z);
        row.dist_gamma = distance_to_gamma(d, row.z);
        row.dist_L = d.boundary_distance(row.z);
        row.dist_corners = d.corners.empty() ? std::numeric_limits<double>::quiet_NaN() : d.distance_to_corners(row.z);
        row.abs_phi = std::numeric_limits<double>::quiet_NaN();
        if (d.inside(row.z)) {
            ++s.interior;
        } else {
            row.abs_phi = cabs(d.phi(z)).convert_to<double>();
            int bin = std::clamp(int((row.abs_phi - 1) / 0.1), 0, 10);
            ++s.phi_histogram[bin];
        }
        if (std::isfinite(row.dist_gamma))
            s.max_dist_gamma = std::max(s.max_dist_gamma, row.dist_gamma);
        if (std::isfinite(row.dist_corners))
            s.min_dist_corners = std::min(s.min_dist_corners, row.dist_corners);
        s.max_abs_re = std::max(s.max_abs_re, std::abs(row.z.real()));
        s.rows.push_back(row);
    }
    if (d.corners.empty())
        s.min_dist_corners = std::numeric_limits<double>::quiet_NaN();
    return s;
}

} // namespace bergman
