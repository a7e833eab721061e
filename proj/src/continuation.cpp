#include "bergman/continuation.hpp"

#include <climits>
#include <cmath>
#include <functional>

namespace bergman {

namespace {

const double two_pi = 6.28318530717958647692;

bool finite_c(cdouble z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// f_z(w) = h(w) - varphi(z) in double, with a degeneracy flag for contour hits.
struct Tracer {
    const DomainModel& d;
    cdouble v;
    bool degenerate = false;

    cdouble f(cdouble w)
    {
        cdouble r = h_eval_fast(d, w) - v;
        if (!finite_c(r) || std::abs(r) < 1e-11)
            degenerate = true;
        return r;
    }

    double segment(const std::function<cdouble(double)>& path, double t0, double t1, cdouble f0, cdouble f1,
                   int depth)
    {
        if (degenerate)
            return 0;
        double da = std::arg(f1 / f0);
        double ratio = std::abs(f1) / std::abs(f0);
        if ((std::abs(da) < 0.5 && ratio < 3 && ratio > 1.0 / 3) || depth > 40) {
            if (depth > 40)
                degenerate = true;
            return da;
        }
        double tm = 0.5 * (t0 + t1);
        cdouble fm = f(path(tm));
        return segment(path, t0, tm, f0, fm, depth + 1) + segment(path, tm, t1, fm, f1, depth + 1);
    }

    double trace(const std::function<cdouble(double)>& path, double length)
    {
        int n = std::max(8, int(std::ceil(length / 0.02)));
        double total = 0;
        cdouble prev = f(path(0));
        for (int i = 1; i <= n && !degenerate; ++i) {
            double t = double(i) / n;
            cdouble cur = f(path(t));
            total += segment(path, double(i - 1) / n, t, prev, cur, 0);
            prev = cur;
        }
        return total;
    }
};

struct Sector {
    double a, b, t0, t1;
    double size() const { return std::max(b - a, (t1 - t0) * b); }
    cdouble centre() const { return std::polar(0.5 * (a + b), 0.5 * (t0 + t1)); }
    bool contains(cdouble w, double slack) const
    {
        double r = std::abs(w);
        double t = std::arg(w);
        while (t < t0 - slack)
            t += two_pi;
        while (t > t1 + slack)
            t -= two_pi;
        return r >= a - slack && r <= b + slack && t >= t0 - slack && t <= t1 + slack;
    }
};

int poles_inside(const std::vector<HPole>& poles, const Sector& s)
{
    int n = 0;
    for (const auto& p : poles)
        if (s.contains(to_cdouble(p.location), 0))
            n += p.multiplicity;
    return n;
}

// Zeros minus poles inside a sector by the argument increment along its boundary; empty when degenerate.
std::optional<int> sector_winding(Tracer& tr, const Sector& s)
{
    tr.degenerate = false;
    double total = 0;
    double span = s.t1 - s.t0;
    total += tr.trace([&](double t) { return std::polar(s.b, s.t0 + span * t); }, span * s.b);
    total += tr.trace([&](double t) { return std::polar(s.b + (s.a - s.b) * t, s.t1); }, s.b - s.a);
    total += tr.trace([&](double t) { return std::polar(s.a, s.t1 - span * t); }, span * s.a);
    total += tr.trace([&](double t) { return std::polar(s.a + (s.b - s.a) * t, s.t0); }, s.b - s.a);
    if (tr.degenerate)
        return std::nullopt;
    double k = total / two_pi;
    double kr = std::round(k);
    if (std::abs(k - kr) > 0.25)
        return std::nullopt;
    return int(kr);
}

// (1/2 pi i) of the log-derivative of f_z over |w| = r, refined until near an integer and stable.
long winding_on_circle(const DomainModel& d, cdouble v, double r, int K0, bool& degenerate)
{
    degenerate = false;
    long last = LONG_MIN;
    for (int K = std::max(K0, 16); K <= (1 << 17); K *= 2) {
        cdouble acc = 0;
        double fmin = 1e300;
        for (int j = 0; j < K; ++j) {
            cdouble w = std::polar(r, two_pi * (j + 0.25) / K);
            cdouble dh;
            cdouble f = h_eval_fast(d, w, &dh) - v;
            if (!finite_c(f) || !finite_c(dh)) {
                degenerate = true;
                return 0;
            }
            fmin = std::min(fmin, std::abs(f));
            acc += w * dh / f;
        }
        if (fmin < 1e-11) {
            degenerate = true;
            return 0;
        }
        double k = acc.real() / K;
        long kr = std::lround(k);
        bool near = std::abs(k - double(kr)) < 0.25 && std::abs(acc.imag() / K) < 0.25;
        if (near && kr == last)
            return kr;
        last = near ? kr : LONG_MIN;
    }
    degenerate = true;
    return 0;
}

std::vector<HPole> ring_poles(const DomainModel& d, const Real& r_lo)
{
    if (!d.maps->has_continuation())
        return {};
    std::vector<HPole> out;
    for (const auto& p : d.maps->h_poles(r_lo))
        if (cabs(p.location) > r_lo && cabs(p.location) < 1)
            out.push_back(p);
    return out;
}

int count_ring(const DomainModel& d, cdouble v, double r1, double r2, const std::vector<HPole>& poles, int K,
               bool& degenerate)
{
    bool d1 = false, d2 = false;
    long w2 = winding_on_circle(d, v, r2, K, d2);
    long w1 = winding_on_circle(d, v, r1, K, d1);
    degenerate = d1 || d2;
    int np = 0;
    for (const auto& p : poles) {
        double m = std::abs(to_cdouble(p.location));
        if (m > r1 && m < r2)
            np += p.multiplicity;
    }
    return int(w2 - w1) + np;
}

// Double-precision Newton (modified for multiplicity m) from a start point.
bool newton_fast(const DomainModel& d, cdouble v, cdouble& w, int m)
{
    for (int it = 0; it < 60; ++it) {
        cdouble dh;
        cdouble f = h_eval_fast(d, w, &dh) - v;
        if (!finite_c(f) || !finite_c(dh) || dh == 0.0)
            return false;
        cdouble step = double(m) * f / dh;
        if (std::abs(step) > 0.05)
            step *= 0.05 / std::abs(step);
        w -= step;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(w)))
            return true;
    }
    return false;
}

RootRecord polish(const DomainModel& d, const Complex& v, cdouble w0, int m, const AnnulusConfig& cfg)
{
    Complex w = to_complex(w0);
    Real res(1);
    Real best(1e30);
    Complex best_w = w;
    for (int it = 0; it < 40; ++it) {
        Complex dh;
        ExtValue hv = h_eval(d, w, cfg, &dh);
        if (hv.infinite)
            break;
        Complex f = hv.value - v;
        res = cabs(f);
        if (res < best) {
            best = res;
            best_w = w;
        }
        if (res < cfg.newton_tol && m == 1)
            break;
        if (dh == Complex(0))
            break;
        Complex step = f / dh * Real(m);
        w -= step;
        if (cabs(step) < pow2(8 - int(precision_bits())))
            break;
    }
    return RootRecord{best_w, m, best};
}

double circle_winding(Tracer& tr, cdouble c, double rad)
{
    tr.degenerate = false;
    double total = tr.trace([&](double t) { return c + std::polar(rad, two_pi * t); }, two_pi * rad);
    if (tr.degenerate)
        return -1;
    return std::round(total / two_pi);
}

} // namespace

AnnulusConfig resolve_annulus(const DomainModel& d, AnnulusConfig cfg)
{
    if (!(cfg.rho_in > 0 && cfg.rho_in < 1))
        throw Error(ErrorKind::InvalidParameter, "rho_in must lie in (0,1)");
    if (cfg.circle_samples < 8)
        throw Error(ErrorKind::InvalidParameter, "circle samples must be at least 8");
    if (cfg.newton_tol <= 0)
        cfg.newton_tol = pow2(100 - int(precision_bits()));
    if (d.maps->has_continuation()) {
        for (int j = 0; j < 32; ++j) {
            cdouble w = std::polar(cfg.rho_in.convert_to<double>(), two_pi * (j + 0.5) / 32);
            cdouble h = h_eval_fast(d, w);
            if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
                throw Error(ErrorKind::InvalidParameter,
                            "h is not finite on |w| = rho_in; raise rho_in above the continuation radius");
        }
    }
    return cfg;
}

ExtValue h_eval(const DomainModel& d, const Complex& w, const AnnulusConfig& cfg, Complex* derivative)
{
    Real m = cabs(w);
    Real slack = pow2(-40);
    if (m < cfg.rho_in * (1 - slack) || m * cfg.rho_in > 1 + slack)
        throw Error(ErrorKind::DomainError, "w outside the working annulus");
    const MapBackend& maps = *d.maps;
    if (!maps.has_continuation()) {
        if (abs(m - 1) > pow2(16 - int(precision_bits())))
            throw Error(ErrorKind::InteriorMapUnavailable, d.name + ": h is only available on |w| = 1");
        Complex z = d.psi(w);
        if (derivative)
            *derivative = d.varphi_prime(z) * d.psi_prime(w);
        return {d.varphi(z), false};
    }
    if (m >= 1 || maps.h_closed_form())
        return maps.h_direct(w, derivative);
    Complex u = Complex(1) / std::conj(w);
    Complex du;
    ExtValue hu = maps.h_direct(u, derivative ? &du : nullptr);
    if (hu.infinite) {
        if (derivative)
            *derivative = Complex(0);
        return {Complex(0), false};
    }
    Complex g = std::conj(hu.value);
    if (g == Complex(0))
        return {Complex(0), true};
    if (derivative)
        *derivative = std::conj(du) / (w * w * g * g);
    return {Complex(1) / g, false};
}

cdouble h_eval_fast(const DomainModel& d, cdouble w, cdouble* derivative)
{
    const MapBackend& maps = *d.maps;
    if (std::abs(w) >= 1 || maps.h_closed_form())
        return maps.h_direct_fast(w, derivative);
    cdouble u = 1.0 / std::conj(w);
    cdouble du;
    cdouble hu = maps.h_direct_fast(u, derivative ? &du : nullptr);
    cdouble g = std::conj(hu);
    if (derivative)
        *derivative = std::conj(du) / (w * w * g * g);
    return 1.0 / g;
}

int annulus_zero_count(const DomainModel& d, const Complex& z, const Real& r1, const Real& r2,
                       const AnnulusConfig& cfg)
{
    if (!(r1 < r2) || r1 < cfg.rho_in || r2 * cfg.rho_in > 1)
        throw Error(ErrorKind::DomainError, "ring must lie inside the working annulus");
    cdouble v = to_cdouble(d.varphi(z));
    bool degenerate = false;
    int n = count_ring(d, v, r1.convert_to<double>(), r2.convert_to<double>(), ring_poles(d, cfg.rho_in),
                       cfg.circle_samples, degenerate);
    if (degenerate)
        throw Error(ErrorKind::ContourDegenerate, "zero of f_z on or too near the ring boundary");
    if (n < 0)
        throw Error(ErrorKind::ContourDegenerate, "negative zero count; pole bookkeeping inconsistent");
    return n;
}

ContinuationResult classify_point(const DomainModel& d, const Complex& z, const AnnulusConfig& cfg)
{
    if (!d.inside(to_cdouble(z)))
        throw Error(ErrorKind::DomainError, "classify_point needs an interior point");
    if (!d.maps->has_continuation())
        throw Error(ErrorKind::InteriorMapUnavailable, d.name + ": interior map has no continuation");
    Complex v = d.varphi(z);
    cdouble vd = to_cdouble(v);
    if (1 - std::abs(vd) < cfg.delta_edge.convert_to<double>())
        throw Error(ErrorKind::NearBoundaryInconclusive,
                    "|varphi(z)| = 1 - " + to_sci(Real(1 - std::abs(vd)), 3) + " lies within delta_edge of the circle");
    std::vector<HPole> poles = ring_poles(d, cfg.rho_in);

    double a = cfg.rho_in.convert_to<double>();
    double b = 1 - cfg.delta_edge.convert_to<double>();
    int total = -1;
    for (int j = 0; j <= cfg.max_jitters; ++j) {
        bool degenerate = false;
        double aj = a * (1 + 1e-3 * j);
        double bj = b - 1e-3 * cfg.delta_edge.convert_to<double>() * j;
        int n = count_ring(d, vd, aj, bj, poles, cfg.circle_samples, degenerate);
        if (!degenerate) {
            total = n;
            a = aj;
            b = bj;
            break;
        }
    }
    if (total < 0)
        throw Error(ErrorKind::ClassificationFailure, "ring contour degenerate after all jitters");

    ContinuationResult res;
    res.z = z;
    res.ring_count = total;
    res.r = cfg.rho_in;
    if (total == 0)
        return res;

    Tracer tr{d, vd};
    const double off = 0.0123;
    std::vector<std::pair<Sector, int>> work;
    for (int k = 0; k < 8; ++k) {
        Sector s{a, b, off + two_pi * k / 8, off + two_pi * (k + 1) / 8};
        std::optional<int> w = sector_winding(tr, s);
        if (!w)
            throw Error(ErrorKind::ClassificationFailure, "initial sector contour degenerate");
        int c = *w + poles_inside(poles, s);
        if (c > 0)
            work.push_back({s, c});
    }
    std::vector<std::pair<cdouble, int>> found;
    int guard = 0;
    while (!work.empty()) {
        if (++guard > 20000)
            throw Error(ErrorKind::ClassificationFailure, "sector subdivision did not isolate the zeros");
        auto [s, c] = work.back();
        work.pop_back();
        if (s.size() < 0.05) {
            cdouble w0 = s.centre();
            if (c == 1 && newton_fast(d, vd, w0, 1) && s.contains(w0, 1e-12)) {
                found.push_back({w0, 1});
                continue;
            }
            if (c > 1 && s.size() < 1e-7) {
                newton_fast(d, vd, w0, c);
                found.push_back({w0, c});
                continue;
            }
        }
        bool radial = (s.b - s.a) >= (s.t1 - s.t0) * s.b;
        static const double fr[] = {0.5, 0.47, 0.53, 0.44, 0.56, 0.41, 0.59};
        bool done = false;
        for (double f : fr) {
            Sector lo = s, hi = s;
            if (radial) {
                double m = s.a + f * (s.b - s.a);
                lo.b = m;
                hi.a = m;
            } else {
                double m = s.t0 + f * (s.t1 - s.t0);
                lo.t1 = m;
                hi.t0 = m;
            }
            std::optional<int> wl = sector_winding(tr, lo);
            if (!wl)
                continue;
            int cl = *wl + poles_inside(poles, lo);
            int ch = c - cl;
            if (cl < 0 || ch < 0)
                continue;
            if (cl > 0)
                work.push_back({lo, cl});
            if (ch > 0)
                work.push_back({hi, ch});
            done = true;
            break;
        }
        if (!done)
            throw Error(ErrorKind::ClassificationFailure, "sector split contour degenerate after all jitters");
    }

    int sum = 0;
    for (const auto& [w, m] : found) {
        res.zeros.push_back(polish(d, v, w, m, cfg));
        sum += m;
    }
    if (sum != total)
        throw Error(ErrorKind::ClassificationFailure, "subdivision found " + std::to_string(sum) +
                                                          " zeros but the ring count is " + std::to_string(total));
    for (const auto& rr : res.zeros)
        if (rr.multiplicity == 1 && !(rr.residual < cfg.newton_tol))
            throw Error(ErrorKind::ClassificationFailure, "Newton polish stalled at residual " + to_sci(rr.residual, 4));

    Real rmax(0);
    for (const auto& rr : res.zeros)
        if (cabs(rr.w) > rmax)
            rmax = cabs(rr.w);
    int p = 0;
    const RootRecord* top = nullptr;
    for (const auto& rr : res.zeros)
        if (cabs(rr.w) >= rmax * (1 - cfg.tie_window)) {
            p += rr.multiplicity;
            top = &rr;
        }
    if (rmax >= Real(b) * (1 - cfg.tie_window))
        throw Error(ErrorKind::NearBoundaryInconclusive, "largest zero sits on the outer working circle");
    res.p = p;
    res.r = rmax;
    if (p == 1) {
        cdouble wt = to_cdouble(top->w);
        double sep = 1e-3;
        for (const auto& rr : res.zeros)
            if (&rr != top)
                sep = std::min(sep, 0.3 * std::abs(to_cdouble(rr.w) - wt));
        for (const auto& pl : poles)
            sep = std::min(sep, 0.3 * std::abs(to_cdouble(pl.location) - wt));
        if (circle_winding(tr, wt, sep) == 1) {
            res.phi1 = top->w;
            res.in_omega_star = true;
        }
    }
    return res;
}

PhiValue Phi_full(const DomainModel& d, const Complex& z, const AnnulusConfig& cfg)
{
    cdouble zd = to_cdouble(z);
    if (d.distance_to_corners(zd) < 1e-12)
        throw Error(ErrorKind::NotInOmegaStar, "corners are excluded from Omega*");
    PhiValue out;
    if (!d.inside(zd)) {
        out.value = d.phi(z);
        out.derivative = d.phi_prime(z);
        return out;
    }
    ContinuationResult c = classify_point(d, z, cfg);
    if (!c.phi1)
        throw Error(ErrorKind::NotInOmegaStar, "interior point in stratum p = " + std::to_string(c.p));
    Complex dh;
    h_eval(d, *c.phi1, cfg, &dh);
    out.value = *c.phi1;
    out.derivative = d.varphi_prime(z) / dh;
    out.interior = true;
    return out;
}

Complex Phi_eval(const DomainModel& d, const Complex& z, const AnnulusConfig& cfg) { return Phi_full(d, z, cfg).value; }

void write_raster(std::ostream& out, const DomainModel& d, const AnnulusConfig& cfg, const RasterSpec& spec)
{
    if (spec.nx < 1 || spec.ny < 1)
        throw Error(ErrorKind::InvalidParameter, "raster needs at least one pixel per axis");
    auto [x0, x1, y0, y1] = d.bounding_box();
    out << "ix,iy,x,y,region,p,r,in_omega_star\n";
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix) {
            double x = x0 + (x1 - x0) * (ix + 0.5) / spec.nx;
            double y = y0 + (y1 - y0) * (iy + 0.5) / spec.ny;
            cdouble zd(x, y);
            out << ix << ',' << iy << ',' << to_decimal(x) << ',' << to_decimal(y) << ',';
            if (!d.inside(zd)) {
                out << "exterior,,,1\n";
                continue;
            }
            try {
                ContinuationResult c = classify_point(d, to_complex(zd), cfg);
                out << "interior," << c.p << ',' << to_sci(c.r, 17) << ',' << (c.in_omega_star ? 1 : 0) << '\n';
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NearBoundaryInconclusive && e.kind() != ErrorKind::ClassificationFailure)
                    throw;
                out << "inconclusive,,,0\n";
            }
        }
}

} // namespace bergman
