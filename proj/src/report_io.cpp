#include "bergman/report_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>

namespace bergman {

using nlohmann::json;

std::string csv_double(double x)
{
    if (std::isnan(x))
        return "";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

namespace {

std::string num(const Real& x) { return to_sci(x, 20); }

json pair_of(const Complex& z) { return json::array({to_decimal(z.real()), to_decimal(z.imag())}); }

Complex complex_of(const json& p)
{
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
        throw Error(ErrorKind::InvalidParameter, "expected a [re, im] pair of decimal strings");
    return Complex(parse_real(p[0].get<std::string>()), parse_real(p[1].get<std::string>()));
}

} // namespace

std::string system_to_json(const OrthonormalSystem& sys)
{
    json j;
    j["degree_max"] = sys.degree_max;
    j["precision_bits"] = sys.precision;
    json lam = json::array();
    for (const auto& l : sys.leading)
        lam.push_back(to_decimal(l));
    j["lambda"] = lam;
    json rows = json::array();
    for (int n = 0; n <= sys.degree_max; ++n) {
        json row = json::array();
        for (int k = 0; k <= n; ++k)
            row.push_back(pair_of(sys.coeffs(n, k)));
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j.dump() + "\n";
}

namespace {

OrthonormalSystem system_of(const json& j)
{
    OrthonormalSystem sys;
    sys.degree_max = j.at("degree_max").get<int>();
    sys.precision = j.at("precision_bits").get<unsigned>();
    PrecisionScope scope(sys.precision);
    const int n1 = sys.degree_max + 1;
    sys.coeffs = CMatrix<Real>::Zero(n1, n1);
    const json& rows = j.at("rows");
    if (int(rows.size()) != n1)
        throw Error(ErrorKind::InvalidParameter, "system JSON: row count does not match degree_max");
    for (int n = 0; n < n1; ++n) {
        if (int(rows[n].size()) != n + 1)
            throw Error(ErrorKind::InvalidParameter, "system JSON: row " + std::to_string(n) + " has wrong length");
        for (int k = 0; k <= n; ++k)
            sys.coeffs(n, k) = complex_of(rows[n][k]);
    }
    for (const auto& s : j.at("lambda"))
        sys.leading.push_back(parse_real(s.get<std::string>()));
    if (int(sys.leading.size()) != n1)
        throw Error(ErrorKind::InvalidParameter, "system JSON: lambda count does not match degree_max");
    return sys;
}

} // namespace

OrthonormalSystem system_from_json(const std::string& text)
{
    try {
        return system_of(json::parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidParameter, std::string("system JSON: ") + e.what());
    }
}

void write_lambda_csv(std::ostream& out, const OrthonormalSystem& sys, const Real& capacity)
{
    out << "n,lambda,lambda_over_sqrt_n1_gamma_n1\n";
    for (int n = 0; n <= sys.degree_max; ++n) {
        Real g = sqrt(Real(n + 1)) * pow(capacity, n + 1);
        out << n << ',' << num(sys.leading[n]) << ',' << num(sys.leading[n] / g) << '\n';
    }
}

void write_tables_csv(std::ostream& out, const CoefficientTables& t)
{
    out << "n,eps,beta,identity_residual\n";
    for (std::size_t n = 0; n < t.identity.size(); ++n)
        out << n << ',' << num(t.eps[n]) << ',' << num(t.beta[n]) << ',' << num(t.identity[n]) << '\n';
}

void write_alpha_csv(std::ostream& out, const CMatrix<Real>& alpha)
{
    out << "n,k,re,im,abs\n";
    for (int n = 0; n < alpha.rows(); ++n)
        for (int k = 0; k < alpha.cols(); ++k) {
            const Complex& a = alpha(n, k);
            out << n << ',' << k << ',' << num(a.real()) << ',' << num(a.imag()) << ',' << num(cabs(a)) << '\n';
        }
}

std::string tables_to_json(const CoefficientTables& t)
{
    json j;
    j["J"] = t.J;
    j["alpha_lower_max"] = to_decimal(t.alpha_lower_max);
    j["fit_alpha_C"] = to_decimal(t.fit_alpha_C);
    j["fit_h_B"] = to_decimal(t.fit_h_B);
    Real worst(0);
    for (const auto& r : t.identity)
        worst = std::max(worst, Real(abs(r)));
    j["identity_residual_max"] = to_decimal(worst);
    json h = json::object();
    for (const auto& [n, row] : t.h) {
        json r = json::array();
        for (const auto& v : row)
            r.push_back(pair_of(v));
        h[std::to_string(n)] = r;
    }
    j["h"] = h;
    return j.dump(2) + "\n";
}

void write_deviations_header(std::ostream& out) { out << "n,re_z,im_z,regime,abs_A\n"; }

void write_deviation_row(std::ostream& out, const DeviationRecord& r)
{
    cdouble z = to_cdouble(r.z);
    out << r.n << ',' << csv_double(z.real()) << ',' << csv_double(z.imag()) << ',' << regime_name(r.regime) << ','
        << num(cabs(r.A)) << '\n';
}

void write_zeros_header(std::ostream& out) { out << "n,re,im,dist_gamma,dist_L,dist_corners\n"; }

void write_zero_rows(std::ostream& out, const ZeroSummary& s)
{
    for (const auto& r : s.rows)
        out << s.n << ',' << csv_double(r.z.real()) << ',' << csv_double(r.z.imag()) << ',' << csv_double(r.dist_gamma)
            << ',' << csv_double(r.dist_L) << ',' << csv_double(r.dist_corners) << '\n';
}

void write_zero_summary_header(std::ostream& out)
{
    out << "n,max_residual,sweeps,max_dist_gamma,min_dist_corners,max_abs_re,interior";
    for (int b = 0; b < 11; ++b)
        out << ",phi_bin" << b;
    out << '\n';
}

void write_zero_summary_row(std::ostream& out, const ZeroSummary& s, const ZeroSet& zs)
{
    out << s.n << ',' << to_sci(zs.max_residual, 6) << ',' << zs.sweeps << ',' << csv_double(s.max_dist_gamma) << ','
        << csv_double(s.min_dist_corners) << ',' << csv_double(s.max_abs_re) << ',' << s.interior;
    for (int c : s.phi_histogram)
        out << ',' << c;
    out << '\n';
}

void write_profile_header(std::ostream& out) { out << "n,re_z,im_z,nth_root,running_max,r\n"; }

void write_profile_rows(std::ostream& out, const Complex& z, const RateFit& f)
{
    cdouble zd = to_cdouble(z);
    for (std::size_t i = 0; i < f.n.size(); ++i) {
        out << f.n[i] << ',' << csv_double(zd.real()) << ',' << csv_double(zd.imag()) << ',' << num(f.value[i]) << ','
            << num(f.running_max[i]) << ',';
        if (f.reference >= 0)
            out << num(f.reference);
        out << '\n';
    }
}

} // namespace bergman
