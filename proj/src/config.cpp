#include "bergman/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bergman {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

const json* find(const json& j, const char* key)
{
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

long long get_int(const json& j, const char* key, long long def)
{
    const json* v = find(j, key);
    if (!v)
        return def;
    if (v->is_number_integer())
        return v->get<long long>();
    if (v->is_string()) {
        try {
            std::size_t pos = 0;
            long long r = std::stoll(v->get<std::string>(), &pos);
            if (pos == v->get<std::string>().size())
                return r;
        } catch (const std::exception&) {
        }
    }
    bad(std::string("'") + key + "' must be an integer");
}

Real get_real(const json& j, const char* key, const Real& def)
{
    const json* v = find(j, key);
    if (!v)
        return def;
    if (!v->is_string())
        bad(std::string("'") + key + "' must be a decimal string");
    return parse_real(v->get<std::string>());
}

std::vector<Complex> get_points(const json& j, const char* key)
{
    std::vector<Complex> pts;
    const json* v = find(j, key);
    if (!v)
        return pts;
    if (!v->is_array())
        bad(std::string("'") + key + "' must be a list of [re, im] pairs");
    for (const auto& p : *v) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
            bad(std::string("'") + key + "' entries must be [\"re\", \"im\"] decimal strings");
        pts.emplace_back(parse_real(p[0].get<std::string>()), parse_real(p[1].get<std::string>()));
    }
    return pts;
}

json point_list(const std::vector<Complex>& pts)
{
    json a = json::array();
    for (const auto& z : pts)
        a.push_back({to_decimal(z.real()), to_decimal(z.imag())});
    return a;
}

// Interior points drawn uniformly from the bounding box, kept away from the boundary,
// rounded to 6 decimals so the echoed strings stay short.
std::vector<Complex> random_interior(const DomainModel& d, int count, std::uint64_t seed)
{
    std::vector<Complex> pts;
    Lcg rng(seed);
    auto [x0, x1, y0, y1] = d.bounding_box();
    int tries = 0;
    while (int(pts.size()) < count) {
        if (++tries > 100000)
            bad("could not draw interior sample points");
        double x = x0 + (x1 - x0) * rng.uniform();
        double y = y0 + (y1 - y0) * rng.uniform();
        cdouble z(std::round(x * 1e6) / 1e6, std::round(y * 1e6) / 1e6);
        if (!d.inside(z) || d.boundary_distance(z) < 0.05)
            continue;
        std::ostringstream xs, ys;
        xs.imbue(std::locale::classic());
        ys.imbue(std::locale::classic());
        xs.precision(6);
        ys.precision(6);
        xs << std::fixed << z.real();
        ys << std::fixed << z.imag();
        pts.emplace_back(parse_real(xs.str()), parse_real(ys.str()));
    }
    return pts;
}

} // namespace

ExperimentConfig parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object())
        bad("config must be a JSON object");

    ExperimentConfig c;
    if (const json* v = find(j, "domain")) {
        if (!v->is_string())
            bad("'domain' must be a string");
        c.domain = v->get<std::string>();
    }
    long long N = get_int(j, "degree_max", c.degree_max);
    if (N < 1 || N > 4096)
        bad("degree_max must be in [1, 4096]");
    c.degree_max = int(N);
    long long P = get_int(j, "precision_bits", std::max<long long>(256, 4 * N + 64));
    if (P < 128 || P > (1 << 20))
        bad("precision_bits must be at least 128");
    c.precision_bits = unsigned(P);
    set_precision_bits(c.precision_bits);

    if (const json* q = find(j, "quadrature")) {
        c.quadrature.nodes_per_panel = int(get_int(*q, "nodes_per_panel", c.quadrature.nodes_per_panel));
        c.quadrature.grading_levels = int(get_int(*q, "grading_levels", c.quadrature.grading_levels));
    }
    if (c.quadrature.nodes_per_panel < 4 || c.quadrature.grading_levels < 0)
        bad("quadrature needs nodes_per_panel >= 4 and grading_levels >= 0");

    c.annulus = AnnulusConfig{};
    if (const json* a = find(j, "annulus")) {
        c.annulus.rho_in = get_real(*a, "rho_in", c.annulus.rho_in);
        c.annulus.newton_tol = get_real(*a, "newton_tol", Real(0));
        c.annulus.circle_samples = int(get_int(*a, "circle_samples", c.annulus.circle_samples));
    }
    if (!(c.annulus.rho_in > 0 && c.annulus.rho_in < 1))
        bad("annulus.rho_in must lie in (0, 1)");

    if (const json* v = find(j, "seed")) {
        if (v->is_number_unsigned())
            c.seed = v->get<std::uint64_t>();
        else if (v->is_string() && !v->get<std::string>().empty() &&
                 v->get<std::string>().find_first_not_of("0123456789") == std::string::npos)
            c.seed = std::stoull(v->get<std::string>());
        else
            bad("'seed' must be a non-negative integer");
    }

    DomainModel d;
    try {
        d = parse_domain_spec(c.domain);
    } catch (const Error& e) {
        bad(std::string("bad domain: ") + e.what());
    }

    if (const json* s = find(j, "samples")) {
        c.interior_points = get_points(*s, "interior");
        c.exterior_points = get_points(*s, "exterior");
        c.random_interior = int(get_int(*s, "random_interior", 0));
    }
    if (c.random_interior < 0)
        bad("samples.random_interior must be >= 0");
    for (const auto& z : random_interior(d, c.random_interior, c.seed))
        c.interior_points.push_back(z);
    c.random_interior = 0;
    if (c.exterior_points.empty())
        for (int k = 0; k < 3; ++k) {
            Complex w = polar_unit(Real(2 * k + 1) * pi_value() / 3 + Real(3) / 10) * (Real(3) / 2);
            c.exterior_points.push_back(d.psi(w));
        }

    c.n_min = std::min(c.n_min, c.degree_max);
    if (const json* a = find(j, "asymptotics"))
        c.n_min = int(get_int(*a, "n_min", c.n_min));
    if (c.n_min < 1 || c.n_min > c.degree_max)
        bad("asymptotics.n_min must lie in [1, degree_max]");

    int half = c.degree_max / 2;
    c.table_J = half;
    c.h_rows = {std::max(0, half / 2), half};
    if (const json* t = find(j, "tables")) {
        c.table_J = int(get_int(*t, "J", c.table_J));
        if (const json* r = find(*t, "h_rows")) {
            if (!r->is_array())
                bad("tables.h_rows must be a list of integers");
            c.h_rows.clear();
            for (const auto& x : *r) {
                if (!x.is_number_integer())
                    bad("tables.h_rows must be a list of integers");
                c.h_rows.push_back(x.get<int>());
            }
        }
    }
    for (int n : c.h_rows)
        if (n < 0 || n + c.table_J > c.degree_max)
            bad("tables: h rows need n + J <= degree_max");
    if (c.table_J < 0)
        bad("tables.J must be >= 0");

    if (const json* r = find(j, "raster")) {
        c.raster.nx = int(get_int(*r, "nx", c.raster.nx));
        c.raster.ny = int(get_int(*r, "ny", c.raster.ny));
    }
    if (c.raster.nx < 1 || c.raster.ny < 1)
        bad("raster needs nx, ny >= 1");

    if (const json* o = find(j, "out")) {
        if (!o->is_string())
            bad("'out' must be a string");
        c.out_dir = o->get<std::string>();
    }
    if (const json* v = find(j, "verify_scope")) {
        if (!v->is_string() || (*v != "domain" && *v != "full"))
            bad("'verify_scope' must be \"domain\" or \"full\"");
        c.verify_full = *v == "full";
    }
    try {
        c.annulus = resolve_annulus(d, c.annulus);
    } catch (const Error& e) {
        bad(std::string("annulus: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        bad("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c)
{
    json j;
    j["domain"] = c.domain;
    j["precision_bits"] = c.precision_bits;
    j["degree_max"] = c.degree_max;
    j["quadrature"] = {{"nodes_per_panel", c.quadrature.nodes_per_panel},
                       {"grading_levels", c.quadrature.grading_levels}};
    j["annulus"] = {{"rho_in", to_decimal(c.annulus.rho_in)},
                    {"newton_tol", to_decimal(c.annulus.newton_tol)},
                    {"circle_samples", c.annulus.circle_samples}};
    j["samples"] = {{"interior", point_list(c.interior_points)},
                    {"exterior", point_list(c.exterior_points)},
                    {"random_interior", 0}};
    j["asymptotics"] = {{"n_min", c.n_min}};
    j["tables"] = {{"J", c.table_J}, {"h_rows", c.h_rows}};
    j["raster"] = {{"nx", c.raster.nx}, {"ny", c.raster.ny}};
    j["out"] = c.out_dir;
    j["seed"] = std::to_string(c.seed);
    j["verify_scope"] = c.verify_full ? "full" : "domain";
    return j.dump(2) + "\n";
}

} // namespace bergman
