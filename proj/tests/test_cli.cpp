#include "bergman/commands.hpp"
#include "bergman/config.hpp"
#include "bergman/report_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bergman;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    fs::path p = fs::current_path() / "cli_scratch" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int run_exe(const std::string& args)
{
    std::string cmd = std::string("\"") + BERGMAN_LAB_EXE + "\" " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("lcg stream")
    {
        Lcg g(1);
        CHECK(g.next() == 7806831264735756412ULL);
        CHECK(g.next() == 9396908728118811419ULL);
        CHECK(g.next() == 11960119808228829710ULL);
        Lcg u(1);
        CHECK(u.uniform() == 0.42320917087271326);
        CHECK(u.uniform() == 0.5094074428837206);
        CHECK(u.uniform() == 0.6483593939634306);
    }

    TEST_CASE("config defaults")
    {
        ExperimentConfig c = parse_config(R"({"domain":"ngon:N=4","degree_max":40})");
        CHECK(c.precision_bits == 256);
        CHECK(c.table_J == 20);
        CHECK(c.h_rows == std::vector<int>{10, 20});
        CHECK(c.exterior_points.size() == 3);
        CHECK(c.out_dir == "out");
        CHECK(c.seed == 1);
        CHECK_FALSE(c.verify_full);
        CHECK(parse_config(R"({"degree_max":100})").precision_bits == 464);
    }

    TEST_CASE("config errors")
    {
        for (const char* text :
             {"{", R"({"degree_max":"x"})", R"({"degree_max":0})", R"({"domain":"blob"})",
              R"({"precision_bits":64})", R"({"quadrature":{"nodes_per_panel":2}})", R"({"annulus":{"rho_in":"1.5"}})",
              R"({"annulus":{"rho_in":0.3}})", R"({"degree_max":8,"tables":{"J":8,"h_rows":[4]}})",
              R"({"verify_scope":"some"})", R"({"samples":{"interior":[["0.1"]]}})"}) {
            CAPTURE(text);
            try {
                parse_config(text);
                CHECK(false);
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::ConfigError);
            }
        }
    }

    TEST_CASE("random interior samples are reproducible and inside")
    {
        const char* text = R"({"domain":"lens","samples":{"random_interior":4}})";
        ExperimentConfig a = parse_config(text), b = parse_config(text);
        REQUIRE(a.interior_points.size() == 4);
        DomainModel d = make_lens();
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(a.interior_points[i] == b.interior_points[i]);
            cdouble z = to_cdouble(a.interior_points[i]);
            CHECK(d.inside(z));
            CHECK(d.boundary_distance(z) >= 0.05);
        }
        ExperimentConfig c = parse_config(R"({"domain":"lens","seed":2,"samples":{"random_interior":4}})");
        CHECK(c.interior_points[0] != a.interior_points[0]);
    }

    TEST_CASE("config echo parses back to the same config")
    {
        ExperimentConfig a = parse_config(
            R"({"domain":"ngon:N=3","degree_max":12,"samples":{"interior":[["0.1","-0.05"]]},"raster":{"nx":5,"ny":3}})");
        std::string echo = config_to_json(a);
        ExperimentConfig b = parse_config(echo);
        CHECK(config_to_json(b) == echo);
        CHECK(b.interior_points == a.interior_points);
        CHECK(b.raster.nx == 5);
    }

    TEST_CASE("system JSON round trip")
    {
        PrecisionScope ps(256);
        OrthonormalSystem s = orthonormalize(gram(make_regular_ngon(4), 8, {}));
        OrthonormalSystem t = system_from_json(system_to_json(s));
        CHECK(t.degree_max == 8);
        for (int n = 0; n <= 8; ++n) {
            CHECK(abs(t.leading[n] - s.leading[n]) < Real("1e-70"));
            for (int k = 0; k <= n; ++k)
                CHECK(cabs(t.coeffs(n, k) - s.coeffs(n, k)) < Real("1e-70"));
        }
        CHECK_THROWS_AS(system_from_json("[]"), Error);
    }

    TEST_CASE("in-process commands")
    {
        fs::path dir = scratch("inproc");
        put(dir / "c.json", R"({"domain":"disk","degree_max":6})");
        std::ostringstream out, err;
        CHECK(run_command("nope", (dir / "c.json").string(), std::nullopt, out, err) == 2);
        CHECK(run_command("ortho", (dir / "missing.json").string(), std::nullopt, out, err) == 2);
        CHECK(run_command("ortho", (dir / "c.json").string(), (dir / "o").string(), out, err) == 0);
        CHECK(fs::exists(dir / "o" / "system.json"));
        CHECK(fs::exists(dir / "o" / "config.json"));
        std::string lam = slurp(dir / "o" / "lambda.csv");
        CHECK(lam.rfind("n,lambda,lambda_over_sqrt_n1_gamma_n1\n", 0) == 0);
        CHECK(out.str().find("degree_max 6") != std::string::npos);
    }

    TEST_CASE("executable")
    {
        fs::path dir = scratch("exe");
        put(dir / "bad.json", R"({"domain":"ngon:N=4","degree_max":"x"})");
        CHECK(run_exe("zeros --config " + (dir / "bad.json").string()) == 2);
        CHECK(run_exe("zeros") == 2);
        CHECK(run_exe("frobnicate --config " + (dir / "bad.json").string()) == 2);

        put(dir / "sq.json", R"({"domain":"ngon:N=4","degree_max":6})");
        REQUIRE(run_exe("zeros --config " + (dir / "sq.json").string() + " --out " + (dir / "z").string()) == 0);
        std::istringstream zs(slurp(dir / "z" / "zeros.csv"));
        std::string line;
        std::getline(zs, line);
        CHECK(line == "n,re,im,dist_gamma,dist_L,dist_corners");
        int rows = 0;
        while (std::getline(zs, line))
            ++rows;
        CHECK(rows == 21);

        for (const char* o : {"a", "b"})
            REQUIRE(run_exe("ortho --config " + (dir / "sq.json").string() + " --out " + (dir / o).string()) == 0);
        CHECK(slurp(dir / "a" / "system.json") == slurp(dir / "b" / "system.json"));
        CHECK(slurp(dir / "a" / "lambda.csv") == slurp(dir / "b" / "lambda.csv"));
    }
}
