#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "perifsi/config.hpp"
#include "perifsi/csv.hpp"
#include "perifsi/errors.hpp"
#include "perifsi/run.hpp"

using namespace perifsi;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("perifsi_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Small enough for a run to finish in about a second.
const char* kSmall = R"(
[discretization]
N_z = 4
n_interior = 6
stokes_radial = 4
stokes_axial = 8
N_t = 16
)";

int line_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

TEST(Config, EmptyTextGivesDefaults) {
    const RunConfig c = parse_config("");
    EXPECT_EQ(c, RunConfig{});
    EXPECT_EQ(parse_config("[geometry]\n[physics]\n\n# nothing\n"), RunConfig{});
    EXPECT_EQ(c.rho_f, 1.0);
    EXPECT_EQ(c.mu, 1.0);
    EXPECT_EQ(c.rho_s_h, 1.0);
    EXPECT_EQ(c.n_t, 256);
}

TEST(Config, ValidationNamesTheInvariant) {
    try {
        parse_config("[geometry]\nR = -1\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_STREQ(e.what(), "R > 0");
    }
    EXPECT_THROW(parse_config("N_t = 0"), ValidationError);
    EXPECT_THROW(parse_config("relaxation = 1.5"), ValidationError);
    EXPECT_THROW(parse_config("mu = 2"), ValidationError);
    EXPECT_THROW(parse_config("T = 0"), ValidationError);
}

TEST(Config, ParseErrorsCarryLineNumbers) {
    EXPECT_EQ(line_of([] { parse_config("[geometry]\nR = 1\nRR = 2\n"); }), 3);
    EXPECT_EQ(line_of([] { parse_config("\n[nowhere]\n"); }), 2);
    EXPECT_EQ(line_of([] { parse_config("[geometry]\nN_z = 4\n"); }), 2);  // key of another section
    EXPECT_EQ(line_of([] { parse_config("L = 2\nL = 3\n"); }), 2);
    EXPECT_EQ(line_of([] { parse_config("[ivp]\ndt = fast\n"); }), 2);
    EXPECT_EQ(line_of([] { parse_config("model = rigid\n"); }), 1);
    EXPECT_EQ(line_of([] { parse_config("just text\n"); }), 1);
    EXPECT_EQ(line_of([] { parse_config("[run\n"); }), 1);
}

TEST(Config, SectionlessKeysFindTheirSection) {
    const RunConfig c = parse_config("L = 6.5\ndelta_visc = 0 ; inline comment\nP_in = 0.1:2, 0.03\nseed = 77\n");
    EXPECT_EQ(c.geometry.L, 6.5);
    EXPECT_EQ(c.solid.delta_visc, 0.0);
    ASSERT_EQ(c.p_in.size(), 2u);
    EXPECT_EQ(c.p_in[0], (Harmonic{0.1, 2, 0.0}));
    EXPECT_EQ(c.p_in[1], (Harmonic{0.03, 1, 0.0}));
    EXPECT_EQ(c.seed, 77u);
}

TEST(Config, CanonicalFormRoundTrips) {
    RunConfig c = parse_config(kSmall);
    c.mode = RunMode::Ivp;
    c.model = Model::SolidMode;
    c.geometry.H = 0.1 + 0.2;  // not exactly representable in short decimal
    c.p_in = {{0.05, 1, 0.0}, {-1e-3, 3, 0.25}};
    c.p_out_samples = {0.0, 1.0 / 3.0, -2.5};
    c.outer.epsilon = 0.03;
    c.ivp_velocity = 0.05;
    const std::string text = emit_config(c);
    const RunConfig back = parse_config(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(emit_config(back), text);
}

TEST(Forcing, SampledSeriesInterpolates) {
    const std::vector<double> samples = {0.2, 1.0, -0.4, 0.0, 0.7, -1.1, 0.3};
    const BoundaryForcing f(2.0, interpolate_samples(samples), {});
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        EXPECT_NEAR(f.p_in(2.0 * j / samples.size()), samples[j], 1e-14);
        sum_sq += samples[j] * samples[j];
    }
    // Parseval for the trigonometric interpolant (odd count, so no Nyquist term).
    EXPECT_NEAR(f.l2_squared(), 2.0 * sum_sq / samples.size(), 1e-13);
    const RunConfig c = parse_config("P_in_samples = 1, 1, 1, 1");
    EXPECT_NEAR(c.forcing().p_in(0.37), 1.0, 1e-15);
    EXPECT_FALSE(c.forcing().is_zero());
}

TEST(Forcing, HarmonicNormsAndZero) {
    const BoundaryForcing f(1.0, {{0.3, 1}, {0.1, 1}, {0.0, 2, 0.5}}, {{0.2, 3}});
    EXPECT_NEAR(f.l2_squared(), 0.5 * (0.16 + 0.25 + 0.04), 1e-15);
    EXPECT_TRUE(BoundaryForcing(1.0, {{0.0, 1}}, {}).is_zero());
    EXPECT_TRUE(f.scaled(0.0).is_zero());
    EXPECT_NEAR(f.p_in(0.25), 0.4 - 0.5, 1e-15);
    EXPECT_THROW(BoundaryForcing(1.0, {{0.1, -1}}, {}), ValidationError);
}

TEST(Csv, NumbersRoundTrip) {
    for (double x : {0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) {
        const std::string s = format_double(x);
        EXPECT_EQ(s.find(','), std::string::npos);
        EXPECT_EQ(parse_csv("x\n" + s + "\n").number(0, "x"), x);
    }
    EXPECT_TRUE(std::isnan(parse_csv("x\nnan\n").number(0, "x")));
}

TEST(Csv, WriteThenRead) {
    const fs::path dir = scratch_dir("csv");
    fs::create_directories(dir);
    const CsvTable t{{"name", "value"}, {{"a", "1.5"}, {"b", ""}}};
    write_csv(dir / "t.csv", t);
    EXPECT_EQ(slurp(dir / "t.csv"), "name,value\na,1.5\nb,\n");
    const CsvTable back = read_csv(dir / "t.csv");
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.rows, t.rows);
    EXPECT_THROW(write_csv(dir / "bad.csv", {{"x"}, {{"1,2"}}}), ValidationError);
    EXPECT_THROW(parse_csv("a,b\n1\n"), ParseError);
}

TEST(Run, ZeroForcingPeriodicRunIsAllZero) {
    RunConfig c = parse_config(std::string(kSmall) + "[forcing]\nP_in =\n");
    const fs::path dir = scratch_dir("zero");
    std::ostringstream log, err;
    EXPECT_EQ(run(c, dir, log, err), kExitOk);
    EXPECT_TRUE(err.str().empty());
    const CsvTable coef = read_csv(dir / "coefficients.csv");
    ASSERT_EQ(coef.rows.size(), 17u);
    for (std::size_t m = 0; m < coef.rows.size(); ++m)
        for (std::size_t k = 1; k < coef.header.size(); ++k) EXPECT_EQ(coef.number(m, coef.header[k]), 0.0);
    const CsvTable summary = read_csv(dir / "summary.csv");
    EXPECT_EQ(summary.number(0, "outer_iters"), 1.0);
    EXPECT_TRUE(std::isnan(summary.number(0, "diffusion_ratio")));
}

TEST(Run, PeriodicArtifactsAreDeterministicAndReadable) {
    const RunConfig c = parse_config(kSmall);
    const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
    std::ostringstream log, err;
    ASSERT_EQ(run(c, a, log, err), kExitOk) << err.str();
    ASSERT_EQ(run(c, b, log, err), kExitOk) << err.str();
    for (const char* f : {"energies.csv", "coefficients.csv", "summary.csv"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;

    const CsvTable e = read_csv(a / "energies.csv");
    EXPECT_EQ(e.header, (std::vector<std::string>{"t", "E_kin", "E_el", "E", "D", "work_rate", "balance_residual"}));
    ASSERT_EQ(e.rows.size(), 17u);
    double sup_e = 0.0;
    for (std::size_t m = 0; m < e.rows.size(); ++m) {
        EXPECT_NEAR(e.number(m, "E"), e.number(m, "E_kin") + e.number(m, "E_el"), 1e-15);
        EXPECT_GE(e.number(m, "D"), 0.0);
        sup_e = std::max(sup_e, e.number(m, "E"));
    }
    const CsvTable s = read_csv(a / "summary.csv");
    EXPECT_EQ(s.number(0, "sup_E"), sup_e);
    EXPECT_GT(s.number(0, "diffusion_ratio"), 0.0);
    EXPECT_LE(s.number(0, "periodic_residual"), 1e-8);
}

TEST(Run, ErrorsBecomeExitCodes) {
    std::ostringstream log;
    {
        std::ostringstream err;
        const RunConfig c = parse_config(std::string(kSmall) + "[physics]\nmodel = solid-mode\ndelta_visc = 0\n");
        EXPECT_EQ(run(c, scratch_dir("resonant"), log, err), kExitResonance);
        const std::string text = err.str();
        EXPECT_EQ(text.rfind("error=SingularMonodromy exit=4 ", 0), 0u) << text;
        EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
    }
    {
        std::ostringstream err;
        const RunConfig c = parse_config(std::string(kSmall) + "[physics]\nmodel = solid-mode\n");
        EXPECT_EQ(run(c, scratch_dir("damped"), log, err), kExitOk) << err.str();
    }
    {
        std::ostringstream err;
        const RunConfig c = parse_config(std::string(kSmall) + "[forcing]\nP_in = 50\n");
        EXPECT_EQ(run(c, scratch_dir("gate"), log, err), kExitNoConvergence);
        EXPECT_EQ(err.str().rfind("error=NoConvergence exit=3 ", 0), 0u) << err.str();
    }
}

TEST(Run, IvpReportsDomainViolation) {
    RunConfig c = parse_config(std::string(kSmall) + "[run]\nmode = ivp\n[forcing]\nP_in = 20000\n");
    const fs::path dir = scratch_dir("violation");
    std::ostringstream log, err;
    EXPECT_EQ(run(c, dir, log, err), kExitDomainViolation) << err.str();
    const CsvTable status = read_csv(dir / "ivp_status.csv");
    EXPECT_EQ(status.rows.at(0).at(0), "domain_violation");
    const double t = status.number(0, "t_reached");
    EXPECT_GT(t, 0.0);
    EXPECT_LT(t, 1.0);
    const CsvTable e = read_csv(dir / "energies.csv");
    EXPECT_EQ(e.number(e.rows.size() - 1, "t"), t);
}

}  // namespace
