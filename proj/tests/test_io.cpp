#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "subspectra/errors.hpp"
#include "subspectra/io.hpp"

using namespace subspectra;

TEST_CASE("reals round trip bit for bit") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 300));
        CHECK(parse_real(format_real(x)) == x);
    }
    CHECK(format_real(INFINITY) == "inf");
    CHECK(format_real(-INFINITY) == "-inf");
    CHECK(format_real(NAN) == "nan");
    CHECK(std::isnan(parse_real("nan")));
    CHECK(parse_real("-inf") == -INFINITY);
    CHECK_THROWS_AS(parse_real("1.5x"), ConfigError);
    CHECK_THROWS_AS(parse_real(""), ConfigError);
}

TEST_CASE("CSV tables with metadata") {
    CsvTable t;
    t.meta = {{"model", "ss-system"}, {"note", "a: b"}};
    t.columns = {"x", "y"};
    t.rows = {{"1", "2"}, {"3", "4"}};
    std::stringstream ss;
    write_csv(ss, t);
    CHECK(ss.str() == "# model: ss-system\n# note: a: b\nx,y\n1,2\n3,4\n");
    const auto r = read_csv(ss);
    CHECK(r.meta == t.meta);
    CHECK(r.columns == t.columns);
    CHECK(r.rows == t.rows);
    CHECK(*r.meta_value("note") == "a: b");
    CHECK(r.meta_value("absent") == nullptr);
    CHECK(r.real(1, "y") == 4.0);
    CHECK_THROWS_AS(r.real(0, "z"), ConfigError);
    std::stringstream bad("a,b\n1\n");
    CHECK_THROWS_AS(read_csv(bad), ConfigError);
    std::stringstream empty("# only: meta\n");
    CHECK_THROWS_AS(read_csv(empty), ConfigError);
}

TEST_CASE("scan CSV round trip") {
    ModelSpec m;
    m.kind = ModelKind::SsSystem;
    m.a = ModelAParams::system(ReactionMatrix(0.5, -3.0 / 16, 8, -1), 30, AnomalousExponent::parse_gamma("5/6"));
    const auto s = scan(m, {0.0, 0.5, 1.0, 1.5});
    std::stringstream ss;
    write_csv(ss, scan_to_csv(s));
    const auto t = read_csv(ss);
    CHECK(t.columns == std::vector<std::string>{"q", "re_s", "im_s", "class", "multiplicity", "source"});
    const auto back = scan_from_csv(t);
    CHECK(back.model == ModelKind::SsSystem);
    CHECK(back.lambda_sup == s.lambda_sup);
    REQUIRE(back.points.size() == s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        CHECK(back.points[i].q == s.points[i].q);
        CHECK(back.points[i].s == s.points[i].s);
        CHECK(back.points[i].cls == s.points[i].cls);
        CHECK(back.points[i].multiplicity == s.points[i].multiplicity);
        CHECK(back.points[i].source == s.points[i].source);
    }
    CHECK(back.grid == s.grid);
    CHECK(compute_lambda_sup(back.points) == back.lambda_sup);
}

TEST_CASE("enumeration names parse back") {
    for (auto c : {SpectrumClass::Spectrum, SpectrumClass::PseudoSpectrum, SpectrumClass::OutsideBranch})
        CHECK(parse_spectrum_class(to_string(c)) == c);
    for (auto p : {PointSource::polyroot, PointSource::continuation, PointSource::asymptotic, PointSource::scaled_curve})
        CHECK(parse_point_source(to_string(p)) == p);
    CHECK_THROWS_AS(parse_spectrum_class("Other"), ConfigError);
}

TEST_CASE("JSON reals and complex numbers") {
    CHECK(json_real(1.5).is_number());
    CHECK(json_real(INFINITY) == "inf");
    CHECK(real_from_json(json_real(-INFINITY)) == -INFINITY);
    const cplx z(0.1, -1e-300);
    CHECK(complex_from_json(nlohmann::json::parse(json_complex(z).dump())) == z);
    CHECK_THROWS_AS(complex_from_json(nlohmann::json::array({1})), ConfigError);
    CHECK_THROWS_AS(real_from_json(nlohmann::json::object()), ConfigError);
}

TEST_CASE("threshold JSON") {
    const ReactionMatrix A(0.5, -3.0 / 16, 8, -1);
    const auto ja = thresholds_to_json(thresholds_model_a(A, 0.1));
    CHECK(ja["d_c"]["value"].get<double>() == doctest::Approx(19.798).epsilon(1e-4));
    CHECK(ja["d_tilde_delta_inf"]["case"] == "larger-root");
    CHECK(ja["d_c"].contains("equation"));
    const auto jb = thresholds_to_json(thresholds_model_b(A, 0.8), critical_ratio(A));
    CHECK(jb["d_gamma"]["value"].get<double>() == doctest::Approx(136.17679).epsilon(1e-6));
    CHECK(jb["case"] == "cc");
    const auto low = thresholds_to_json(thresholds_model_b(A, 0.2), critical_ratio(A));
    CHECK(low["d_gamma"]["value"].is_null());
    CHECK(low["reason"] == "below minimal anomalous exponent");
}

TEST_CASE("decay and convergence JSON") {
    DecayEstimate e;
    e.kind = DecayKind::AlgebraicDecay;
    e.poly_power = -1.5;
    e.coefficient = {cplx(0.25, 0), cplx(0)};
    const auto j = decay_to_json(e);
    CHECK(j["kind"] == "AlgebraicDecay");
    CHECK(j["poly_power"].get<double>() == -1.5);
    CHECK(j["coefficient"].size() == 1);
    ConvergenceEntry c;
    c.gamma = "5/6";
    const auto jc = convergence_to_json({c});
    CHECK(jc[0]["distance"].is_null());
}

TEST_CASE("time series CSV") {
    GLSeries s;
    s.components = 2;
    s.t = {1.0, 2.0};
    s.v = {Vec2c{cplx(1.0), cplx(-2.0)}, Vec2c{cplx(0.5), cplx(0.0, 0.25)}};
    s.shift = {cplx(-1.0), cplx(0.0)};
    const auto t = series_to_csv(s);
    CHECK(t.columns == std::vector<std::string>{"t", "abs_u1", "abs_u2", "log_abs_u1", "log_abs_u2"});
    CHECK(t.real(1, "abs_u1") == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-14));
    CHECK(t.real(0, "log_abs_u2") == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}
