#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frechet/spectral.hpp"
#include "oracle.hpp"

using namespace frechet;

TEST_CASE("independent model structure") {
    auto m = make_independent();
    REQUIRE(m.atoms().size() == 2);
    CHECK(m.atoms()[0].ratio() == 0.0);
    CHECK(std::isinf(m.atoms()[1].ratio()));
    CHECK(m.atoms()[0].gw() == 1.0);
    CHECK(m.atoms()[1].fw() == 1.0);
    CHECK(m.density() == nullptr);
    auto rep = check_model(m);
    CHECK(rep.int_f == 1.0);
    CHECK(rep.int_g == 1.0);
    CHECK(rep.standardized);
    CHECK(rep.ratio_nondecreasing);
}

TEST_CASE("three-atom family") {
    auto m = make_rho(0.3);
    REQUIRE(m.atoms().size() == 3);
    CHECK(m.atoms()[0].mass == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(m.atoms()[1].mass == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(m.atoms()[1].ratio() == 1.0);
    CHECK(check_model(m).standardized);

    CHECK(make_rho(0.0).atoms().size() == 1);  // full dependence: single atom
    CHECK(make_rho(1.0).atoms().size() == 2);  // independence: edge atoms only
    CHECK_THROWS_AS(make_rho(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_rho(1.5), std::invalid_argument);
    CHECK_THROWS_AS(make_rho(std::nan("")), std::invalid_argument);
}

TEST_CASE("logistic density values") {
    auto m = make_logistic(2.0);
    CHECK(m.atoms().empty());
    REQUIRE(m.density() != nullptr);
    const auto* d = m.density();
    CHECK(d->h(0.3, 0.7) == 1.0);
    // f(1/2) = (a-1) (1/2)^(a-1) (1 - (1/2)^a)^(-1/a) at a=2: 0.5/sqrt(0.75)
    CHECK(d->f(0.5, 0.5) == doctest::Approx(0.5 / std::sqrt(0.75)).epsilon(1e-14));
    CHECK(d->g(0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(check_model(m).standardized);
    CHECK(check_model(make_logistic(1.5)).standardized);
    CHECK(check_model(make_logistic(3.0)).standardized);

    CHECK_THROWS_AS(make_logistic(1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_logistic(0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_logistic(std::nan("")), std::invalid_argument);
}

TEST_CASE("mixed family structure") {
    auto half = make_mixed(0.5);
    CHECK(half.atoms().size() == 2);
    CHECK(half.density() != nullptr);
    CHECK(half.atoms()[0].mass == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(check_model(half).standardized);

    auto full = make_mixed(1.0);
    CHECK(full.atoms().empty());
    CHECK(check_model(full).standardized);

    auto none = make_mixed(0.0);
    CHECK(none.density() == nullptr);
    CHECK(none.atoms().size() == 2);

    CHECK_THROWS_AS(make_mixed(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(make_mixed(1.01), std::invalid_argument);
}

TEST_CASE("discrete construction sorts by ratio and standardizes") {
    double a[] = {0.8, 0.2};
    double b[] = {0.3, 0.7};
    auto m = make_discrete(a, b);
    REQUIRE(m.atoms().size() == 2);
    CHECK(m.atoms()[0].f == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(m.atoms()[0].g == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(m.atoms()[1].f == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(m.atoms()[0].s == 0.0);
    CHECK(m.atoms()[1].s == 1.0);
    CHECK(m.f_scale() == 1.0);
    CHECK(m.g_scale() == 1.0);
    CHECK(check_model(m).standardized);

    double a2[] = {8.0, 2.0};
    double b2[] = {3.0, 7.0};
    auto m2 = make_discrete(a2, b2);
    CHECK(m2.f_scale() == 10.0);
    CHECK(m2.atoms()[1].f == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(check_model(m2).standardized);

    double single_a[] = {3.0};
    double single_b[] = {2.0};
    auto m1 = make_discrete(single_a, single_b);
    CHECK(m1.atoms().size() == 1);
    CHECK(m1.atoms()[0].s == 0.5);
    CHECK(m1.atoms()[0].f == 1.0);
    CHECK(m1.atoms()[0].g == 1.0);
}

TEST_CASE("discrete rejects malformed input") {
    double a[] = {1.0, 2.0};
    double b3[] = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(make_discrete(a, std::span<const double>(b3, 3)), std::invalid_argument);
    double neg[] = {-1.0, 2.0};
    double ok[] = {1.0, 1.0};
    CHECK_THROWS_AS(make_discrete(neg, ok), std::invalid_argument);
    double z1[] = {0.0, 1.0};
    double z2[] = {0.0, 1.0};
    CHECK_THROWS_AS(make_discrete(z1, z2), std::invalid_argument);  // both-zero pair
    double zs[] = {0.0, 0.0};
    CHECK_THROWS_AS(make_discrete(zs, ok), std::invalid_argument);  // zero-sum side
    double t1[] = {1.0, 2.0};
    double t2[] = {2.0, 4.0};
    CHECK_THROWS_AS(make_discrete(t1, t2), std::invalid_argument);  // tied ratios
    std::vector<double> empty;
    CHECK_THROWS_AS(make_discrete(empty, empty), std::invalid_argument);
}

TEST_CASE("exp_ratio calibration and symmetry") {
    auto m = make_exp_ratio();
    CHECK(m.calibration() == doctest::Approx(0.5914004347759102).epsilon(1e-9));
    auto rep = check_model(m);
    CHECK(rep.int_f == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.int_g == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.standardized);
    const auto* d = m.density();
    CHECK(d->h(0.3, 0.7) == doctest::Approx(d->h(0.7, 0.3)).epsilon(1e-13));
    CHECK(d->h(0.1, 0.9) == doctest::Approx(d->h(0.9, 0.1)).epsilon(1e-13));
}

TEST_CASE("swapped reflects atoms and densities") {
    double a[] = {0.2, 0.8};
    double b[] = {0.7, 0.3};
    auto m = make_discrete(a, b);
    auto sw = swapped(m);
    auto direct = make_discrete(b, a);
    REQUIRE(sw.atoms().size() == direct.atoms().size());
    for (std::size_t i = 0; i < sw.atoms().size(); ++i) {
        CHECK(sw.atoms()[i].f == doctest::Approx(direct.atoms()[i].f).epsilon(1e-15));
        CHECK(sw.atoms()[i].g == doctest::Approx(direct.atoms()[i].g).epsilon(1e-15));
        CHECK(sw.atoms()[i].mass == doctest::Approx(direct.atoms()[i].mass).epsilon(1e-15));
    }
    CHECK(sw.f_scale() == m.g_scale());

    auto back = swapped(sw);
    for (std::size_t i = 0; i < back.atoms().size(); ++i) {
        CHECK(back.atoms()[i].s == m.atoms()[i].s);
        CHECK(back.atoms()[i].f == m.atoms()[i].f);
    }

    auto er = make_exp_ratio();
    auto ser = swapped(er);
    CHECK(ser.density()->h(0.3, 0.7) == doctest::Approx(er.density()->h(0.7, 0.3)).epsilon(1e-15));
    CHECK(ser.density()->f(0.3, 0.7) == doctest::Approx(er.density()->g(0.7, 0.3)).epsilon(1e-15));
    CHECK(check_model(ser).standardized);
}

TEST_CASE("json round trips") {
    for (const char* text : {
             R"({"form":"independent"})",
             R"({"form":"rho","rho":0.3})",
             R"({"form":"logistic","alpha":2.0})",
             R"({"form":"mixed","k":0.5})",
             R"({"form":"exp_ratio"})",
             R"({"form":"discrete","a":[0.2,0.8],"b":[0.7,0.3]})",
         }) {
        auto m = parse_model(text);
        auto again = parse_model(m.id());
        CHECK(m.id() == again.id());
        CHECK(m.form() == again.form());
    }
    auto m = parse_model(R"({"form":"rho","rho":0.3})");
    CHECK(m.param() == 0.3);
}

TEST_CASE("json rejects malformed models") {
    CHECK_THROWS_AS(parse_model(R"({"form":"nope"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model(R"({"form":"logistic"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model(R"({"form":"logistic","alpha":2,"extra":1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_model(R"({"form":"logistic","alpha":"two"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model(R"([1,2,3])"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model(R"({"alpha":2})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("not json"), nlohmann::json::parse_error);
    CHECK_THROWS_AS(parse_model(R"({"form":"discrete","a":[1,"x"],"b":[1,2]})"),
                    std::invalid_argument);
}

TEST_CASE("custom model validation") {
    std::vector<Atom> bad_order{{0.5, 1.0, 1.0, 1.0}, {0.2, 2.0, 0.0, 0.5}};
    CHECK_THROWS_AS(SpectralModel(bad_order, std::nullopt), std::invalid_argument);

    std::vector<Atom> bad_ratio{{0.2, 2.0, 1.0, 0.5}, {0.8, 1.0, 2.0, 0.5}};
    CHECK_THROWS_AS(SpectralModel(bad_ratio, std::nullopt), std::invalid_argument);

    std::vector<Atom> bad_loc{{1.5, 1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(SpectralModel(bad_loc, std::nullopt), std::invalid_argument);

    std::vector<Atom> bad_mass{{0.5, 1.0, 1.0, 0.0}};
    CHECK_THROWS_AS(SpectralModel(bad_mass, std::nullopt), std::invalid_argument);

    std::vector<Atom> bad_neg{{0.5, -1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(SpectralModel(bad_neg, std::nullopt), std::invalid_argument);

    std::vector<Atom> bad_zero{{0.5, 0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(SpectralModel(bad_zero, std::nullopt), std::invalid_argument);

    CHECK_THROWS_AS(SpectralModel({}, std::nullopt), std::invalid_argument);

    DensityPart decreasing;
    decreasing.h = [](double, double) { return 1.0; };
    decreasing.f = [](double, double oms) { return 2.0 * oms; };
    decreasing.g = [](double s, double) { return 2.0 * s; };
    CHECK_THROWS_AS(SpectralModel({}, std::move(decreasing)), std::invalid_argument);

    CHECK(make_independent().id() == R"({"form":"independent"})");
    std::vector<Atom> one{{0.5, 1.0, 1.0, 1.0}};
    SpectralModel custom(one, std::nullopt);
    CHECK_THROWS_AS(custom.id(), std::invalid_argument);
}

TEST_CASE("check_model flags a non-standardized measure") {
    std::vector<Atom> atoms{{0.0, 0.0, 2.0, 0.4}, {1.0, 2.0, 0.0, 0.5}};
    SpectralModel m(atoms, std::nullopt);
    auto rep = check_model(m);
    CHECK(rep.int_f == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.int_g == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(!rep.standardized);
}

TEST_CASE("check_model integrates densities against the oracle") {
    auto m = make_logistic(2.0);
    const auto* d = m.density();
    double direct = oracle::simpson(
        [&](double s) { return s <= 0 || s >= 1 ? 0.0 : d->f(s, 1.0 - s) * d->h(s, 1.0 - s); },
        0.0, 1.0 - 1e-12, 1e-9);
    CHECK(direct == doctest::Approx(1.0).epsilon(5e-5));  // raw Simpson near the singularity
    auto rep = check_model(m);
    CHECK(rep.int_f == doctest::Approx(1.0).epsilon(1e-9));
}
