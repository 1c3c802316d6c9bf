#include <doctest.h>

#include <cmath>

#include "geomconc/asymptotics.hpp"
#include "geomconc/quad.hpp"
#include "oracles.hpp"

using namespace geomconc;

namespace {

RegimeSpec power_regime(Regime kind, double coeff, double expo, int from, int to,
                        double c = 0.0) {
    RegimeSpec spec;
    spec.classified = kind;
    spec.c = c;
    for (int e = from; e <= to; ++e) spec.t_grid.push_back(std::pow(2.0, e));
    spec.rho_rule = [coeff, expo](double t) { return coeff * std::pow(t, expo); };
    spec.rho_desc = "power rule";
    return spec;
}

} // namespace

TEST_CASE("expected count: isolated vertices on a torus, closed form") {
    // E F(exactly 1) = lambda V exp(-lambda pi rho^2)
    const double lambda = 1.0, rho = 0.5, half = 10.0;
    const Window w = Window::torus(2, Point{half, half, 0});
    const IntensityModel m = IntensityModel::homogeneous(lambda);
    const Shape shape = Shape::euclidean_ball(rho, 2);
    const double closed = lambda * w.volume() * std::exp(-lambda * M_PI * rho * rho);

    const ValueWithError est =
        expected_count_exact(m, shape, Selector::exactly(1), w, 200000, 11);
    CHECK(std::fabs(est.value - closed) <= std::max(4.0 * est.std_error, 1e-9));

    // and the simulation mean agrees too
    std::vector<Selector> sels{Selector::exactly(1)};
    const int reps = 2000;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        const PointConfig cfg = sample_poisson(m, w, 5150, static_cast<std::uint64_t>(r));
        sum += static_cast<double>(
            count_small_components(cfg.points, w, shape, sels, false).raw[0]);
    }
    const double sim = sum / reps;
    CHECK(std::fabs(sim - closed) <= 4.0 * std::sqrt(closed / reps));
}

TEST_CASE("expected count: geometrically empty selector gives zero") {
    // a claw cannot occur on the line: three leaves within rho of the center
    // would span more than 2 rho
    const Window w = Window::torus(1, Point{20, 0, 0});
    const IntensityModel m = IntensityModel::homogeneous(0.8);
    const Shape shape = Shape::euclidean_ball(0.5, 1);
    const Selector claw = Selector::iso(oracle::star_graph(4));
    const ValueWithError est = expected_count_exact(m, shape, claw, w, 20000, 3);
    CHECK(est.value == 0.0);
}

TEST_CASE("expected count for pairs matches simulation on a torus") {
    const Window w = Window::torus(2, Point{8, 8, 0});
    const IntensityModel m = IntensityModel::homogeneous(1.2);
    const Shape shape = Shape::euclidean_ball(0.4, 2);
    const Selector sel = Selector::exactly(2);

    const ValueWithError est = expected_count_exact(m, shape, sel, w, 2000000, 17);
    std::vector<Selector> sels{sel};
    const int reps = 4000;
    double sum = 0.0, ss = 0.0;
    for (int r = 0; r < reps; ++r) {
        const PointConfig cfg = sample_poisson(m, w, 6001, static_cast<std::uint64_t>(r));
        const double f = static_cast<double>(
            count_small_components(cfg.points, w, shape, sels, false).raw[0]);
        sum += f;
        ss += f * f;
    }
    const double sim = sum / reps;
    const double sim_se = std::sqrt((ss / reps - sim * sim) / reps);
    CHECK(std::fabs(est.value - sim) <= 4.0 * (est.std_error + sim_se));
}

TEST_CASE("expected count: radial model on a box window (nested path)") {
    const Window w = Window::box(2, Point{6, 6, 0});
    const IntensityModel m = IntensityModel::radial_power(15.0, 2.5);
    const Shape shape = Shape::euclidean_ball(0.5, 2);
    const Selector sel = Selector::exactly(1);

    const ValueWithError est = expected_count_exact(m, shape, sel, w, 60000, 23);
    std::vector<Selector> sels{sel};
    const int reps = 3000;
    double sum = 0.0, ss = 0.0;
    for (int r = 0; r < reps; ++r) {
        const PointConfig cfg = sample_poisson(m, w, 7001, static_cast<std::uint64_t>(r));
        const double f = static_cast<double>(
            count_small_components(cfg.points, w, shape, sels, false).raw[0]);
        sum += f;
        ss += f * f;
    }
    const double sim = sum / reps;
    const double sim_se = std::sqrt((ss / reps - sim * sim) / reps);
    CHECK(std::fabs(est.value - sim) <= 4.0 * (est.std_error + sim_se) + 1e-9);
}

TEST_CASE("dimensional analysis: doubling lengths and scaling the rate by 2^-d") {
    const Window w1 = Window::torus(2, Point{8, 8, 0});
    const Window w2 = Window::torus(2, Point{16, 16, 0});
    const IntensityModel m1 = IntensityModel::homogeneous(1.0);
    const IntensityModel m2 = IntensityModel::homogeneous(0.25);
    for (const int k : {1, 2}) {
        const Selector sel = Selector::exactly(k);
        const ValueWithError a =
            expected_count_exact(m1, Shape::euclidean_ball(0.5, 2), sel, w1, 400000, 5);
        const ValueWithError b =
            expected_count_exact(m2, Shape::euclidean_ball(1.0, 2), sel, w2, 400000, 6);
        CHECK(std::fabs(a.value - b.value) <=
              4.0 * (a.std_error + b.std_error) + 1e-12);
    }
}

TEST_CASE("expected count rejects unsupported selectors") {
    const Window w = Window::torus(2, Point{8, 8, 0});
    const IntensityModel m = IntensityModel::homogeneous(1.0);
    const Shape s = Shape::euclidean_ball(0.4, 2);
    CHECK_THROWS_AS(static_cast<void>(expected_count_exact(m, s, Selector::at_most(2),
                                                           w, 2000, 1)),
                    validation_error);
    CHECK_THROWS_WITH_AS(static_cast<void>(expected_count_exact(m, s, Selector::exactly(5),
                                                                w, 2000, 1)),
                         "use simulation estimate", std::runtime_error);
}

TEST_CASE("sparse constant: k = 1 is the m integral") {
    const IntensityModel m = IntensityModel::radial_power(2.0, 3.0);
    const AsymptoticsReport rep =
        sparse_constant(Shape::euclidean_ball(1.0, 2), Selector::exactly(1), m);
    CHECK(rep.value == doctest::Approx(radial_power_mk_integral(m, 1, 2)));
    CHECK(rep.std_error == 0.0);
}

TEST_CASE("sparse constant: pairs reduce to (vol S / 2) int m^2") {
    const IntensityModel m = IntensityModel::radial_power(1.0, 3.0);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    const AsymptoticsReport rep =
        sparse_constant(s, Selector::exactly(2), m, 400000, 21);
    // I(x) = 1{x in S}: the inner integral is exactly vol(S) = pi
    const double closed = radial_power_mk_integral(m, 2, 2) * M_PI / 2.0;
    CHECK(std::fabs(rep.value - closed) <= 4.0 * rep.std_error);
    // and the m^2 integral itself against quadrature
    const double quadr =
        quad::integrate_radial([&](double r) { return std::pow(1.0 + r, -6.0); }, 2,
                               0.0, 300.0, 64, 32);
    CHECK(radial_power_mk_integral(m, 2, 2) == doctest::Approx(quadr).epsilon(1e-4));
}

TEST_CASE("sparse constant: 3-paths stable across five seeds") {
    const IntensityModel m = IntensityModel::radial_power(1.0, 2.0);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    const Selector paths = Selector::iso(oracle::path_graph(3));
    std::vector<AsymptoticsReport> reps;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        reps.push_back(sparse_constant(s, paths, m, 150000, seed));
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j)
            CHECK(std::fabs(reps[i].value - reps[j].value) <=
                  3.0 * (reps[i].std_error + reps[j].std_error));
    CHECK(reps[0].value > 0.0);
}

TEST_CASE("sparse constant rejects non-integrable exponents") {
    const IntensityModel m = IntensityModel::radial_power(1.0, 1.0);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(sparse_constant(Shape::euclidean_ball(1.0, 2),
                                          Selector::exactly(2), m)),
        "m^k is not integrable: gamma*k <= d", validation_error);
}

TEST_CASE("geometrically empty selector has zero sparse constant") {
    const IntensityModel m = IntensityModel::radial_power(1.0, 3.0);
    const AsymptoticsReport rep = sparse_constant(
        Shape::euclidean_ball(1.0, 1), Selector::iso(oracle::star_graph(4)), m, 100000, 2);
    CHECK(rep.value == 0.0);
}

TEST_CASE("thermodynamic constant: k = 1 against a radial quadrature oracle") {
    const double alpha = 2.0, gamma = 3.0, c = 1.5;
    const IntensityModel m = IntensityModel::radial_power(alpha, gamma);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    auto mr = [&](double r) { return alpha * std::pow(1.0 + r, -gamma); };
    const double R = 3000.0;
    const double head = quad::integrate(
        [&](double r) { return 2.0 * M_PI * r * mr(r) * std::exp(-c * M_PI * mr(r)); },
        0.0, R, 256, 32);
    // analytic tail: exp(-c pi m) = 1 - c pi m + O(m^2) out there
    const double oracle_val = head + radial_power_mk_tail(m, 1, 2, R) -
                              c * M_PI * radial_power_mk_tail(m, 2, 2, R);
    const AsymptoticsReport rep =
        thermo_constant(s, Selector::exactly(1), m, c, 2000000, 3);
    CHECK(std::fabs(rep.value - oracle_val) / oracle_val < 8e-4); // 3 significant digits
    CHECK(std::fabs(rep.value - oracle_val) <= 4.0 * rep.std_error);
}

TEST_CASE("thermodynamic constant: k = 2 against an independent 2-D quadrature oracle") {
    const double alpha = 1.0, gamma = 3.0, c = 1.0;
    const IntensityModel m = IntensityModel::radial_power(alpha, gamma);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    auto mr = [&](double r) { return alpha * std::pow(1.0 + r, -gamma); };
    // t = (c/2) int_{|x2|<=1} int m(x1)^2 exp(-c vol(S u S+x2) m(x1)) dx1 dx2,
    // reduced to polar coordinates with the exact lens area
    const double oracle_val =
        (c / 2.0) *
        quad::integrate(
            [&](double s2) {
                const double uvol = 2.0 * M_PI - disk_lens_area(1.0, s2);
                const double inner = quad::integrate(
                    [&](double r) {
                        const double mm = mr(r);
                        return 2.0 * M_PI * r * mm * mm * std::exp(-c * uvol * mm);
                    },
                    0.0, 2000.0, 128, 32);
                return 2.0 * M_PI * s2 * inner;
            },
            0.0, 1.0, 8, 32);
    const AsymptoticsReport rep = thermo_constant(s, Selector::exactly(2), m, c, 500000, 9);
    CHECK(std::fabs(rep.value - oracle_val) <= 4.0 * rep.std_error);
    CHECK(rep.std_error / rep.value < 5e-3);
}

TEST_CASE("thermodynamic constant is monotone in c and tends to the m integral") {
    const IntensityModel m = IntensityModel::radial_power(1.0, 3.0);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    const Selector one = Selector::exactly(1);
    // t(c) increases toward int m as c drops to zero
    double last = -1.0;
    for (const double c : {2.0, 1.0, 0.3, 0.01}) {
        const double v = thermo_constant(s, one, m, c, 200000, 4).value;
        CHECK(v > last);
        last = v;
    }
    CHECK(std::fabs(last - radial_power_mk_integral(m, 1, 2)) /
              radial_power_mk_integral(m, 1, 2) <
          0.02);
}

TEST_CASE("dense constant: k = 1 against a radial quadrature oracle") {
    // gamma > d so the k = 1 constant is finite
    const double alpha = 1.5, gamma = 3.0;
    const IntensityModel m = IntensityModel::radial_power(alpha, gamma);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    // d = alpha 2 pi int r^{1-gamma} exp(-alpha pi r^{-gamma}) dr + analytic tail
    const double R = 4000.0;
    const double head = quad::integrate(
        [&](double r) {
            return alpha * 2.0 * M_PI * std::pow(r, 1.0 - gamma) *
                   std::exp(-alpha * M_PI * std::pow(r, -gamma));
        },
        1e-6, R, 512, 32);
    // tail: exp factor ~ 1 - alpha pi r^-gamma
    const double tail = alpha * 2.0 * M_PI *
                        (std::pow(R, 2.0 - gamma) / (gamma - 2.0) -
                         alpha * M_PI * std::pow(R, 2.0 - 2.0 * gamma) / (2.0 * gamma - 2.0));
    const double oracle_val = head + tail;
    const AsymptoticsReport rep = dense_constant(s, Selector::exactly(1), m, 400000, 8);
    CHECK(std::fabs(rep.value - oracle_val) / oracle_val < 2e-3);
}

TEST_CASE("dense constant is stable across seeds and rejects bad models") {
    const IntensityModel m = IntensityModel::radial_power(1.0, 2.0);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    const Selector pairs = Selector::exactly(2);
    std::vector<AsymptoticsReport> reps;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        reps.push_back(dense_constant(s, pairs, m, 120000, seed));
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j)
            CHECK(std::fabs(reps[i].value - reps[j].value) <=
                  3.0 * (reps[i].std_error + reps[j].std_error));

    CHECK_THROWS_AS(static_cast<void>(dense_constant(s, pairs,
                                                     IntensityModel::homogeneous(1.0))),
                    validation_error);
    // gamma k <= d makes the constant diverge
    CHECK_THROWS_AS(static_cast<void>(dense_constant(s, Selector::exactly(1), m)),
                    validation_error);
}

TEST_CASE("constants are stable under doubling the MC sample count") {
    const Shape s = Shape::euclidean_ball(1.0, 2);
    const Selector pairs = Selector::exactly(2);
    {
        const IntensityModel m = IntensityModel::radial_power(1.0, 2.0);
        const auto a = sparse_constant(s, pairs, m, 60000, 71);
        const auto b = sparse_constant(s, pairs, m, 120000, 72);
        CHECK(std::fabs(a.value - b.value) <= 3.0 * (a.std_error + b.std_error) + 1e-12);
        const auto ta = thermo_constant(s, pairs, m, 1.0, 60000, 73);
        const auto tb = thermo_constant(s, pairs, m, 1.0, 120000, 74);
        CHECK(std::fabs(ta.value - tb.value) <= 3.0 * (ta.std_error + tb.std_error));
        const auto da = dense_constant(s, pairs, m, 60000, 75);
        const auto db = dense_constant(s, pairs, m, 120000, 76);
        CHECK(std::fabs(da.value - db.value) <= 3.0 * (da.std_error + db.std_error));
    }
}

TEST_CASE("regime spec validation") {
    RegimeSpec bad = power_regime(Regime::sparse, 1.0, -0.2, 4, 8);
    // t rho^d = t^{0.6} increases: not sparse
    CHECK_THROWS_AS(bad.validate(2), validation_error);
    RegimeSpec ok = power_regime(Regime::sparse, 1.0, -0.7, 4, 8);
    CHECK_NOTHROW(ok.validate(2));
    RegimeSpec thermo = power_regime(Regime::thermodynamic, 1.0, -0.5, 4, 8, 1.0);
    thermo.rho_rule = [](double t) { return std::sqrt(1.0 / t); };
    CHECK_NOTHROW(thermo.validate(2));
}

TEST_CASE("experiment window grows with t in the dense regime") {
    const IntensityModel m = IntensityModel::radial_power(1.0, 2.0);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    ExperimentOptions opts;
    const Window w1 = experiment_window(m, s, Selector::exactly(2), 64.0,
                                        std::pow(64.0, -0.25), Regime::dense, opts);
    const Window w2 = experiment_window(m, s, Selector::exactly(2), 4096.0,
                                        std::pow(4096.0, -0.25), Regime::dense, opts);
    CHECK(w2.half_extent[0] > w1.half_extent[0]);
}

TEST_CASE("sparse regime experiment: scaled means approach the constant") {
    const IntensityModel m = IntensityModel::radial_power(0.5, 3.0);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    const Selector pairs = Selector::exactly(2);
    RegimeSpec spec = power_regime(Regime::sparse, 1.0, -0.7, 4, 8);
    ExperimentOptions opts;
    opts.replications = 160;
    opts.constant_mc_points = 200000;
    const AsymptoticsReport rep = regime_experiment(spec, s, pairs, m, opts, 909);
    REQUIRE(rep.table.size() == 5);
    for (const RegimeRow& row : rep.table) {
        // pathwise sandwich: k! mean F <= mean U, and above the void bracket
        CHECK(row.kfact_f_over_u <= 1.0 + 1e-12);
        CHECK(row.kfact_f_over_u >= row.bracket_lo - 1e-12);
    }
    // ratio drifts toward 1 along the grid
    CHECK(std::fabs(rep.table.back().ratio_to_limit - 1.0) < 0.35);
}

TEST_CASE("regime experiment is bit-identical across thread counts") {
    const IntensityModel m = IntensityModel::radial_power(0.5, 3.0);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    const Selector pairs = Selector::exactly(2);
    RegimeSpec spec = power_regime(Regime::sparse, 1.0, -0.7, 4, 6);
    ExperimentOptions opts;
    opts.replications = 48;
    opts.constant_mc_points = 50000;
    opts.threads = 1;
    const AsymptoticsReport a = regime_experiment(spec, s, pairs, m, opts, 3131);
    opts.threads = 4;
    const AsymptoticsReport b = regime_experiment(spec, s, pairs, m, opts, 3131);
    REQUIRE(a.table.size() == b.table.size());
    for (std::size_t i = 0; i < a.table.size(); ++i) {
        CHECK(a.table[i].mean_f_raw == b.table[i].mean_f_raw);
        CHECK(a.table[i].mean_u == b.table[i].mean_u);
        CHECK(a.table[i].scaled == b.table[i].scaled);
    }
}

TEST_CASE("strong law: a never-matching selector gives identically zero") {
    const IntensityModel m = IntensityModel::radial_power(1.0, 3.0);
    const Shape s = Shape::euclidean_ball(1.0, 1);
    const Selector claw = Selector::iso(oracle::star_graph(4)); // impossible in d=1
    RegimeSpec spec = power_regime(Regime::sparse, 1.0, -1.3, 4, 10);
    ExperimentOptions opts;
    opts.constant_mc_points = 50000;
    const StrongLawReport rep = strong_law_experiment(spec, s, claw, m, opts, 5);
    CHECK(rep.limit == 0.0);
    for (const StrongLawRow& row : rep.rows) CHECK(row.scaled == 0.0);
}

TEST_CASE("strong law flags a violated growth condition but still runs") {
    const IntensityModel m = IntensityModel::radial_power(0.5, 3.0);
    const Shape s = Shape::euclidean_ball(1.0, 2);
    // t^2 rho^2 = t^{-0.4}: sparse but shrinking, condition fails
    RegimeSpec spec = power_regime(Regime::sparse, 1.0, -1.2, 4, 8);
    ExperimentOptions opts;
    opts.constant_mc_points = 50000;
    const StrongLawReport rep =
        strong_law_experiment(spec, s, Selector::exactly(2), m, opts, 6);
    CHECK_FALSE(rep.growth_condition_ok);
    CHECK(rep.rows.size() == 5);
}
