#include <doctest.h>

#include <cmath>
#include <random>

#include "hoinet/error.hpp"
#include "hoinet/physio.hpp"
#include "hoinet/random.hpp"

using namespace hoinet;

namespace {

BeatSeries one_column(std::string name, std::vector<double> values) {
    return BeatSeries({std::move(name)}, {std::move(values)});
}

}  // namespace

TEST_SUITE("physio") {
    TEST_CASE("heart period variation") {
        const auto hv = derive_discrete(DiscreteKind::hv, one_column("HP", {800, 820, 810}));
        CHECK(hv.first_beat == 2);
        REQUIRE(hv.values.size() == 1);
        CHECK(hv.values[0] == 0);  // 810 <= 820

        const auto longer = derive_discrete(DiscreteKind::hv, one_column("HP", {800, 820, 810, 830, 830}));
        CHECK(longer.values == std::vector<Symbol>{0, 1, 0});
        CHECK(longer.last_beat() == 4);
    }

    TEST_CASE("systolic variation ties map to zero") {
        const auto sv = derive_discrete(DiscreteKind::sv, one_column("SP", std::vector<double>(6, 120.0)));
        CHECK(sv.values == std::vector<Symbol>(4, 0));
        const auto up = derive_discrete(DiscreteKind::sv, one_column("SP", {120, 121, 119, 125}));
        CHECK(up.values == std::vector<Symbol>{1, 0});
    }

    TEST_CASE("respiration pattern") {
        const auto rising = derive_discrete(DiscreteKind::rp, one_column("RA", {1, 2, 3, 4, 5, 6}));
        CHECK(rising.first_beat == 2);
        CHECK(rising.values == std::vector<Symbol>(3, 0));
        // RP_n = [RA_{n+1} > RA_{n+2}]
        const auto mixed = derive_discrete(DiscreteKind::rp, one_column("RA", {0, 5, 3, 4, 1}));
        CHECK(mixed.values == std::vector<Symbol>{0, 1});
        CHECK_THROWS_AS(derive_discrete(DiscreteKind::rp, one_column("RA", {1, 2, 3})), InvalidArgument);
    }

    TEST_CASE("errors: missing column and short input") {
        CHECK_THROWS_AS(derive_discrete(DiscreteKind::sv, one_column("HP", {1, 2, 3})), InvalidArgument);
        CHECK_THROWS_AS(derive_discrete(DiscreteKind::hv, one_column("HP", {800, 810})), InvalidArgument);
        CHECK_THROWS_AS(one_column("HP", {800, -1, 800}), InvalidArgument);
        CHECK_THROWS_AS(one_column("SP", {120, NAN, 120}), InvalidArgument);
        CHECK_THROWS_AS(BeatSeries({"HP", "SP"}, {{1, 2}, {1}}), InvalidArgument);
    }

    TEST_CASE("aligned discrete set") {
        const BeatSeries s({"HP", "SP", "RA"},
                           {{800, 820, 810, 830, 840, 835}, {120, 122, 121, 121, 125, 124}, {1, 3, 2, 4, 3, 5}});
        const DiscreteKind kinds[] = {DiscreteKind::hv, DiscreteKind::sv, DiscreteKind::rp};
        const auto d = derive_discrete_set(kinds, s);
        CHECK(d.channels() == 3);
        CHECK(d.observations() == 3);  // beats 2..4, limited by RP
        CHECK(d.channel_names() == std::vector<std::string>{"HV", "SV", "RP"});
        const auto hv = derive_discrete(DiscreteKind::hv, s);
        const auto rp = derive_discrete(DiscreteKind::rp, s);
        for (std::size_t t = 0; t < 3; ++t) {
            CHECK(d.at(t, 0) == hv.values[t]);
            CHECK(d.at(t, 2) == rp.values[t]);
            CHECK(d.at(t, 0) <= 1);
        }
    }

    TEST_CASE("property: invariance under increasing transforms") {
        Rng rng(3);
        std::normal_distribution<double> normal(800, 50);
        std::vector<double> hp(200), warped(200);
        for (std::size_t k = 0; k < hp.size(); ++k) {
            hp[k] = normal(rng);
            warped[k] = std::exp(hp[k] / 100.0) + 3.0;
        }
        CHECK(derive_discrete(DiscreteKind::hv, one_column("HP", hp)).values ==
              derive_discrete(DiscreteKind::hv, one_column("HP", warped)).values);
    }

    TEST_CASE("cardiac output") {
        const BeatSeries s({"HP", "ZMAX", "LVET"}, {{1000, 1000}, {1, 1}, {300, 300}});
        const auto co = derive_cardiac_output(s, 1.0);
        CHECK(co.first_beat == 2);
        REQUIRE(co.values.size() == 1);
        CHECK(co.values[0] == doctest::Approx(18.0));

        const BeatSeries v({"HP", "ZMAX", "LVET"}, {{900, 1000, 800, 950}, {1.2, 1.5, 0.9, 1.1}, {280, 300, 310, 290}});
        const auto c1 = derive_cardiac_output(v, 1.0);
        const auto c2 = derive_cardiac_output(v, 2.0);
        for (std::size_t k = 0; k < c1.values.size(); ++k) CHECK(c2.values[k] == doctest::Approx(2.0 * c1.values[k]));

        const BeatSeries flat({"HP", "ZMAX", "LVET"}, {std::vector<double>(5, 850), std::vector<double>(5, 1.3),
                                                      std::vector<double>(5, 310)});
        const auto cf = derive_cardiac_output(flat, 0.7);
        for (double x : cf.values) CHECK(x == cf.values.front());

        CHECK_THROWS_AS(derive_cardiac_output(v, 0.0), InvalidArgument);
        CHECK_THROWS_AS(derive_cardiac_output(one_column("HP", {1, 2, 3}), 1.0), InvalidArgument);
    }

    TEST_CASE("peripheral resistance") {
        const BeatSeries s({"MAP"}, {{90, 90, 90}});
        const BeatIndexed<double> co{2, {5, 10}};
        const auto pr = derive_peripheral_resistance(s, co);
        CHECK(pr.first_beat == 2);
        CHECK(pr.values == std::vector<double>{18, 9});
        CHECK_THROWS_AS(derive_peripheral_resistance(s, BeatIndexed<double>{2, {5, 0}}), InvalidArgument);
    }

    TEST_CASE("property: resistance times output recovers mean pressure") {
        Rng rng(4);
        std::uniform_real_distribution<double> u(0.5, 1.5);
        std::vector<double> hp(50), z(50), lvet(50), map(50);
        for (std::size_t k = 0; k < 50; ++k) {
            hp[k] = 800 * u(rng);
            z[k] = u(rng);
            lvet[k] = 300 * u(rng);
            map[k] = 90 * u(rng);
        }
        const BeatSeries s({"HP", "ZMAX", "LVET", "MAP"}, {hp, z, lvet, map});
        const auto co = derive_cardiac_output(s, 1.3);
        const auto pr = derive_peripheral_resistance(s, co);
        REQUIRE(pr.values.size() == co.values.size());
        for (std::size_t k = 0; k < pr.values.size(); ++k)
            CHECK(std::abs(pr.values[k] * co.values[k] - map[k + 1]) <= 1e-12 * map[k + 1]);

        // MAP constructed as twice the output gives a constant resistance.
        std::vector<double> twice(50, 1.0);
        for (std::size_t k = 0; k < co.values.size(); ++k) twice[k + 1] = 2.0 * co.values[k];
        const BeatSeries t({"MAP"}, {twice});
        for (double x : derive_peripheral_resistance(t, co).values) CHECK(x == doctest::Approx(2.0));
    }

    TEST_CASE("kind names") {
        CHECK(discrete_kind_from_string("rp") == DiscreteKind::rp);
        CHECK(to_string(DiscreteKind::sv) == "SV");
        CHECK_THROWS_AS(discrete_kind_from_string("co"), InvalidArgument);
    }
}
