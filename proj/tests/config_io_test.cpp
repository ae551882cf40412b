#include <doctest.h>

#include <string>

#include "emff/scenario_config.hpp"
#include "emff/svg_plot.hpp"
#include "emff/telemetry_csv.hpp"
#include "emff/verify.hpp"

using namespace emff;

namespace {

const char* kMinimalConfig = R"cfg(
[scenario]
name = minimal
mode = closed_loop
duration_s = 1
control_on_s = 0
seed = 7
noise_var_m2 = 0
sat_mass_kg = 3.469
beta = 6.89

[coil]
turns = 500
area_m2 = 0.03
max_current_A = 2.35

[kalman]
period_s = 0.1
meas_var_m2 = 1.2e-6
dist_var_m2ps4 = 2.8756e-7

[satellite 1]
position_m = 0

[satellite 2]
position_m = 0.4

[pair 1 2]
omega_radps = 125.66370614359172
alpha = 0.0158
d_m = -0.45
)cfg";

template <typename Fn>
std::string config_error_of(Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

template <typename Fn>
std::string csv_error_of(Fn&& fn) {
    try {
        fn();
    } catch (const CsvError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

int count_of(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + needle.size())) {
        ++n;
    }
    return n;
}

} // namespace

TEST_CASE("parse_scenario reads every field") {
    const Scenario s = parse_scenario(kMinimalConfig, "minimal");
    CHECK(s.name == "minimal");
    CHECK(s.mode == RunMode::closed_loop);
    CHECK(s.duration == 1.0);
    CHECK(s.dt == 5e-4);          // default
    CHECK(s.control_on == 0.0);
    CHECK(s.seed == 7);
    CHECK(s.noise_var == 0.0);
    CHECK(s.sat_mass == 3.469);
    CHECK(s.damping == 0.0);      // default
    CHECK(s.graph.beta == 6.89);
    CHECK(s.coil.turns == 500);
    CHECK(s.coil.area == 0.03);
    CHECK(s.coil.max_current == 2.35);
    CHECK(s.kalman.period == 0.1);
    CHECK(s.plan.period == 0.1);
    CHECK(s.sats.size() == 2);
    CHECK(s.sats[1].position == 0.4);
    CHECK(s.sats[1].velocity == 0.0);
    CHECK(s.graph.n == 2);
    CHECK(s.graph.has_edge(1, 2));
    CHECK(s.graph.alpha_of(1, 2) == 0.0158);
    CHECK(s.graph.gamma_of(1, 2) == 1.0);
    CHECK(s.graph.desired_of(1, 2).x == -0.45);
    CHECK(s.plan.omega(1, 2) == 125.66370614359172);
    CHECK_FALSE(s.setpoint_switch.has_value());
}

TEST_CASE("parse_scenario error reporting") {
    SUBCASE("unknown key names its line") {
        std::string text = kMinimalConfig;
        text += "\n[deadband]\neps0_m = 0.015\neps1_m = 0.021\nbogus = 1\n";
        const std::string msg =
            config_error_of([&] { parse_scenario(text, "cfg"); });
        CHECK(contains(msg, "unknown key 'bogus'"));
        CHECK(contains(msg, "cfg:"));
    }
    SUBCASE("unknown section") {
        std::string text = kMinimalConfig;
        text += "\n[thruster]\nisp = 100\n";
        const std::string msg =
            config_error_of([&] { parse_scenario(text, "cfg"); });
        CHECK(contains(msg, "unknown section [thruster]"));
    }
    SUBCASE("duplicate key") {
        std::string text = kMinimalConfig;
        text.replace(text.find("seed = 7"), 8, "seed = 8\nseed = 9");
        const std::string msg =
            config_error_of([&] { parse_scenario(text, "cfg"); });
        CHECK(contains(msg, "duplicate key 'seed'"));
    }
    SUBCASE("malformed number") {
        std::string text = kMinimalConfig;
        text.replace(text.find("beta = 6.89"), 11, "beta = fast");
        const std::string msg =
            config_error_of([&] { parse_scenario(text, "cfg"); });
        CHECK(contains(msg, "'beta' is not a number"));
    }
    SUBCASE("missing section") {
        std::string text = kMinimalConfig;
        const std::size_t at = text.find("[kalman]");
        text.erase(at, text.find("[satellite 1]") - at);
        const std::string msg =
            config_error_of([&] { parse_scenario(text, "cfg"); });
        CHECK(contains(msg, "missing [kalman] section"));
    }
    SUBCASE("key outside any section") {
        const std::string msg = config_error_of(
            [&] { parse_scenario("stray = 1\n", "cfg"); });
        CHECK(contains(msg, "cfg:1"));
        CHECK(contains(msg, "key outside any section"));
    }
    SUBCASE("pair header must be ordered") {
        std::string text = kMinimalConfig;
        text.replace(text.find("[pair 1 2]"), 10, "[pair 2 1]");
        const std::string msg =
            config_error_of([&] { parse_scenario(text, "cfg"); });
        CHECK(contains(msg, "[pair i j] with i < j"));
    }
    SUBCASE("validation failures are wrapped with the source name") {
        std::string text = kMinimalConfig;
        text.replace(text.find("alpha = 0.0158"), 14,
                     "alpha = 0.0158\nrho = 0.00136");
        text += "\n[deadband]\neps0_m = 0.021\neps1_m = 0.015\n";
        const std::string msg =
            config_error_of([&] { parse_scenario(text, "cfg"); });
        CHECK(contains(msg, "cfg:"));
        CHECK(contains(msg, "eps1 > eps0"));
    }
}

TEST_CASE("dump_scenario round trip") {
    SUBCASE("programmatic scenario survives dump and parse") {
        Scenario s = reference_three_sat_scenario();
        s.setpoint_switch = SetpointSwitch{30.0, {{{1, 2}, 0.5}}};
        const std::string text = dump_scenario(s);
        const Scenario back = parse_scenario(text, "dump");
        CHECK(dump_scenario(back) == text);
        CHECK(back.sats.size() == s.sats.size());
        CHECK(back.graph.gamma_of(2, 1) == s.graph.gamma_of(2, 1));
        CHECK(back.setpoint_switch->time == 30.0);
        CHECK(back.setpoint_switch->desired.at({1, 2}) == 0.5);
    }
    SUBCASE("bundled scenario files parse and survive a round trip") {
        const char* names[] = {
            "exp1_open_loop_attraction.cfg", "exp2_open_loop_repulsion.cfg",
            "exp3_repulsion.cfg",            "exp4_attraction.cfg",
            "exp5_multi_setpoint.cfg",       "exp6_three_sat_repulsion.cfg",
            "exp7_three_sat_attraction.cfg", "exp8_three_sat_mixed.cfg"};
        for (const char* name : names) {
            CAPTURE(name);
            const Scenario s =
                load_scenario(std::string(EMFF_SCENARIO_DIR "/") + name);
            CHECK_NOTHROW(s.validate());
            const std::string text = dump_scenario(s);
            const Scenario back = parse_scenario(text, name);
            CHECK(dump_scenario(back) == text);
        }
    }
}

TEST_CASE("telemetry CSV") {
    Scenario s = reference_two_sat_scenario();
    s.duration = 2.0;
    s.control_on = 0.0;
    const Telemetry tel = run_scenario(s);

    SUBCASE("header names the ordered pairs") {
        const std::string csv = telemetry_to_csv(tel);
        const std::string header = csv.substr(0, csv.find('\n'));
        CHECK(contains(header, "t_s"));
        CHECK(contains(header, "q_m_1_2"));
        CHECK(contains(header, "r_hat_m_1_2"));
        CHECK(contains(header, "v_hat_mps_2_1"));
        CHECK(contains(header, "I_amp_A_2_1"));
        CHECK(contains(header, "F_hat_N_2_1"));
    }
    SUBCASE("write and read are inverse at 9 significant digits") {
        const std::string csv = telemetry_to_csv(tel);
        const Telemetry back = telemetry_from_csv(csv, "mem");
        CHECK(back.pair_order == tel.pair_order);
        CHECK(back.rows.size() == tel.rows.size());
        CHECK(telemetry_to_csv(back) == csv);
    }
    SUBCASE("malformed inputs name the line") {
        CHECK(contains(csv_error_of(
                           [&] { telemetry_from_csv("", "mem"); }),
                       "mem"));
        const std::string csv = telemetry_to_csv(tel);
        std::string short_row = csv;
        short_row += "99\n"; // row with a single field
        CHECK(contains(csv_error_of([&] {
                  telemetry_from_csv(short_row, "mem");
              }),
                       "mem:"));
        std::string bad_number = csv;
        bad_number.replace(bad_number.find('\n') + 1, 1, "x");
        CHECK(contains(csv_error_of([&] {
                  telemetry_from_csv(bad_number, "mem");
              }),
                       "mem:2"));
        // duplicate the last data row so time stops increasing
        std::string stuck = csv;
        const std::size_t last =
            stuck.rfind('\n', stuck.size() - 2);
        stuck += stuck.substr(last + 1);
        CHECK(contains(csv_error_of([&] {
                  telemetry_from_csv(stuck, "mem");
              }),
                       "increas"));
    }
}

TEST_CASE("pair plots") {
    Scenario s = reference_two_sat_scenario();
    s.duration = 2.0;
    s.control_on = 0.0;
    const Telemetry tel = run_scenario(s);

    SUBCASE("five stacked series per ordered pair") {
        const std::string svg = pair_plot_svg(tel, 1, 2);
        CHECK(contains(svg, "<svg"));
        CHECK(contains(svg, "</svg>"));
        CHECK(count_of(svg, "<polyline") == 5);
        CHECK(contains(svg, "|q_m|_1_2"));
        CHECK(contains(svg, "|r_hat_m|_1_2"));
        CHECK(contains(svg, "v_hat_mps_1_2"));
        CHECK(contains(svg, "I_amp_A_1_2"));
        CHECK(contains(svg, "F_hat_N_1_2"));
    }
    SUBCASE("deterministic output") {
        CHECK(pair_plot_svg(tel, 1, 2) == pair_plot_svg(tel, 1, 2));
        CHECK(pair_plot_svg(tel, 1, 2) != pair_plot_svg(tel, 2, 1));
    }
    SUBCASE("unknown pair and empty telemetry throw") {
        CHECK_THROWS_AS(pair_plot_svg(tel, 1, 3), std::invalid_argument);
        CHECK_THROWS_AS(pair_plot_svg(Telemetry{}, 1, 2),
                        std::invalid_argument);
    }
}
