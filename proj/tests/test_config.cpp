#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "pulsar/config.hpp"

using namespace pulsar;

TEST_CASE("key=value parsing: comments, blanks, whitespace") {
    const KeyValues kv = KeyValues::parse(
        "# leading comment\n"
        "\n"
        "  step_s = 2.5   # trailing comment\n"
        "constellation=gps-24\n"
        "masks = 0, 5 ,10\n"
        "log_all = true\n");
    CHECK(kv.has("step_s"));
    CHECK(kv.get("step_s", 0.0) == 2.5);
    CHECK(kv.get("constellation", std::string()) == "gps-24");
    CHECK(kv.get_list("masks", {}) == std::vector<double>{0.0, 5.0, 10.0});
    CHECK(kv.get("log_all", false));
    CHECK(!kv.has("absent"));
    CHECK(kv.get("absent", 7) == 7);

    CHECK_THROWS_AS(KeyValues::parse("just words\n"), std::invalid_argument);
    CHECK_THROWS_AS(KeyValues::parse("= value\n"), std::invalid_argument);
}

TEST_CASE("typed getters reject malformed values") {
    const KeyValues kv = KeyValues::parse("a = 1.5x\nb = 3.7\nc = maybe\n");
    CHECK_THROWS_AS(kv.get("a", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kv.get("b", 0), std::invalid_argument);  // int getter on 3.7
    CHECK_THROWS_AS(kv.get("c", false), std::invalid_argument);
}

TEST_CASE("unknown keys are reported by name") {
    const KeyValues kv = KeyValues::parse("step_s = 1\nstep_sz = 2\n");
    (void)kv.get("step_s", 0.0);
    try {
        kv.reject_unknown();
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("step_sz") != std::string::npos);
    }
}

TEST_CASE("defaults match the reference scenario") {
    const RunConfig c;
    CHECK(c.constellation == "pulsar-foc");
    CHECK(c.latitudes_deg == std::vector<double>{0, 15, 30, 45, 60, 75, 90, -45});
    CHECK(c.duration_days == 3.0);
    CHECK(c.step_s == 1.0);
    CHECK(c.pair_step_s == 10.0);
    CHECK(c.masks_deg == std::vector<double>{0, 5, 10, 15, 20});
    CHECK(c.altitude_reference == AltitudeReference::Mean);
    CHECK(c.effective_bands() == std::vector<std::string>{"x1", "x5"});
    c.validate();
}

TEST_CASE("every key can be set from text") {
    const RunConfig c = RunConfig::from_keyvalues(KeyValues::parse(
        "constellation = pulsar-iov\n"
        "latitudes = 10, 20\n"
        "longitude = 5\n"
        "height_m = 100\n"
        "duration_days = 0.5\n"
        "step_s = 2\n"
        "pair_step_s = 4\n"
        "masks = 5, 15\n"
        "altitude_reference = equatorial\n"
        "bands = x5\n"
        "log_all = 1\n"));
    CHECK(c.constellation == "pulsar-iov");
    CHECK(c.latitudes_deg == std::vector<double>{10, 20});
    CHECK(c.longitude_deg == 5.0);
    CHECK(c.height_m == 100.0);
    CHECK(c.duration_days == 0.5);
    CHECK(c.step_s == 2.0);
    CHECK(c.pair_step_s == 4.0);
    CHECK(c.masks_deg == std::vector<double>{5, 15});
    CHECK(c.altitude_reference == AltitudeReference::Equatorial);
    CHECK(c.bands == std::vector<std::string>{"x5"});
    CHECK(c.effective_bands() == std::vector<std::string>{"x5"});
    CHECK(c.log_all);
}

TEST_CASE("band defaults depend on the constellation") {
    RunConfig c;
    c.constellation = "gps-24";
    CHECK(c.effective_bands() == std::vector<std::string>{"l1ca", "l5"});
    c.bands = {"l5"};
    CHECK(c.effective_bands() == std::vector<std::string>{"l5"});
}

TEST_CASE("validation rejects inconsistent scenarios") {
    const auto expect_reject = [](const char* text) {
        CHECK_THROWS_AS(RunConfig::from_keyvalues(KeyValues::parse(text)), std::invalid_argument);
    };
    expect_reject("duration_days = 0\n");
    expect_reject("step_s = -1\n");
    expect_reject("pair_step_s = 0.5\n");          // below step
    expect_reject("step_s = 3\npair_step_s = 10\n");  // not a multiple
    expect_reject("masks = 10, 5\n");              // unsorted
    expect_reject("masks = 0, 90\n");              // 90 not allowed
    expect_reject("latitudes = 95\n");
    expect_reject("latitudes =\n");
    expect_reject("bands = x9\n");
    expect_reject("altitude_reference = sea\n");
    expect_reject("not_a_key = 1\n");
}

TEST_CASE("round trip through a file") {
    const std::string path = "/tmp/pulsar_test_config.txt";
    {
        std::ofstream f(path);
        f << "latitudes = 45\nduration_days = 1\nstep_s = 5\npair_step_s = 10\n";
    }
    const RunConfig c = RunConfig::from_file(path);
    CHECK(c.latitudes_deg == std::vector<double>{45});
    CHECK(c.duration_days == 1.0);
    CHECK(c.step_s == 5.0);
    std::remove(path.c_str());

    CHECK_THROWS_AS(RunConfig::from_file("/tmp/definitely_missing_config.txt"),
                    std::invalid_argument);
}
