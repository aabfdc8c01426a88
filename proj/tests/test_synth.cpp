#include "cspm/errors.hpp"
#include "cspm/ingest.hpp"
#include "cspm/platform_metrics.hpp"
#include "cspm/synth.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace cspm;
using namespace cspm::synth;

namespace {

void check_recovery(const SynthConfig& config) {
    const auto out = generate(config);
    const auto snap = build_snapshot(out.events);
    const auto profiles = derive_profiles(snap);
    REQUIRE(profiles.volunteers.size() == out.labels.size());
    for (const auto& label : out.labels) {
        const auto* v = profiles.find_volunteer(label.volunteer_id);
        REQUIRE(v != nullptr);
        CAPTURE(label.volunteer_id);
        CAPTURE(to_string(label.planted));
        CHECK(classify(*v) == expected_classes(label.planted));
        CHECK(snap.project_ids()[v->first_project] == label.recruited_by);
    }
}

}  // namespace

TEST_CASE("all transient-one-project volunteers touch one project on one day") {
    SynthConfig c;
    c.volunteer_count = 50;
    c.class_mix = {1, 0, 0, 0, 0};
    const auto out = generate(c);
    const auto profiles = derive_profiles(build_snapshot(out.events));
    for (const auto& v : profiles.volunteers) {
        CHECK(v.explored_projects() == 1);
        CHECK(v.active_days.size() == 1);
    }
}

TEST_CASE("planted 10/10/40/30/10 mix is recovered exactly") {
    SynthConfig c;
    c.seed = 77;
    c.volunteer_count = 1000;
    c.project_count = 25;
    c.class_mix = {0.1, 0.1, 0.4, 0.3, 0.1};
    check_recovery(c);
    const auto out = generate(c);
    std::array<int, kPlantedClassCount> counts{};
    for (const auto& l : out.labels) ++counts[static_cast<std::size_t>(l.planted)];
    CHECK(counts == std::array<int, 5>{100, 100, 400, 300, 100});
}

TEST_CASE("generation is deterministic per seed") {
    SynthConfig c;
    c.volunteer_count = 300;
    std::ostringstream a, b, other;
    write_csv(a, generate(c).events);
    write_csv(b, generate(c).events);
    c.seed = 2;
    write_csv(other, generate(c).events);
    CHECK(a.str() == b.str());
    CHECK(a.str() != other.str());
}

TEST_CASE("infeasible configurations are reported") {
    SynthConfig c;
    c.project_count = 1;
    c.class_mix = {0.5, 0, 0, 0, 0.5};
    CHECK_THROWS_AS(generate(c), InfeasibleConfig);

    c.project_count = 5;
    c.end = c.start + std::chrono::hours(30);  // one whole day at most
    CHECK_THROWS_AS(generate(c), InfeasibleConfig);

    SynthConfig t;
    t.volunteer_count = 100;
    t.target_events = 10;
    CHECK_THROWS_AS(generate(t), InfeasibleConfig);

    SynthConfig bad;
    bad.class_mix = {0.5, 0.5, 0.5, 0, 0};
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("target event count pads without changing planted classes") {
    SynthConfig c;
    c.volunteer_count = 400;
    c.project_count = 10;
    for (auto& a : c.activity) a.tasks_per_day = {1, 1};
    c.target_events = 20000;
    const auto out = generate(c);
    CHECK(out.events.size() == 20000);
    check_recovery(c);
}

TEST_CASE("planted recruitment skew reproduces the configured Gini") {
    for (double skew : {0.0, 0.5, 1.0, 1.5}) {
        CAPTURE(skew);
        SynthConfig c;
        c.volunteer_count = 5000;
        c.project_count = 60;
        c.recruitment_skew = skew;
        const auto out = generate(c);
        const auto profiles = derive_profiles(build_snapshot(out.events));
        CHECK(profiles.projects.size() == 60);
        CHECK(std::abs(recruitment_inequality(profiles) - configured_recruitment_gini(c)) <= 0.02);
    }
}

TEST_CASE("apportion sums exactly and respects weights") {
    CHECK(apportion({0.1, 0.2, 0.7}, 100) == std::vector<std::size_t>{10, 20, 70});
    CHECK(apportion({1, 1, 1}, 10) == std::vector<std::size_t>{4, 3, 3});
    const auto a = apportion({0.333, 0.333, 0.334}, 7);
    CHECK(a[0] + a[1] + a[2] == 7);
}

TEST_CASE("labels CSV lists the expected classes") {
    SynthConfig c;
    c.volunteer_count = 5;
    std::ostringstream os;
    write_labels_csv(os, generate(c).labels);
    const auto text = os.str();
    CHECK(text.rfind("volunteer_id,planted_class,platform_class,project_class,recruited_by\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}
