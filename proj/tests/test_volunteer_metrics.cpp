#include "cspm/volunteer_metrics.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <fmt/format.h>

using namespace cspm;
using testing::at;
using testing::ev;

namespace {

VolunteerProfile profile_of(const std::vector<TaskExecutionEvent>& events, const std::string& id,
                            Profiles* keep = nullptr) {
    auto profiles = derive_profiles(build_snapshot(events));
    auto v = *profiles.find_volunteer(id);
    if (keep) *keep = std::move(profiles);
    return v;
}

}  // namespace

TEST_CASE("worked example: 10 of 40 projects explored, 4 regular") {
    Profiles profiles;
    const auto x = profile_of(testing::forty_project_platform(), "x", &profiles);
    CHECK(availability_count(x, profiles.projects) == 40);
    CHECK(x.explored_projects() == 10);
    CHECK(x.regular_projects() == 4);
    CHECK(exploration_rate(x, profiles.projects) == 0.25);
    CHECK(engagement_rate(x, profiles.projects) == 0.1);
}

TEST_CASE("exploration rate edge values") {
    SUBCASE("p = a gives 1") {
        const std::vector<TaskExecutionEvent> events{ev("v", "a", "A", "2014-01-01T00:00:00Z"),
                                                     ev("v", "b", "B", "2014-01-01T01:00:00Z")};
        Profiles profiles;
        const auto v = profile_of(events, "v", &profiles);
        CHECK(exploration_rate(v, profiles.projects) == 1.0);
    }
    SUBCASE("p = 1 of a = 5 gives 0.2") {
        std::vector<TaskExecutionEvent> events;
        for (int p = 0; p < 5; ++p) events.push_back(ev("bg", fmt::format("t{}", p), fmt::format("P{}", p), "2014-06-01T00:00:00Z"));
        events.push_back(ev("v", "mine", "P0", "2014-02-01T00:00:00Z"));
        Profiles profiles;
        const auto v = profile_of(events, "v", &profiles);
        CHECK(availability_count(v, profiles.projects) == 5);
        CHECK(exploration_rate(v, profiles.projects) == doctest::Approx(0.2).epsilon(1e-15));
    }
}

TEST_CASE("projects that ended before a volunteer joined are not available") {
    const std::vector<TaskExecutionEvent> events{
        ev("old", "t0", "Finished", "2013-01-01T00:00:00Z"),
        ev("bg", "t1", "Live", "2013-01-01T00:00:00Z"),
        ev("bg", "t2", "Live", "2015-01-01T00:00:00Z"),
        ev("v", "t3", "Live", "2014-01-01T00:00:00Z"),
    };
    Profiles profiles;
    const auto v = profile_of(events, "v", &profiles);
    CHECK(availability_count(v, profiles.projects, Availability::Overlap) == 1);
    CHECK(availability_count(v, profiles.projects, Availability::All) == 2);
}

TEST_CASE("availability and engagement agree with brute-force recounts on random logs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CAPTURE(seed);
        // 50 projects with staggered activity windows
        auto events = oracle::random_log(seed, 4000, 120, 50, 4000, 500);
        const auto snap = build_snapshot(events);
        const auto profiles = derive_profiles(snap);
        const auto deduped = oracle::dedupe(events);
        const auto facts = oracle::volunteer_facts(deduped);
        const auto last = oracle::project_last_event(deduped);
        const auto metrics = compute_volunteer_metrics(profiles, snap.observation_end());
        const AvailabilityIndex index(profiles.projects, Availability::Overlap);
        for (const auto& m : metrics) {
            const auto& f = facts.at(m.volunteer_id);
            const auto a = oracle::brute_availability(last, f.first);
            const auto g = oracle::regular_recount(f);
            CHECK(m.available_projects == a);
            CHECK(index.count(f.first) == a);
            CHECK(m.explored_projects == f.project_tasks.size());
            CHECK(m.regular_projects == g);
            CHECK(m.engagement_rate == static_cast<double>(g) / static_cast<double>(a));
        }
    }
}

TEST_CASE("relative activity duration") {
    const Instant end = at("2014-12-31T00:00:00Z");
    SUBCASE("single day of activity") {
        const auto v = profile_of({ev("v", "t", "p", "2014-01-01T08:00:00Z"), ev("v", "u", "p", "2014-01-01T20:00:00Z")}, "v");
        CHECK(relative_activity_duration(v, end) == 0.0);
    }
    SUBCASE("30 active days of a 60 day tenure") {
        const auto v = profile_of({ev("v", "t", "p", "2014-01-01T08:00:00Z"), ev("v", "u", "p", "2014-01-31T01:00:00Z")}, "v");
        CHECK(relative_activity_duration(v, at("2014-03-02T00:00:00Z")) == 0.5);
    }
    SUBCASE("still active on the collection day") {
        const auto v = profile_of({ev("v", "t", "p", "2014-01-01T08:00:00Z"), ev("v", "u", "p", "2014-12-31T23:00:00Z")}, "v");
        CHECK(relative_activity_duration(v, at("2014-12-31T23:59:59Z")) == 1.0);
    }
    SUBCASE("joined on the collection day") {
        const auto v = profile_of({ev("v", "t", "p", "2014-12-31T08:00:00Z")}, "v");
        CHECK(relative_activity_duration(v, at("2014-12-31T23:00:00Z")) == 1.0);
    }
}

TEST_CASE("classification examples") {
    using PC = PlatformClass;
    using JC = ProjectClass;
    CHECK(classify(profile_of({ev("v", "a", "P1", "2014-01-01T01:00:00Z"), ev("v", "b", "P2", "2014-01-01T02:00:00Z")},
                              "v")) == std::pair{PC::PlatformTransient, JC::MultiProjectExplorer});
    CHECK(classify(profile_of({ev("v", "a", "P1", "2014-01-01T01:00:00Z"), ev("v", "b", "P1", "2014-01-05T02:00:00Z")},
                              "v")) == std::pair{PC::PlatformRegular, JC::OneProject});
    CHECK(classify(profile_of({ev("v", "a", "P1", "2014-01-01T01:00:00Z"), ev("v", "b", "P1", "2014-01-02T01:00:00Z"),
                               ev("v", "c", "P2", "2014-01-03T01:00:00Z"), ev("v", "d", "P2", "2014-01-04T01:00:00Z")},
                              "v")) == std::pair{PC::PlatformRegular, JC::MultiProjectRegular});
    // Regular in one project, visited a second once: explorer, not multi-project regular.
    CHECK(classify(profile_of({ev("v", "a", "P1", "2014-01-01T01:00:00Z"), ev("v", "b", "P1", "2014-01-02T01:00:00Z"),
                               ev("v", "c", "P2", "2014-01-03T01:00:00Z")},
                              "v")) == std::pair{PC::PlatformRegular, JC::MultiProjectExplorer});
}

TEST_CASE("ordering and implication invariants over random logs") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        const auto events = oracle::random_log(seed, 800, 60, 9, 300, 40);
        const auto snap = build_snapshot(events);
        for (auto mode : {Availability::Overlap, Availability::All}) {
            for (const auto& m : compute_volunteer_metrics(derive_profiles(snap), snap.observation_end(), mode)) {
                CHECK(m.regular_projects <= m.explored_projects);
                CHECK(m.explored_projects <= m.available_projects);
                CHECK(m.engagement_rate <= m.exploration_rate);
                CHECK(m.exploration_rate <= 1.0);
                CHECK(m.relative_activity_duration >= 0.0);
                CHECK(m.relative_activity_duration <= 1.0);
                if (m.project_class == ProjectClass::MultiProjectRegular) {
                    CHECK(m.platform_class == PlatformClass::PlatformRegular);
                }
            }
        }
    }
}

TEST_CASE("parallel volunteer metrics equal the serial reference") {
    const auto events = oracle::random_log(4242, 30000, 2000, 40, 5000, 700);
    const auto snap = build_snapshot(events);
    const auto profiles = derive_profiles(snap);
    for (auto mode : {Availability::Overlap, Availability::All}) {
        CHECK(compute_volunteer_metrics(profiles, snap.observation_end(), mode) ==
              serial::compute_volunteer_metrics(profiles, snap.observation_end(), mode));
    }
}

TEST_CASE("class and availability names round-trip") {
    for (auto c : {PlatformClass::PlatformRegular, PlatformClass::PlatformTransient}) {
        CHECK(parse_platform_class(to_string(c)) == c);
    }
    for (auto c : {ProjectClass::MultiProjectExplorer, ProjectClass::MultiProjectRegular, ProjectClass::OneProject}) {
        CHECK(parse_project_class(to_string(c)) == c);
    }
    CHECK(parse_availability("all") == Availability::All);
    CHECK_FALSE(parse_availability("some").has_value());
}
