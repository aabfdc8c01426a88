#include "cspm/errors.hpp"
#include "cspm/report.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <omp.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cspm;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ReportConfig quick_config() {
    ReportConfig c;
    c.platform_name = "test";
    c.bootstrap_resamples = 400;
    return c;
}

}  // namespace

TEST_CASE("report on the 40-project platform") {
    const auto r = build_report(build_snapshot(testing::forty_project_platform()), quick_config());
    CHECK(r.summary.events == 94);
    CHECK(r.summary.volunteers == 2);
    CHECK(r.summary.projects == 40);
    REQUIRE(r.volunteers.size() == 2);
    CHECK(r.volunteers[0].volunteer_id == "bg");
    CHECK(r.volunteers[1].volunteer_id == "x");
    CHECK(r.volunteers[1].exploration_rate == 0.25);
    CHECK(r.volunteers[1].engagement_rate == 0.1);
    CHECK(r.projects.size() == 40);
    CHECK(r.projects.front().project_id == "p00");
    CHECK(r.activity_groups.size() == 3);

    std::ostringstream csv;
    write_volunteers_csv(csv, r);
    CHECK(csv.str().find("\nx,40,10,4,0.25,0.1,") != std::string::npos);
}

TEST_CASE("report JSON round-trips exactly") {
    auto events = oracle::random_log(8, 5000, 300, 15, 2000, 200);
    events.push_back(testing::ev("zz-loner", "zz-task", "zz-solo", "2014-06-01T00:00:00Z"));
    auto r = build_report(build_snapshot(events), quick_config());
    r.ingest = IngestSummary{5100, 60, 40};
    const auto doc = to_json(r);
    const auto back = report_from_json(nlohmann::json::parse(doc.dump(2)));
    CHECK(back == r);
    CHECK(to_json(back).dump() == doc.dump());

    bool saw_unbounded = false;
    for (const auto& p : r.projects) saw_unbounded |= !p.balance_in_recruitment.is_finite();
    CHECK(saw_unbounded);
}

TEST_CASE("malformed report documents are schema errors") {
    CHECK_THROWS_AS(report_from_json(nlohmann::json::parse("{}")), SchemaError);
    CHECK_THROWS_AS(report_from_json(nlohmann::json::parse("[1,2]")), SchemaError);
}

TEST_CASE("report is a pure function of its inputs regardless of thread count") {
    const auto snap = build_snapshot(oracle::random_log(21, 8000, 500, 12, 3000, 300));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = to_json(build_report(snap, quick_config())).dump();
    omp_set_num_threads(4);
    const auto four = to_json(build_report(snap, quick_config())).dump();
    omp_set_num_threads(saved);
    CHECK(one == four);
}

TEST_CASE("config hash is stable and sensitive") {
    ReportConfig a, b;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.seed = 2;
    CHECK(a.hash() != b.hash());
    b = a;
    b.availability = Availability::All;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("artifacts land on disk") {
    const auto dir = std::filesystem::temp_directory_path() / "cspm_test_artifacts";
    std::filesystem::remove_all(dir);
    const auto r = build_report(build_snapshot(testing::forty_project_platform()), quick_config());
    write_metrics_artifacts(r, dir);
    write_plot_data(r, dir);
    for (const char* f : {"report.json", "volunteers.csv", "projects.csv", "platform.csv", "classes.csv",
                          "ecdf_recruitment.dat", "ecdf_computing.dat", "activity_ci.dat"}) {
        CAPTURE(f);
        CHECK(std::filesystem::file_size(dir / f) > 0);
    }
    CHECK(report_from_json(nlohmann::json::parse(slurp(dir / "report.json"))) == r);
    CHECK(slurp(dir / "platform.csv").rfind("platform,events,volunteers,projects,", 0) == 0);
}

TEST_CASE("summary prints whole percentages") {
    const auto r = build_report(build_snapshot(testing::forty_project_platform()), quick_config());
    std::ostringstream os;
    print_summary(os, r);
    const auto text = os.str();
    CHECK(text.find("platform_regular") != std::string::npos);
    CHECK(text.find(" 100%  (2)") != std::string::npos);
    CHECK(text.find("   0%  (0)") != std::string::npos);
}

TEST_CASE("number formatting is shortest round-trip") {
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
