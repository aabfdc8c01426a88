#include "cspm/project_metrics.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <fmt/format.h>

#include <cmath>
#include <random>

using namespace cspm;
using testing::ev;

namespace {

// Project "X" with the given task counts for inherited volunteers (first
// task in "Home") and for recruited volunteers.
ProjectProfile project_with(const std::vector<int>& inherited_tasks, const std::vector<int>& recruited_tasks) {
    std::vector<TaskExecutionEvent> events;
    int serial = 0;
    auto add = [&](const std::string& v, const std::string& p, const std::string& when) {
        events.push_back(ev(v, fmt::format("t{:05}", serial++), p, when));
    };
    for (std::size_t i = 0; i < inherited_tasks.size(); ++i) {
        const auto v = fmt::format("inh{}", i);
        add(v, "Home", "2014-01-01T00:00:00Z");
        for (int k = 0; k < inherited_tasks[i]; ++k) add(v, "X", "2014-02-01T00:00:00Z");
    }
    for (std::size_t i = 0; i < recruited_tasks.size(); ++i) {
        const auto v = fmt::format("rec{}", i);
        for (int k = 0; k < recruited_tasks[i]; ++k) add(v, "X", "2014-02-01T00:00:00Z");
    }
    const auto profiles = derive_profiles(build_snapshot(events));
    return *profiles.find_project("X");
}

}  // namespace

TEST_CASE("balance in recruitment examples") {
    CHECK(balance_ratio(5, 5) == Balance::finite(0.0));
    CHECK(balance_ratio(6, 2) == Balance::finite(2.0));
    CHECK(balance_ratio(0, 7) == Balance::unbounded(-1));
    CHECK(balance_ratio(7, 0) == Balance::unbounded(+1));

    const auto p = project_with({1, 1, 1, 1, 1, 1}, {1, 1});
    CHECK(p.inherited.size() == 6);
    CHECK(p.recruited.size() == 2);
    CHECK(balance_in_recruitment(p) == Balance::finite(2.0));
}

TEST_CASE("balance in computing examples") {
    SUBCASE("equal means") {
        CHECK(balance_in_computing(project_with({10, 10}, {10})) == Balance::finite(0.0));
    }
    SUBCASE("inherited {12, 8} vs recruited {4, 6}") {
        const auto p = project_with({12, 8}, {4, 6});
        const auto b = compute_project_balances(p);
        CHECK(b.inherited_mean_tasks == 10.0);
        CHECK(b.recruited_mean_tasks == 5.0);
        CHECK(b.balance_in_computing == Balance::finite(1.0));
    }
    SUBCASE("only recruited volunteers") {
        const auto p = project_with({}, {3});
        const auto b = compute_project_balances(p);
        CHECK_FALSE(b.inherited_mean_tasks.has_value());
        CHECK(b.balance_in_computing == Balance::unbounded(-1));
        CHECK(b.balance_in_recruitment == Balance::unbounded(-1));
    }
    SUBCASE("only inherited volunteers") {
        const auto b = compute_project_balances(project_with({2, 4}, {}));
        CHECK(b.balance_in_computing == Balance::unbounded(+1));
        CHECK(b.balance_in_recruitment == Balance::unbounded(+1));
    }
}

TEST_CASE("balance antisymmetry, sign semantics and direct-formula agreement") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 20000; ++i) {
        const double x = static_cast<double>(uniform_below(rng, 50));
        const double y = static_cast<double>(uniform_below(rng, 50));
        const auto b = balance_ratio(x, y);
        const auto r = balance_ratio(y, x);
        CHECK(b.sign() == (x > y) - (x < y));
        if (x > 0 && y > 0) {
            REQUIRE(b.is_finite());
            CHECK(b.value() == -r.value());
            CHECK(std::abs(b.value() - (x - y) / std::min(x, y)) <= 1e-12);
        } else if (x != y) {
            CHECK_FALSE(b.is_finite());
            CHECK(r.sign() == -b.sign());
        }
        CHECK_FALSE(std::isnan(b.value()));
    }
    // non-integer means
    for (int i = 0; i < 2000; ++i) {
        const double t = 1.0 + uniform_unit(rng) * 40.0;
        const double m = 1.0 + uniform_unit(rng) * 40.0;
        CHECK(balance_ratio(t, m).value() == -balance_ratio(m, t).value());
    }
}

TEST_CASE("computed balances match a direct evaluation on random platforms") {
    const auto events = oracle::random_log(8, 8000, 300, 15, 3000, 200);
    const auto profiles = derive_profiles(build_snapshot(events));
    for (const auto& p : profiles.projects) {
        const auto b = compute_project_balances(p);
        CHECK(b.inherited + b.recruited == p.volunteers.size());
        double ti = 0, tr = 0;
        for (std::size_t k = 0; k < p.volunteers.size(); ++k) {
            const bool rec = profiles.volunteers[p.volunteers[k]].first_project == p.index;
            (rec ? tr : ti) += static_cast<double>(p.volunteer_task_counts[k]);
        }
        const double n = static_cast<double>(b.inherited), u = static_cast<double>(b.recruited);
        if (n > 0 && u > 0) {
            CHECK(std::abs(b.balance_in_recruitment.value() - (n - u) / std::min(n, u)) <= 1e-12);
            const double t = ti / n, m = tr / u;
            CHECK(std::abs(b.balance_in_computing.value() - (t - m) / std::min(t, m)) <= 1e-12);
        }
    }
}

TEST_CASE("balance text form round-trips") {
    for (const auto& b : {Balance::finite(0.0), Balance::finite(-1.25), Balance::finite(1.0 / 3.0),
                          Balance::unbounded(1), Balance::unbounded(-1)}) {
        CHECK(Balance::parse(b.to_string()) == b);
    }
    CHECK_FALSE(Balance::parse("inf").has_value());
}
