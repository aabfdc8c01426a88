#pragma once

#include "cspm/event_model.hpp"
#include "cspm/time.hpp"

#include <fmt/format.h>

#include <string>
#include <vector>

namespace testing {

inline cspm::TaskExecutionEvent ev(std::string volunteer, std::string task, std::string project,
                                   const std::string& when) {
    return {std::move(volunteer), std::move(task), std::move(project), cspm::parse_instant(when)};
}

inline cspm::Instant at(const std::string& when) { return cspm::parse_instant(when); }

// 40 projects kept alive from 2014-01-01 to 2014-12-31 by a background
// volunteer. "x" joins on 2014-03-01, touches 10 projects and returns on a
// second day to 4 of them.
inline std::vector<cspm::TaskExecutionEvent> forty_project_platform() {
    std::vector<cspm::TaskExecutionEvent> events;
    for (int p = 0; p < 40; ++p) {
        const auto pid = fmt::format("p{:02}", p);
        events.push_back(ev("bg", pid + "-open", pid, "2014-01-01T00:00:00Z"));
        events.push_back(ev("bg", pid + "-close", pid, "2014-12-31T00:00:00Z"));
    }
    for (int p = 0; p < 10; ++p) {
        const auto pid = fmt::format("p{:02}", p);
        events.push_back(ev("x", pid + "-x1", pid, "2014-03-01T12:00:00Z"));
        if (p < 4) events.push_back(ev("x", pid + "-x2", pid, "2014-03-09T12:00:00Z"));
    }
    return events;
}

}  // namespace testing
