#include "cspm/errors.hpp"
#include "cspm/time.hpp"

#include <doctest.h>

using namespace cspm;

TEST_CASE("timestamps parse in the accepted ISO-8601 forms") {
    const Instant z = parse_instant("2014-07-17T10:00:00Z");
    CHECK(parse_instant("2014-07-17 10:00:00") == z);
    CHECK(parse_instant("2014-07-17T10:00:00") == z);
    CHECK(parse_instant("2014-07-17T10:00:00.987654") == z);
    CHECK(parse_instant("2014-07-17T12:00:00+02:00") == z);
    CHECK(parse_instant("2014-07-17T09:30:00-0030") == z);
    CHECK(format_instant(z) == "2014-07-17T10:00:00Z");
    CHECK(format_instant(parse_instant("2013-03-25")) == "2013-03-25T00:00:00Z");
}

TEST_CASE("malformed timestamps are rejected") {
    for (const char* bad : {"", "2014-13-01T00:00:00Z", "2014-02-30", "2014-07-17T25:00:00", "yesterday",
                            "2014-07-17T10:00", "2014-07-17T10:00:00Q", "2014/07/17"}) {
        CAPTURE(bad);
        CHECK_FALSE(try_parse_instant(bad).has_value());
    }
    CHECK_THROWS_AS(parse_instant("not a date"), InvalidTimestamp);
}

TEST_CASE("calendar days are UTC dates") {
    CHECK(utc_day(parse_instant("1970-01-01T23:59:59Z")) == 0);
    CHECK(utc_day(parse_instant("1970-01-02T00:00:00Z")) == 1);
    CHECK(utc_day(parse_instant("1969-12-31T23:59:59Z")) == -1);
    // 23:30 at UTC-01:00 is already the next UTC day
    CHECK(utc_day(parse_instant("2014-07-17T23:30:00-01:00")) == utc_day(parse_instant("2014-07-18T00:00:00Z")));
}
