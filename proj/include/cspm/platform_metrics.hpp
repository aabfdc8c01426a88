#pragma once

#include "cspm/event_model.hpp"
#include "cspm/project_metrics.hpp"
#include "cspm/volunteer_metrics.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cspm {

// ---------------------------------------------------------------------------
// Inequality

/// Standard Gini coefficient, sum_i sum_j |x_i - x_j| / (2 n^2 mean), computed
/// in O(n log n) from the sorted values. Ranges over [0, (n-1)/n].
///
/// Throws std::invalid_argument for empty input or negative values, and
/// UndefinedGini when every value is zero.
double gini(std::span<const double> values);

/// Gini over per-project recruited-volunteer counts (projects with no
/// recruits contribute zeros).
double recruitment_inequality(const Profiles& profiles);

/// Gini over per-project task counts.
double contribution_inequality(const Profiles& profiles);

// ---------------------------------------------------------------------------
// Empirical distribution

struct EcdfPoint {
    double x;
    double fraction;  // F(x), fraction of finite values <= x

    bool operator==(const EcdfPoint&) const = default;
};

/// Right-continuous ECDF over the finite values. Unbounded balances are kept
/// out of the curve and only counted.
class Ecdf {
public:
    /// Throws std::invalid_argument when `values` is empty.
    explicit Ecdf(std::vector<double> values);
    /// Finite part of `balances`; may be empty if every balance is unbounded.
    explicit Ecdf(std::span<const Balance> balances);

    /// Fraction of finite values <= x; 0 when there are none.
    double operator()(double x) const;

    /// One point per distinct value, ascending.
    const std::vector<EcdfPoint>& points() const noexcept { return points_; }
    std::size_t finite_count() const noexcept { return sorted_.size(); }
    std::size_t unbounded_negative() const noexcept { return unbounded_negative_; }
    std::size_t unbounded_positive() const noexcept { return unbounded_positive_; }

private:
    void build();

    std::vector<double> sorted_;
    std::vector<EcdfPoint> points_;
    std::size_t unbounded_negative_ = 0;
    std::size_t unbounded_positive_ = 0;
};

// ---------------------------------------------------------------------------
// Bootstrap

struct BootstrapCI {
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    std::size_t resamples = 10000;
    std::uint64_t seed = 0;
    std::size_t sample_size = 0;

    bool operator==(const BootstrapCI&) const = default;
};

/// Percentile bootstrap of the mean. Resample r draws from its own stream
/// keyed on (seed, r), so results do not depend on the thread count.
/// Quantiles interpolate linearly between order statistics.
BootstrapCI bootstrap_mean_ci(std::span<const double> sample, double level = 0.95, std::size_t resamples = 10000,
                              std::uint64_t seed = 0);

namespace serial {
BootstrapCI bootstrap_mean_ci(std::span<const double> sample, double level = 0.95, std::size_t resamples = 10000,
                              std::uint64_t seed = 0);
}  // namespace serial

// ---------------------------------------------------------------------------
// Class tables

struct ClassDistribution {
    std::size_t total = 0;
    std::array<std::size_t, 2> platform{};  // indexed by PlatformClass
    std::array<std::size_t, 3> project{};   // indexed by ProjectClass

    std::size_t count(PlatformClass c) const { return platform[static_cast<std::size_t>(c)]; }
    std::size_t count(ProjectClass c) const { return project[static_cast<std::size_t>(c)]; }
    /// Exact share; the two dimensions each sum to total.
    double fraction(PlatformClass c) const;
    double fraction(ProjectClass c) const;
    /// Percentage rounded to four decimals.
    double percent(PlatformClass c) const;
    double percent(ProjectClass c) const;

    bool operator==(const ClassDistribution&) const = default;
};

/// Throws std::invalid_argument when `metrics` is empty.
ClassDistribution class_distribution(std::span<const VolunteerMetrics> metrics);

// ---------------------------------------------------------------------------
// Relative activity duration by project class, among platform-regular
// volunteers.

struct ActivityGroup {
    ProjectClass project_class = ProjectClass::OneProject;
    std::size_t count = 0;
    std::optional<BootstrapCI> ci;  // absent for empty groups

    bool operator==(const ActivityGroup&) const = default;
};

/// One group per ProjectClass in enum order. Each group's bootstrap seed is
/// derived from `seed` and the group index.
std::vector<ActivityGroup> activity_duration_groups(std::span<const VolunteerMetrics> metrics, double level,
                                                    std::size_t resamples, std::uint64_t seed);

}  // namespace cspm
