#include "cspm/platform_metrics.hpp"

#include "cspm/errors.hpp"
#include "cspm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspm {

double gini(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("gini of an empty collection");
    std::vector<double> x(values.begin(), values.end());
    for (double v : x) {
        if (!(v >= 0.0)) throw std::invalid_argument("gini requires non-negative values");
    }
    std::sort(x.begin(), x.end());
    const auto n = static_cast<double>(x.size());
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        total += x[i];
        weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
    }
    if (total == 0.0) throw UndefinedGini();
    return weighted / (n * total);
}

double recruitment_inequality(const Profiles& profiles) {
    std::vector<double> counts;
    counts.reserve(profiles.projects.size());
    for (const auto& p : profiles.projects) counts.push_back(static_cast<double>(p.recruited.size()));
    return gini(counts);
}

double contribution_inequality(const Profiles& profiles) {
    std::vector<double> counts;
    counts.reserve(profiles.projects.size());
    for (const auto& p : profiles.projects) counts.push_back(static_cast<double>(p.task_count));
    return gini(counts);
}

// ---------------------------------------------------------------------------

Ecdf::Ecdf(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) throw std::invalid_argument("ECDF needs at least one finite value");
    build();
}

Ecdf::Ecdf(std::span<const Balance> balances) {
    for (const auto& b : balances) {
        switch (b.kind()) {
            case Balance::Kind::Finite: sorted_.push_back(b.value()); break;
            case Balance::Kind::NegativeUnbounded: ++unbounded_negative_; break;
            case Balance::Kind::PositiveUnbounded: ++unbounded_positive_; break;
        }
    }
    build();
}

void Ecdf::build() {
    std::sort(sorted_.begin(), sorted_.end());
    const auto n = static_cast<double>(sorted_.size());
    for (std::size_t i = 0; i < sorted_.size(); ++i) {
        if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) continue;
        points_.push_back({sorted_[i], static_cast<double>(i + 1) / n});
    }
}

double Ecdf::operator()(double x) const {
    if (sorted_.empty()) return 0.0;
    auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

// ---------------------------------------------------------------------------

namespace {

double mean_of(std::span<const double> sample) {
    long double sum = 0.0L;
    for (double v : sample) sum += v;
    return static_cast<double>(sum / static_cast<long double>(sample.size()));
}

double resampled_mean(std::span<const double> sample, std::uint64_t seed, std::uint64_t r) {
    auto rng = SplitMix64::substream(seed, r);
    const auto n = static_cast<std::uint64_t>(sample.size());
    long double sum = 0.0L;
    for (std::uint64_t k = 0; k < n; ++k) sum += sample[uniform_below(rng, n)];
    return static_cast<double>(sum / static_cast<long double>(n));
}

double quantile_sorted(const std::vector<double>& x, double q) {
    const double h = (static_cast<double>(x.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= x.size()) return x.back();
    return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

BootstrapCI finish_ci(std::span<const double> sample, double level, std::size_t resamples, std::uint64_t seed,
                      std::vector<double>& means) {
    std::sort(means.begin(), means.end());
    BootstrapCI ci;
    ci.mean = mean_of(sample);
    ci.level = level;
    ci.resamples = resamples;
    ci.seed = seed;
    ci.sample_size = sample.size();
    const double alpha = (1.0 - level) / 2.0;
    ci.lower = std::min(quantile_sorted(means, alpha), ci.mean);
    ci.upper = std::max(quantile_sorted(means, 1.0 - alpha), ci.mean);
    return ci;
}

void check_bootstrap_args(std::span<const double> sample, double level, std::size_t resamples) {
    if (sample.empty()) throw std::invalid_argument("bootstrap of an empty sample");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");
    if (resamples == 0) throw std::invalid_argument("at least one resample is required");
}

}  // namespace

BootstrapCI bootstrap_mean_ci(std::span<const double> sample, double level, std::size_t resamples,
                              std::uint64_t seed) {
    check_bootstrap_args(sample, level, resamples);
    std::vector<double> means(resamples);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(resamples); ++r) {
        means[static_cast<std::size_t>(r)] = resampled_mean(sample, seed, static_cast<std::uint64_t>(r));
    }
    return finish_ci(sample, level, resamples, seed, means);
}

namespace serial {

BootstrapCI bootstrap_mean_ci(std::span<const double> sample, double level, std::size_t resamples,
                              std::uint64_t seed) {
    check_bootstrap_args(sample, level, resamples);
    std::vector<double> means;
    means.reserve(resamples);
    for (std::size_t r = 0; r < resamples; ++r) means.push_back(resampled_mean(sample, seed, r));
    return finish_ci(sample, level, resamples, seed, means);
}

}  // namespace serial

// ---------------------------------------------------------------------------

namespace {
double round4(double percent) { return std::round(percent * 1e4) / 1e4; }
}  // namespace

double ClassDistribution::fraction(PlatformClass c) const {
    return static_cast<double>(count(c)) / static_cast<double>(total);
}
double ClassDistribution::fraction(ProjectClass c) const {
    return static_cast<double>(count(c)) / static_cast<double>(total);
}
double ClassDistribution::percent(PlatformClass c) const { return round4(100.0 * fraction(c)); }
double ClassDistribution::percent(ProjectClass c) const { return round4(100.0 * fraction(c)); }

ClassDistribution class_distribution(std::span<const VolunteerMetrics> metrics) {
    if (metrics.empty()) throw std::invalid_argument("class distribution of no volunteers");
    ClassDistribution d;
    d.total = metrics.size();
    for (const auto& m : metrics) {
        ++d.platform[static_cast<std::size_t>(m.platform_class)];
        ++d.project[static_cast<std::size_t>(m.project_class)];
    }
    return d;
}

std::vector<ActivityGroup> activity_duration_groups(std::span<const VolunteerMetrics> metrics, double level,
                                                    std::size_t resamples, std::uint64_t seed) {
    std::vector<ActivityGroup> groups;
    std::uint64_t index = 0;
    for (auto c : {ProjectClass::MultiProjectExplorer, ProjectClass::MultiProjectRegular, ProjectClass::OneProject}) {
        std::vector<double> sample;
        for (const auto& m : metrics) {
            if (m.platform_class == PlatformClass::PlatformRegular && m.project_class == c) {
                sample.push_back(m.relative_activity_duration);
            }
        }
        ActivityGroup g;
        g.project_class = c;
        g.count = sample.size();
        if (!sample.empty()) g.ci = bootstrap_mean_ci(sample, level, resamples, mix64(seed + index));
        groups.push_back(std::move(g));
        ++index;
    }
    return groups;
}

}  // namespace cspm
