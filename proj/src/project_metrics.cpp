#include "cspm/project_metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace cspm {

int Balance::sign() const noexcept {
    switch (kind_) {
        case Kind::PositiveUnbounded: return 1;
        case Kind::NegativeUnbounded: return -1;
        case Kind::Finite: return value_ > 0.0 ? 1 : (value_ < 0.0 ? -1 : 0);
    }
    return 0;
}

std::string Balance::to_string() const {
    switch (kind_) {
        case Kind::PositiveUnbounded: return "+inf";
        case Kind::NegativeUnbounded: return "-inf";
        case Kind::Finite: break;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value_);
    return std::string(buf, res.ptr);
}

std::optional<Balance> Balance::parse(std::string_view s) {
    if (s == "+inf") return unbounded(1);
    if (s == "-inf") return unbounded(-1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return finite(v);
}

Balance balance_ratio(double x, double y) {
    if (x < 0.0 || y < 0.0) throw std::invalid_argument("balance operands must be non-negative");
    const double lo = std::min(x, y);
    if (lo == 0.0) {
        if (x == y) return Balance::finite(0.0);
        return Balance::unbounded(x > y ? 1 : -1);
    }
    return Balance::finite((x - y) / lo);
}

namespace {

struct SideMeans {
    std::optional<double> inherited;
    std::optional<double> recruited;
};

SideMeans mean_tasks(const ProjectProfile& project) {
    std::uint64_t inherited_sum = 0, recruited_sum = 0;
    std::size_t ri = 0;
    for (std::size_t k = 0; k < project.volunteers.size(); ++k) {
        const VolunteerIndex v = project.volunteers[k];
        // recruited is a sorted subset of volunteers
        while (ri < project.recruited.size() && project.recruited[ri] < v) ++ri;
        if (ri < project.recruited.size() && project.recruited[ri] == v) {
            recruited_sum += project.volunteer_task_counts[k];
        } else {
            inherited_sum += project.volunteer_task_counts[k];
        }
    }
    SideMeans out;
    if (!project.inherited.empty()) {
        out.inherited = static_cast<double>(inherited_sum) / static_cast<double>(project.inherited.size());
    }
    if (!project.recruited.empty()) {
        out.recruited = static_cast<double>(recruited_sum) / static_cast<double>(project.recruited.size());
    }
    return out;
}

Balance computing_from(const SideMeans& m) {
    if (m.inherited && m.recruited) return balance_ratio(*m.inherited, *m.recruited);
    if (m.inherited) return Balance::unbounded(1);
    if (m.recruited) return Balance::unbounded(-1);
    throw std::invalid_argument("project has no volunteers");
}

}  // namespace

Balance balance_in_recruitment(const ProjectProfile& project) {
    if (project.volunteers.empty()) throw std::invalid_argument("project has no volunteers");
    return balance_ratio(static_cast<double>(project.inherited.size()), static_cast<double>(project.recruited.size()));
}

Balance balance_in_computing(const ProjectProfile& project) { return computing_from(mean_tasks(project)); }

ProjectBalances compute_project_balances(const ProjectProfile& project) {
    ProjectBalances b;
    b.project_id = project.project_id;
    b.inherited = project.inherited.size();
    b.recruited = project.recruited.size();
    const SideMeans means = mean_tasks(project);
    b.inherited_mean_tasks = means.inherited;
    b.recruited_mean_tasks = means.recruited;
    b.balance_in_recruitment = balance_in_recruitment(project);
    b.balance_in_computing = computing_from(means);
    return b;
}

std::vector<ProjectBalances> compute_project_balances(const Profiles& profiles) {
    std::vector<ProjectBalances> out(profiles.projects.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
        out[static_cast<std::size_t>(i)] = compute_project_balances(profiles.projects[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace cspm
