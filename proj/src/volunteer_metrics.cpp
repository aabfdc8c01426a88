#include "cspm/volunteer_metrics.hpp"

#include <algorithm>

namespace cspm {

std::string_view to_string(PlatformClass c) {
    switch (c) {
        case PlatformClass::PlatformRegular: return "platform_regular";
        case PlatformClass::PlatformTransient: return "platform_transient";
    }
    return "?";
}

std::string_view to_string(ProjectClass c) {
    switch (c) {
        case ProjectClass::MultiProjectExplorer: return "multi_project_explorer";
        case ProjectClass::MultiProjectRegular: return "multi_project_regular";
        case ProjectClass::OneProject: return "one_project";
    }
    return "?";
}

std::optional<PlatformClass> parse_platform_class(std::string_view s) {
    for (auto c : {PlatformClass::PlatformRegular, PlatformClass::PlatformTransient}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::optional<ProjectClass> parse_project_class(std::string_view s) {
    for (auto c : {ProjectClass::MultiProjectExplorer, ProjectClass::MultiProjectRegular, ProjectClass::OneProject}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::string_view to_string(Availability a) { return a == Availability::All ? "all" : "overlap"; }

std::optional<Availability> parse_availability(std::string_view s) {
    if (s == "all") return Availability::All;
    if (s == "overlap") return Availability::Overlap;
    return std::nullopt;
}

std::size_t availability_count(const VolunteerProfile& volunteer, std::span<const ProjectProfile> projects,
                               Availability mode) {
    if (mode == Availability::All) return projects.size();
    return static_cast<std::size_t>(std::count_if(projects.begin(), projects.end(), [&](const ProjectProfile& p) {
        return p.last_event >= volunteer.join_instant;
    }));
}

double exploration_rate(const VolunteerProfile& volunteer, std::span<const ProjectProfile> projects,
                        Availability mode) {
    const auto a = availability_count(volunteer, projects, mode);
    return static_cast<double>(volunteer.explored_projects()) / static_cast<double>(a);
}

double engagement_rate(const VolunteerProfile& volunteer, std::span<const ProjectProfile> projects,
                       Availability mode) {
    const auto a = availability_count(volunteer, projects, mode);
    return static_cast<double>(volunteer.regular_projects()) / static_cast<double>(a);
}

double relative_activity_duration(const VolunteerProfile& volunteer, Instant observation_end) {
    const Day join = utc_day(volunteer.join_instant);
    const Day tenure = utc_day(observation_end) - join;
    if (tenure <= 0) return 1.0;
    const Day active = utc_day(volunteer.last_instant) - join;
    if (active <= 0) return 0.0;
    return static_cast<double>(active) / static_cast<double>(tenure);
}

std::pair<PlatformClass, ProjectClass> classify(const VolunteerProfile& volunteer) {
    const PlatformClass platform =
        volunteer.active_days.size() >= 2 ? PlatformClass::PlatformRegular : PlatformClass::PlatformTransient;
    ProjectClass project = ProjectClass::OneProject;
    if (volunteer.regular_projects() >= 2) {
        project = ProjectClass::MultiProjectRegular;
    } else if (volunteer.explored_projects() >= 2) {
        project = ProjectClass::MultiProjectExplorer;
    }
    return {platform, project};
}

AvailabilityIndex::AvailabilityIndex(std::span<const ProjectProfile> projects, Availability mode) : mode_(mode) {
    last_events_.reserve(projects.size());
    for (const auto& p : projects) last_events_.push_back(p.last_event);
    std::sort(last_events_.begin(), last_events_.end());
}

std::size_t AvailabilityIndex::count(Instant join) const {
    if (mode_ == Availability::All) return last_events_.size();
    auto it = std::lower_bound(last_events_.begin(), last_events_.end(), join);
    return static_cast<std::size_t>(last_events_.end() - it);
}

namespace {

VolunteerMetrics assemble(const VolunteerProfile& v, std::size_t available, Instant observation_end) {
    VolunteerMetrics m;
    m.volunteer_id = v.volunteer_id;
    m.available_projects = available;
    m.explored_projects = v.explored_projects();
    m.regular_projects = v.regular_projects();
    m.exploration_rate = static_cast<double>(m.explored_projects) / static_cast<double>(available);
    m.engagement_rate = static_cast<double>(m.regular_projects) / static_cast<double>(available);
    m.relative_activity_duration = relative_activity_duration(v, observation_end);
    std::tie(m.platform_class, m.project_class) = classify(v);
    return m;
}

}  // namespace

VolunteerMetrics compute_volunteer_metrics(const VolunteerProfile& volunteer, const AvailabilityIndex& availability,
                                           Instant observation_end) {
    return assemble(volunteer, availability.count(volunteer.join_instant), observation_end);
}

std::vector<VolunteerMetrics> compute_volunteer_metrics(const Profiles& profiles, Instant observation_end,
                                                        Availability mode) {
    const AvailabilityIndex availability(profiles.projects, mode);
    std::vector<VolunteerMetrics> out(profiles.volunteers.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = compute_volunteer_metrics(profiles.volunteers[k], availability, observation_end);
    }
    return out;
}

namespace serial {

std::vector<VolunteerMetrics> compute_volunteer_metrics(const Profiles& profiles, Instant observation_end,
                                                        Availability mode) {
    std::vector<VolunteerMetrics> out;
    out.reserve(profiles.volunteers.size());
    for (const auto& v : profiles.volunteers) {
        out.push_back(assemble(v, availability_count(v, profiles.projects, mode), observation_end));
    }
    return out;
}

}  // namespace serial

}  // namespace cspm
