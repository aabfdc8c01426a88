#pragma once

#include "cspm/event_model.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace cspm {

enum class PlatformClass { PlatformRegular, PlatformTransient };
enum class ProjectClass { MultiProjectExplorer, MultiProjectRegular, OneProject };

inline constexpr std::array kPlatformClasses{PlatformClass::PlatformRegular, PlatformClass::PlatformTransient};
inline constexpr std::array kProjectClasses{ProjectClass::MultiProjectExplorer, ProjectClass::MultiProjectRegular,
                                            ProjectClass::OneProject};

std::string_view to_string(PlatformClass c);
std::string_view to_string(ProjectClass c);
std::optional<PlatformClass> parse_platform_class(std::string_view s);
std::optional<ProjectClass> parse_project_class(std::string_view s);

/// Which projects count as available to a volunteer.
///   Overlap: projects whose last event is at or after the volunteer joined.
///   All:     every project in the snapshot.
enum class Availability { Overlap, All };

std::string_view to_string(Availability a);
std::optional<Availability> parse_availability(std::string_view s);

struct VolunteerMetrics {
    std::string volunteer_id;
    std::size_t available_projects = 0;  // a
    std::size_t explored_projects = 0;   // p
    std::size_t regular_projects = 0;    // g
    double exploration_rate = 0.0;       // p / a
    double engagement_rate = 0.0;        // g / a
    double relative_activity_duration = 0.0;
    PlatformClass platform_class = PlatformClass::PlatformTransient;
    ProjectClass project_class = ProjectClass::OneProject;

    bool operator==(const VolunteerMetrics&) const = default;
};

/// a for one volunteer; linear scan over the projects.
std::size_t availability_count(const VolunteerProfile& volunteer, std::span<const ProjectProfile> projects,
                               Availability mode = Availability::Overlap);

double exploration_rate(const VolunteerProfile& volunteer, std::span<const ProjectProfile> projects,
                        Availability mode = Availability::Overlap);
double engagement_rate(const VolunteerProfile& volunteer, std::span<const ProjectProfile> projects,
                       Availability mode = Availability::Overlap);

/// Whole UTC days from first to last contribution over whole UTC days from
/// joining to the observation end. 1 when the denominator is zero.
double relative_activity_duration(const VolunteerProfile& volunteer, Instant observation_end);

std::pair<PlatformClass, ProjectClass> classify(const VolunteerProfile& volunteer);

/// Answers availability_count in O(log n) per volunteer from the sorted
/// project end times.
class AvailabilityIndex {
public:
    AvailabilityIndex(std::span<const ProjectProfile> projects, Availability mode);
    std::size_t count(Instant join) const;

private:
    std::vector<Instant> last_events_;
    Availability mode_;
};

VolunteerMetrics compute_volunteer_metrics(const VolunteerProfile& volunteer, const AvailabilityIndex& availability,
                                           Instant observation_end);

/// All volunteers, in volunteer index order. OpenMP-parallel.
std::vector<VolunteerMetrics> compute_volunteer_metrics(const Profiles& profiles, Instant observation_end,
                                                        Availability mode = Availability::Overlap);

namespace serial {
/// Reference: per-volunteer linear availability scan, single thread.
std::vector<VolunteerMetrics> compute_volunteer_metrics(const Profiles& profiles, Instant observation_end,
                                                        Availability mode = Availability::Overlap);
}  // namespace serial

}  // namespace cspm
