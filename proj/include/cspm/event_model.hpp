#pragma once

#include "cspm/time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cspm {

/// One task performed by one volunteer in one project at one instant.
struct TaskExecutionEvent {
    std::string volunteer_id;
    std::string task_id;
    std::string project_id;
    Instant timestamp;

    bool operator==(const TaskExecutionEvent&) const = default;
};

using VolunteerIndex = std::uint32_t;
using TaskIndex = std::uint32_t;
using ProjectIndex = std::uint32_t;

/// Event with ids replaced by indices into the snapshot's id tables. The id
/// tables are sorted, so index order equals lexicographic id order.
struct IndexedEvent {
    VolunteerIndex volunteer;
    TaskIndex task;
    ProjectIndex project;
    Instant timestamp;

    bool operator==(const IndexedEvent&) const = default;
};

/// Deduplicated, time-ordered event log. Immutable once built; share freely
/// across threads.
class PlatformSnapshot {
public:
    std::span<const IndexedEvent> events() const noexcept { return events_; }
    std::size_t event_count() const noexcept { return events_.size(); }

    const std::vector<std::string>& volunteer_ids() const noexcept { return volunteer_ids_; }
    const std::vector<std::string>& task_ids() const noexcept { return task_ids_; }
    const std::vector<std::string>& project_ids() const noexcept { return project_ids_; }

    Instant first_event_time() const noexcept { return events_.front().timestamp; }
    Instant last_event_time() const noexcept { return events_.back().timestamp; }
    Instant observation_end() const noexcept { return observation_end_; }
    const std::set<std::string>& excluded_projects() const noexcept { return excluded_projects_; }

    // Diagnostics from construction; not part of snapshot identity.
    std::size_t duplicates_removed() const noexcept { return duplicates_removed_; }
    std::size_t excluded_events() const noexcept { return excluded_events_; }

    TaskExecutionEvent event(std::size_t i) const;
    std::vector<TaskExecutionEvent> materialize() const;

    std::optional<VolunteerIndex> find_volunteer(std::string_view id) const;
    std::optional<ProjectIndex> find_project(std::string_view id) const;

    /// Compares content: events, id tables, observation end and exclusions.
    bool operator==(const PlatformSnapshot& other) const;

private:
    friend PlatformSnapshot build_snapshot(std::span<const TaskExecutionEvent>, std::optional<Instant>,
                                           const std::set<std::string>&);

    std::vector<IndexedEvent> events_;
    std::vector<std::string> volunteer_ids_;
    std::vector<std::string> task_ids_;
    std::vector<std::string> project_ids_;
    Instant observation_end_{};
    std::set<std::string> excluded_projects_;
    std::size_t duplicates_removed_ = 0;
    std::size_t excluded_events_ = 0;
};

/// Drops events of excluded projects, removes repeated (volunteer, task)
/// pairs keeping the earliest, and orders by (timestamp, volunteer, task).
/// `observation_end` defaults to the latest event.
///
/// Throws EmptyDataset, EventAfterObservationEnd, or DataError for empty ids.
PlatformSnapshot build_snapshot(std::span<const TaskExecutionEvent> events,
                                std::optional<Instant> observation_end = std::nullopt,
                                const std::set<std::string>& exclusions = {});

struct ProjectActivity {
    ProjectIndex project;
    std::uint64_t task_count = 0;
    std::vector<Day> days;  // sorted, unique

    bool operator==(const ProjectActivity&) const = default;
};

struct VolunteerProfile {
    std::string volunteer_id;
    VolunteerIndex index = 0;
    Instant join_instant{};  // first event, or an earlier registration date
    Instant first_event{};
    Instant last_instant{};
    std::vector<Day> active_days;            // sorted, unique
    std::vector<ProjectActivity> projects;   // sorted by project index
    ProjectIndex first_project = 0;
    std::uint64_t task_count = 0;

    /// p: projects with at least one task.
    std::size_t explored_projects() const noexcept { return projects.size(); }
    /// g: projects with activity on at least two distinct days.
    std::size_t regular_projects() const noexcept;
    const ProjectActivity* activity_in(ProjectIndex project) const noexcept;

    bool operator==(const VolunteerProfile&) const = default;
};

struct ProjectProfile {
    std::string project_id;
    ProjectIndex index = 0;
    Instant first_event{};
    Instant last_event{};
    std::vector<VolunteerIndex> volunteers;           // sorted
    std::vector<std::uint64_t> volunteer_task_counts;  // aligned with volunteers
    std::uint64_t task_count = 0;
    std::vector<VolunteerIndex> recruited;  // first platform task was here
    std::vector<VolunteerIndex> inherited;  // first platform task was elsewhere

    bool operator==(const ProjectProfile&) const = default;
};

/// Profiles indexed by the snapshot's volunteer/project indices.
struct Profiles {
    std::vector<VolunteerProfile> volunteers;
    std::vector<ProjectProfile> projects;

    const VolunteerProfile* find_volunteer(std::string_view id) const;
    const ProjectProfile* find_project(std::string_view id) const;

    bool operator==(const Profiles&) const = default;
};

/// Optional registration dates keyed by volunteer id. A registration earlier
/// than the first event moves the volunteer's join instant back.
using Registrations = std::map<std::string, Instant, std::less<>>;

/// Per-volunteer and per-project aggregation, parallelised with OpenMP.
Profiles derive_profiles(const PlatformSnapshot& snapshot, const Registrations* registrations = nullptr);

namespace serial {
/// Single-threaded reference built from a single pass with ordered maps.
Profiles derive_profiles(const PlatformSnapshot& snapshot, const Registrations* registrations = nullptr);
}  // namespace serial

}  // namespace cspm
