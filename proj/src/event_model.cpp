#include "cspm/event_model.hpp"

#include "cspm/errors.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace cspm {

namespace {

// Assigns provisional indices in first-seen order, then renumbers so that
// index order equals lexicographic order.
class Interner {
public:
    std::uint32_t add(std::string_view s) {
        auto [it, inserted] = index_.try_emplace(s, static_cast<std::uint32_t>(names_.size()));
        if (inserted) names_.push_back(s);
        return it->second;
    }

    // Returns the sorted names and writes the provisional -> final mapping.
    std::vector<std::string> finish(std::vector<std::uint32_t>& remap) const {
        std::vector<std::uint32_t> order(names_.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return names_[a] < names_[b]; });
        remap.assign(names_.size(), 0);
        std::vector<std::string> sorted;
        sorted.reserve(names_.size());
        for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
            remap[order[rank]] = rank;
            sorted.emplace_back(names_[order[rank]]);
        }
        return sorted;
    }

private:
    std::unordered_map<std::string_view, std::uint32_t> index_;
    std::vector<std::string_view> names_;
};

template <class Vec>
std::optional<std::uint32_t> lookup(const Vec& sorted, std::string_view id) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), id,
                               [](const std::string& a, std::string_view b) { return a < b; });
    if (it == sorted.end() || *it != id) return std::nullopt;
    return static_cast<std::uint32_t>(it - sorted.begin());
}

}  // namespace

TaskExecutionEvent PlatformSnapshot::event(std::size_t i) const {
    const IndexedEvent& e = events_.at(i);
    return {volunteer_ids_[e.volunteer], task_ids_[e.task], project_ids_[e.project], e.timestamp};
}

std::vector<TaskExecutionEvent> PlatformSnapshot::materialize() const {
    std::vector<TaskExecutionEvent> out;
    out.reserve(events_.size());
    for (std::size_t i = 0; i < events_.size(); ++i) out.push_back(event(i));
    return out;
}

std::optional<VolunteerIndex> PlatformSnapshot::find_volunteer(std::string_view id) const {
    return lookup(volunteer_ids_, id);
}

std::optional<ProjectIndex> PlatformSnapshot::find_project(std::string_view id) const {
    return lookup(project_ids_, id);
}

bool PlatformSnapshot::operator==(const PlatformSnapshot& o) const {
    return events_ == o.events_ && volunteer_ids_ == o.volunteer_ids_ && task_ids_ == o.task_ids_ &&
           project_ids_ == o.project_ids_ && observation_end_ == o.observation_end_ &&
           excluded_projects_ == o.excluded_projects_;
}

PlatformSnapshot build_snapshot(std::span<const TaskExecutionEvent> input, std::optional<Instant> observation_end,
                                const std::set<std::string>& exclusions) {
    PlatformSnapshot snap;
    snap.excluded_projects_ = exclusions;

    Interner volunteers, tasks, projects;
    std::vector<IndexedEvent> events;
    events.reserve(input.size());
    for (const auto& e : input) {
        if (e.volunteer_id.empty() || e.task_id.empty() || e.project_id.empty()) {
            throw DataError("event with an empty id at " + format_instant(e.timestamp));
        }
        if (exclusions.count(e.project_id) != 0) {
            ++snap.excluded_events_;
            continue;
        }
        if (observation_end && e.timestamp > *observation_end) {
            throw EventAfterObservationEnd("event (" + e.volunteer_id + ", " + e.task_id + ") at " +
                                           format_instant(e.timestamp) + " is after the observation end " +
                                           format_instant(*observation_end));
        }
        events.push_back({volunteers.add(e.volunteer_id), tasks.add(e.task_id), projects.add(e.project_id),
                          e.timestamp});
    }
    if (events.empty()) throw EmptyDataset();

    std::vector<std::uint32_t> vmap, tmap, pmap;
    snap.volunteer_ids_ = volunteers.finish(vmap);
    snap.task_ids_ = tasks.finish(tmap);
    snap.project_ids_ = projects.finish(pmap);
    for (auto& e : events) {
        e.volunteer = vmap[e.volunteer];
        e.task = tmap[e.task];
        e.project = pmap[e.project];
    }

    // Earliest record per (volunteer, task); project breaks exact ties.
    std::sort(events.begin(), events.end(), [](const IndexedEvent& a, const IndexedEvent& b) {
        return std::tie(a.volunteer, a.task, a.timestamp, a.project) <
               std::tie(b.volunteer, b.task, b.timestamp, b.project);
    });
    auto last = std::unique(events.begin(), events.end(), [](const IndexedEvent& a, const IndexedEvent& b) {
        return a.volunteer == b.volunteer && a.task == b.task;
    });
    snap.duplicates_removed_ = static_cast<std::size_t>(events.end() - last);
    events.erase(last, events.end());

    std::sort(events.begin(), events.end(), [](const IndexedEvent& a, const IndexedEvent& b) {
        return std::tie(a.timestamp, a.volunteer, a.task) < std::tie(b.timestamp, b.volunteer, b.task);
    });

    snap.observation_end_ = observation_end.value_or(events.back().timestamp);
    snap.events_ = std::move(events);
    return snap;
}

std::size_t VolunteerProfile::regular_projects() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(projects.begin(), projects.end(), [](const ProjectActivity& a) { return a.days.size() >= 2; }));
}

const ProjectActivity* VolunteerProfile::activity_in(ProjectIndex project) const noexcept {
    auto it = std::lower_bound(projects.begin(), projects.end(), project,
                               [](const ProjectActivity& a, ProjectIndex p) { return a.project < p; });
    if (it == projects.end() || it->project != project) return nullptr;
    return &*it;
}

const VolunteerProfile* Profiles::find_volunteer(std::string_view id) const {
    auto it = std::lower_bound(volunteers.begin(), volunteers.end(), id,
                               [](const VolunteerProfile& v, std::string_view s) { return v.volunteer_id < s; });
    if (it == volunteers.end() || it->volunteer_id != id) return nullptr;
    return &*it;
}

const ProjectProfile* Profiles::find_project(std::string_view id) const {
    auto it = std::lower_bound(projects.begin(), projects.end(), id,
                               [](const ProjectProfile& p, std::string_view s) { return p.project_id < s; });
    if (it == projects.end() || it->project_id != id) return nullptr;
    return &*it;
}

namespace {

// Stable counting sort of event positions by key; returns offsets of size
// groups + 1 and writes positions grouped by key, each group in time order.
template <class KeyFn>
std::vector<std::size_t> group_by(std::span<const IndexedEvent> events, std::size_t groups, KeyFn key,
                                  std::vector<std::uint32_t>& positions) {
    std::vector<std::size_t> offsets(groups + 1, 0);
    for (const auto& e : events) ++offsets[key(e) + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    positions.assign(events.size(), 0);
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < events.size(); ++i) positions[cursor[key(events[i])]++] = static_cast<std::uint32_t>(i);
    return offsets;
}

void apply_registration(VolunteerProfile& v, const Registrations* registrations) {
    if (registrations == nullptr) return;
    auto it = registrations->find(v.volunteer_id);
    if (it != registrations->end() && it->second < v.join_instant) v.join_instant = it->second;
}

}  // namespace

Profiles derive_profiles(const PlatformSnapshot& snapshot, const Registrations* registrations) {
    const auto events = snapshot.events();
    const std::size_t nv = snapshot.volunteer_ids().size();
    const std::size_t np = snapshot.project_ids().size();

    Profiles out;
    out.volunteers.resize(nv);
    out.projects.resize(np);

    std::vector<std::uint32_t> by_volunteer;
    const auto voff = group_by(events, nv, [](const IndexedEvent& e) { return e.volunteer; }, by_volunteer);

#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t vi = 0; vi < static_cast<std::ptrdiff_t>(nv); ++vi) {
        VolunteerProfile& v = out.volunteers[static_cast<std::size_t>(vi)];
        v.volunteer_id = snapshot.volunteer_ids()[static_cast<std::size_t>(vi)];
        v.index = static_cast<VolunteerIndex>(vi);
        const std::size_t begin = voff[static_cast<std::size_t>(vi)];
        const std::size_t end = voff[static_cast<std::size_t>(vi) + 1];
        const IndexedEvent& first = events[by_volunteer[begin]];
        v.first_event = v.join_instant = first.timestamp;
        v.first_project = first.project;
        v.last_instant = events[by_volunteer[end - 1]].timestamp;
        v.task_count = end - begin;
        for (std::size_t k = begin; k < end; ++k) {
            const IndexedEvent& e = events[by_volunteer[k]];
            const Day d = utc_day(e.timestamp);
            if (v.active_days.empty() || v.active_days.back() != d) v.active_days.push_back(d);
            auto it = std::lower_bound(v.projects.begin(), v.projects.end(), e.project,
                                       [](const ProjectActivity& a, ProjectIndex p) { return a.project < p; });
            if (it == v.projects.end() || it->project != e.project) {
                it = v.projects.insert(it, ProjectActivity{e.project, 0, {}});
            }
            ++it->task_count;
            if (it->days.empty() || it->days.back() != d) it->days.push_back(d);
        }
        apply_registration(v, registrations);
    }

    std::vector<std::uint32_t> by_project;
    const auto poff = group_by(events, np, [](const IndexedEvent& e) { return e.project; }, by_project);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t pi = 0; pi < static_cast<std::ptrdiff_t>(np); ++pi) {
        ProjectProfile& p = out.projects[static_cast<std::size_t>(pi)];
        p.project_id = snapshot.project_ids()[static_cast<std::size_t>(pi)];
        p.index = static_cast<ProjectIndex>(pi);
        const std::size_t begin = poff[static_cast<std::size_t>(pi)];
        const std::size_t end = poff[static_cast<std::size_t>(pi) + 1];
        p.first_event = events[by_project[begin]].timestamp;
        p.last_event = events[by_project[end - 1]].timestamp;
        p.task_count = end - begin;

        std::vector<VolunteerIndex> members;
        members.reserve(end - begin);
        for (std::size_t k = begin; k < end; ++k) members.push_back(events[by_project[k]].volunteer);
        std::sort(members.begin(), members.end());
        for (std::size_t k = 0; k < members.size();) {
            std::size_t run = k;
            while (run < members.size() && members[run] == members[k]) ++run;
            const VolunteerIndex v = members[k];
            p.volunteers.push_back(v);
            p.volunteer_task_counts.push_back(run - k);
            if (out.volunteers[v].first_project == p.index) {
                p.recruited.push_back(v);
            } else {
                p.inherited.push_back(v);
            }
            k = run;
        }
    }
    return out;
}

namespace serial {

Profiles derive_profiles(const PlatformSnapshot& snapshot, const Registrations* registrations) {
    struct VolunteerAcc {
        Instant first{Instant::max()};
        Instant last{Instant::min()};
        TaskIndex first_task = 0;
        ProjectIndex first_project = 0;
        std::set<Day> days;
        std::map<ProjectIndex, std::pair<std::uint64_t, std::set<Day>>> projects;
        std::uint64_t tasks = 0;
    };
    struct ProjectAcc {
        Instant first{Instant::max()};
        Instant last{Instant::min()};
        std::map<VolunteerIndex, std::uint64_t> members;
        std::uint64_t tasks = 0;
    };

    std::map<VolunteerIndex, VolunteerAcc> vacc;
    std::map<ProjectIndex, ProjectAcc> pacc;
    for (const IndexedEvent& e : snapshot.events()) {
        VolunteerAcc& v = vacc[e.volunteer];
        if (e.timestamp < v.first || (e.timestamp == v.first && e.task < v.first_task)) {
            v.first = e.timestamp;
            v.first_task = e.task;
            v.first_project = e.project;
        }
        v.last = std::max(v.last, e.timestamp);
        const Day d = utc_day(e.timestamp);
        v.days.insert(d);
        auto& pa = v.projects[e.project];
        ++pa.first;
        pa.second.insert(d);
        ++v.tasks;

        ProjectAcc& p = pacc[e.project];
        p.first = std::min(p.first, e.timestamp);
        p.last = std::max(p.last, e.timestamp);
        ++p.members[e.volunteer];
        ++p.tasks;
    }

    Profiles out;
    for (const auto& [idx, acc] : vacc) {
        VolunteerProfile v;
        v.volunteer_id = snapshot.volunteer_ids()[idx];
        v.index = idx;
        v.join_instant = v.first_event = acc.first;
        v.last_instant = acc.last;
        v.first_project = acc.first_project;
        v.task_count = acc.tasks;
        v.active_days.assign(acc.days.begin(), acc.days.end());
        for (const auto& [pidx, pa] : acc.projects) {
            v.projects.push_back({pidx, pa.first, std::vector<Day>(pa.second.begin(), pa.second.end())});
        }
        apply_registration(v, registrations);
        out.volunteers.push_back(std::move(v));
    }
    for (const auto& [idx, acc] : pacc) {
        ProjectProfile p;
        p.project_id = snapshot.project_ids()[idx];
        p.index = idx;
        p.first_event = acc.first;
        p.last_event = acc.last;
        p.task_count = acc.tasks;
        for (const auto& [v, n] : acc.members) {
            p.volunteers.push_back(v);
            p.volunteer_task_counts.push_back(n);
            (vacc.at(v).first_project == idx ? p.recruited : p.inherited).push_back(v);
        }
        out.projects.push_back(std::move(p));
    }
    return out;
}

}  // namespace serial

}  // namespace cspm
