#include "cspm/synth.hpp"

#include "cspm/errors.hpp"
#include "cspm/platform_metrics.hpp"
#include "cspm/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace cspm::synth {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

bool is_transient(PlantedClass c) {
    return c == PlantedClass::TransientOneProject || c == PlantedClass::TransientExplorer;
}

bool is_multi_project(PlantedClass c) {
    return c == PlantedClass::TransientExplorer || c == PlantedClass::RegularExplorer ||
           c == PlantedClass::MultiProjectRegular;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

// Whole UTC days inside [start, end].
std::pair<Day, Day> full_days(Instant start, Instant end) {
    const auto s = start.time_since_epoch().count();
    const auto e = end.time_since_epoch().count();
    return {static_cast<Day>(-floor_div(-s, kSecondsPerDay)), static_cast<Day>(floor_div(e + 1, kSecondsPerDay) - 1)};
}

std::vector<double> recruitment_weights(const SynthConfig& c) {
    std::vector<double> w(c.project_count);
    for (std::size_t r = 0; r < w.size(); ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), c.recruitment_skew);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return w;
}

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
    }
}

struct Cell {
    std::uint32_t volunteer;
    std::uint32_t project;
    Day day;
    std::uint32_t tasks;
};

}  // namespace

std::string_view to_string(PlantedClass c) {
    switch (c) {
        case PlantedClass::TransientOneProject: return "transient_one_project";
        case PlantedClass::TransientExplorer: return "transient_explorer";
        case PlantedClass::RegularOneProject: return "regular_one_project";
        case PlantedClass::RegularExplorer: return "regular_explorer";
        case PlantedClass::MultiProjectRegular: return "multi_project_regular";
    }
    return "?";
}

std::pair<PlatformClass, ProjectClass> expected_classes(PlantedClass c) {
    switch (c) {
        case PlantedClass::TransientOneProject: return {PlatformClass::PlatformTransient, ProjectClass::OneProject};
        case PlantedClass::TransientExplorer:
            return {PlatformClass::PlatformTransient, ProjectClass::MultiProjectExplorer};
        case PlantedClass::RegularOneProject: return {PlatformClass::PlatformRegular, ProjectClass::OneProject};
        case PlantedClass::RegularExplorer: return {PlatformClass::PlatformRegular, ProjectClass::MultiProjectExplorer};
        case PlantedClass::MultiProjectRegular:
            return {PlatformClass::PlatformRegular, ProjectClass::MultiProjectRegular};
    }
    throw std::logic_error("unknown planted class");
}

std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t n) {
    std::vector<std::size_t> out(weights.size(), 0);
    if (weights.empty()) return out;
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(n) * weights[i] / total;
        out[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += out[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++out[remainders[k % remainders.size()].second];
    return out;
}

void SynthConfig::validate() const {
    if (project_count < 1) throw std::invalid_argument("project count must be at least 1");
    if (volunteer_count < 1) throw std::invalid_argument("volunteer count must be at least 1");
    if (!(start < end)) throw std::invalid_argument("start must precede end");
    if (recruitment_skew < 0.0) throw std::invalid_argument("recruitment skew must be non-negative");
    double sum = 0.0;
    for (double f : class_mix) {
        if (!(f >= 0.0)) throw std::invalid_argument("class mix fractions must be non-negative");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("class mix must sum to 1");
    for (const auto& a : activity) {
        if (a.active_days.lo < 1 || a.active_days.lo > a.active_days.hi) {
            throw std::invalid_argument("active-day range must be non-empty and positive");
        }
        if (a.tasks_per_day.lo < 1 || a.tasks_per_day.lo > a.tasks_per_day.hi) {
            throw std::invalid_argument("tasks-per-day range must be non-empty and positive");
        }
        if (!(a.project_switch_probability >= 0.0 && a.project_switch_probability < 1.0)) {
            throw std::invalid_argument("project switch probability must lie in [0, 1)");
        }
    }

    const auto [first_day, last_day] = full_days(start, end);
    const long window = static_cast<long>(last_day) - first_day + 1;
    if (window < 1) throw InfeasibleConfig("the platform window contains no whole day");
    const auto counts = apportion(std::vector<double>(class_mix.begin(), class_mix.end()), volunteer_count);
    for (std::size_t k = 0; k < kPlantedClassCount; ++k) {
        if (counts[k] == 0) continue;
        const auto c = static_cast<PlantedClass>(k);
        if (is_multi_project(c) && project_count < 2) {
            throw InfeasibleConfig(fmt::format("{} needs at least two projects", to_string(c)));
        }
        if (!is_transient(c)) {
            if (window < 2) throw InfeasibleConfig(fmt::format("{} needs at least two days", to_string(c)));
            if (activity[k].active_days.hi < 2) {
                throw InfeasibleConfig(fmt::format("{} needs an active-day range reaching 2", to_string(c)));
            }
            if (std::max(activity[k].active_days.lo, 2) > window) {
                throw InfeasibleConfig(fmt::format("{} needs more active days than the window holds", to_string(c)));
            }
        }
    }
}

double configured_recruitment_gini(const SynthConfig& config) {
    const auto w = recruitment_weights(config);
    return gini(w);
}

SynthOutput generate(const SynthConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);

    SynthOutput out;
    const std::size_t np = config.project_count;
    const std::size_t nv = config.volunteer_count;
    for (std::size_t p = 0; p < np; ++p) out.project_ids.push_back(fmt::format("proj-{:04}", p));
    out.recruitment_shares = recruitment_weights(config);
    out.planted_recruits = apportion(out.recruitment_shares, nv);

    std::vector<PlantedClass> classes;
    const auto class_counts = apportion(std::vector<double>(config.class_mix.begin(), config.class_mix.end()), nv);
    for (std::size_t k = 0; k < kPlantedClassCount; ++k) classes.insert(classes.end(), class_counts[k], static_cast<PlantedClass>(k));
    std::vector<std::uint32_t> recruits;
    for (std::size_t p = 0; p < np; ++p) recruits.insert(recruits.end(), out.planted_recruits[p], static_cast<std::uint32_t>(p));
    shuffle(classes, rng);
    shuffle(recruits, rng);

    const auto [first_day, last_day] = full_days(config.start, config.end);
    const int window = last_day - first_day + 1;

    std::vector<Cell> cells;
    std::vector<std::size_t> cell_begin;  // per volunteer
    std::vector<std::uint32_t> others;
    std::vector<Day> days;
    for (std::uint32_t v = 0; v < nv; ++v) {
        const PlantedClass c = classes[v];
        const ActivityModel& model = config.activity[static_cast<std::size_t>(c)];
        const std::uint32_t recruit = recruits[v];
        out.labels.push_back({fmt::format("vol-{:07}", v), c, out.project_ids[recruit]});
        cell_begin.push_back(cells.size());

        int day_count = 1;
        if (!is_transient(c)) {
            const int lo = std::max(model.active_days.lo, 2);
            const int hi = std::min(model.active_days.hi, window);
            day_count = static_cast<int>(uniform_between(rng, lo, hi));
        }
        // Floyd's sampling of distinct day offsets.
        days.clear();
        for (int j = window - day_count; j < window; ++j) {
            const auto t = static_cast<Day>(uniform_between(rng, 0, j));
            const Day pick = std::find(days.begin(), days.end(), first_day + t) == days.end() ? first_day + t : first_day + j;
            days.push_back(pick);
        }
        std::sort(days.begin(), days.end());

        std::size_t project_total = 1;
        if (is_multi_project(c)) {
            project_total = 2;
            while (project_total < np && uniform_unit(rng) < model.project_switch_probability) ++project_total;
        }
        // Partial Fisher-Yates over the projects other than the recruiter.
        others.resize(np - 1);
        for (std::uint32_t p = 0, k = 0; p < np; ++p) {
            if (p != recruit) others[k++] = p;
        }
        for (std::size_t k = 0; k + 1 < project_total; ++k) {
            std::swap(others[k], others[k + uniform_below(rng, others.size() - k)]);
        }
        std::sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(project_total - 1));

        auto tasks = [&] {
            return static_cast<std::uint32_t>(uniform_between(rng, model.tasks_per_day.lo, model.tasks_per_day.hi));
        };
        // The recruiting project is active on every chosen day.
        for (Day d : days) cells.push_back({v, recruit, d, tasks()});
        for (std::size_t k = 0; k + 1 < project_total; ++k) {
            const std::uint32_t p = others[k];
            switch (c) {
                case PlantedClass::TransientExplorer: cells.push_back({v, p, days[0], tasks()}); break;
                case PlantedClass::RegularExplorer:
                    cells.push_back({v, p, days[uniform_below(rng, days.size())], tasks()});
                    break;
                case PlantedClass::MultiProjectRegular: {
                    const auto a = uniform_below(rng, days.size());
                    auto b = uniform_below(rng, days.size() - 1);
                    if (b >= a) ++b;
                    for (std::size_t i = 0; i < days.size(); ++i) {
                        if (i == a || i == b || uniform_unit(rng) < 0.5) cells.push_back({v, p, days[i], tasks()});
                    }
                    break;
                }
                default: break;
            }
        }
    }
    cell_begin.push_back(cells.size());

    std::size_t total = 0;
    for (const auto& cell : cells) total += cell.tasks;
    if (config.target_events) {
        if (*config.target_events < total) {
            throw InfeasibleConfig(fmt::format("target of {} events is below the {} the planted behaviour needs",
                                               *config.target_events, total));
        }
        for (std::size_t extra = *config.target_events - total; extra > 0; --extra) {
            ++cells[uniform_below(rng, cells.size())].tasks;
        }
        total = *config.target_events;
    }

    out.events.reserve(total);
    std::vector<std::uint64_t> task_counter(np, 0);
    for (std::uint32_t v = 0; v < nv; ++v) {
        const std::string& vid = out.labels[v].volunteer_id;
        const std::uint32_t recruit = recruits[v];
        const Day d0 = cells[cell_begin[v]].day;
        // The volunteer's first task lands in the recruiting project strictly
        // before anything else they do.
        const auto first_offset = uniform_between(rng, 0, 3600);
        for (std::size_t k = cell_begin[v]; k < cell_begin[v + 1]; ++k) {
            const Cell& cell = cells[k];
            const bool first_cell = cell.day == d0 && cell.project == recruit;
            for (std::uint32_t t = 0; t < cell.tasks; ++t) {
                std::int64_t offset = 0;
                if (first_cell && t == 0) {
                    offset = first_offset;
                } else if (cell.day == d0) {
                    offset = uniform_between(rng, first_offset + 1, kSecondsPerDay - 1);
                } else {
                    offset = uniform_between(rng, 0, kSecondsPerDay - 1);
                }
                const Instant when{std::chrono::seconds(static_cast<std::int64_t>(cell.day) * kSecondsPerDay + offset)};
                out.events.push_back({vid, fmt::format("{}-task-{:08}", out.project_ids[cell.project], task_counter[cell.project]++),
                                      out.project_ids[cell.project], when});
            }
        }
    }
    return out;
}

void write_labels_csv(std::ostream& out, const std::vector<PlantedLabel>& labels) {
    out << "volunteer_id,planted_class,platform_class,project_class,recruited_by\n";
    for (const auto& l : labels) {
        const auto [platform, project] = expected_classes(l.planted);
        out << l.volunteer_id << ',' << to_string(l.planted) << ',' << cspm::to_string(platform) << ','
            << cspm::to_string(project) << ',' << l.recruited_by << '\n';
    }
}

}  // namespace cspm::synth
