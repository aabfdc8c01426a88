#pragma once

#include "cspm/event_model.hpp"
#include "cspm/volunteer_metrics.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cspm::synth {

/// Behaviour planted into each synthetic volunteer. Every planted class maps
/// to exactly one (PlatformClass, ProjectClass) pair.
enum class PlantedClass {
    TransientOneProject,
    TransientExplorer,
    RegularOneProject,
    RegularExplorer,
    MultiProjectRegular,
};
inline constexpr std::size_t kPlantedClassCount = 5;

std::string_view to_string(PlantedClass c);
std::pair<PlatformClass, ProjectClass> expected_classes(PlantedClass c);

struct IntRange {
    int lo;
    int hi;
};

struct ActivityModel {
    IntRange active_days{2, 6};  // ignored for transient classes (always 1)
    IntRange tasks_per_day{1, 4};
    /// Chance of touching one more project after the mandatory ones.
    double project_switch_probability = 0.3;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t project_count = 20;
    std::size_t volunteer_count = 1000;
    /// Fractions per PlantedClass, in enum order; must sum to 1.
    std::array<double, kPlantedClassCount> class_mix{0.4, 0.15, 0.25, 0.1, 0.1};
    std::array<ActivityModel, kPlantedClassCount> activity{};
    /// Recruitment share of the project ranked r is proportional to
    /// 1 / r^recruitment_skew; 0 spreads recruits evenly.
    double recruitment_skew = 1.0;
    Instant start = std::chrono::sys_days{std::chrono::year{2012} / 7 / 7};
    Instant end = std::chrono::sys_days{std::chrono::year{2014} / 7 / 17};
    /// When set, extra tasks are added to existing (volunteer, project, day)
    /// cells until the log holds exactly this many events. Planted classes
    /// are unaffected.
    std::optional<std::size_t> target_events;

    /// Throws std::invalid_argument for malformed values and InfeasibleConfig
    /// when a requested class cannot be realised.
    void validate() const;
};

struct PlantedLabel {
    std::string volunteer_id;
    PlantedClass planted;
    std::string recruited_by;
};

struct SynthOutput {
    std::vector<TaskExecutionEvent> events;
    std::vector<PlantedLabel> labels;
    std::vector<std::string> project_ids;
    std::vector<double> recruitment_shares;     // per project, sums to 1
    std::vector<std::size_t> planted_recruits;  // per project
};

/// Deterministic for a fixed config.
SynthOutput generate(const SynthConfig& config);

/// Gini coefficient of the configured recruitment shares.
double configured_recruitment_gini(const SynthConfig& config);

/// volunteer_id,planted_class,platform_class,project_class,recruited_by
void write_labels_csv(std::ostream& out, const std::vector<PlantedLabel>& labels);

/// Splits n items over weights by largest remainder; ties go to the lower
/// index. The result sums to n.
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t n);

}  // namespace cspm::synth
