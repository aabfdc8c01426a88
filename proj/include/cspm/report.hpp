#pragma once

#include "cspm/event_model.hpp"
#include "cspm/ingest.hpp"
#include "cspm/platform_metrics.hpp"
#include "cspm/project_metrics.hpp"
#include "cspm/volunteer_metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cspm {

inline constexpr std::string_view kToolVersion = "0.3.0";

struct ReportConfig {
    std::string platform_name = "platform";
    Availability availability = Availability::Overlap;
    double confidence_level = 0.95;
    std::size_t bootstrap_resamples = 10000;
    std::uint64_t seed = 1;

    /// Stable 64-bit FNV-1a hash (hex) of the settings above.
    std::string hash() const;
};

struct SnapshotSummary {
    std::size_t events = 0;
    std::size_t volunteers = 0;
    std::size_t projects = 0;
    std::size_t duplicates_removed = 0;
    std::size_t excluded_events = 0;
    std::vector<std::string> excluded_projects;
    Instant first_event{};
    Instant last_event{};
    Instant observation_end{};

    bool operator==(const SnapshotSummary&) const = default;
};

struct IngestSummary {
    std::size_t rows = 0;
    std::size_t anonymous_dropped = 0;
    std::size_t malformed_skipped = 0;

    bool operator==(const IngestSummary&) const = default;
};

struct EcdfSeries {
    std::vector<EcdfPoint> points;
    std::size_t finite = 0;
    std::size_t unbounded_negative = 0;
    std::size_t unbounded_positive = 0;
    double fraction_at_or_below_zero = 0.0;  // among finite values

    bool operator==(const EcdfSeries&) const = default;
};

struct RunMetadata {
    std::string tool_version;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string availability;
    double confidence_level = 0.95;
    std::size_t bootstrap_resamples = 0;
    std::size_t registrations_applied = 0;

    bool operator==(const RunMetadata&) const = default;
};

struct MetricsReport {
    std::string platform_name;
    SnapshotSummary summary;
    std::optional<IngestSummary> ingest;
    std::vector<VolunteerMetrics> volunteers;  // by volunteer id
    std::vector<ProjectBalances> projects;     // by project id
    double recruitment_inequality = 0.0;
    double contribution_inequality = 0.0;
    ClassDistribution classes;
    EcdfSeries ecdf_recruitment;
    EcdfSeries ecdf_computing;
    std::vector<ActivityGroup> activity_groups;
    RunMetadata metadata;

    bool operator==(const MetricsReport&) const = default;
};

/// Pure function of (snapshot, config, registrations).
MetricsReport build_report(const PlatformSnapshot& snapshot, const ReportConfig& config,
                           const Registrations* registrations = nullptr);

nlohmann::json to_json(const MetricsReport& report);
/// Throws SchemaError on a document that is not a report.
MetricsReport report_from_json(const nlohmann::json& doc);

EcdfSeries make_series(const Ecdf& ecdf);

/// report.json, volunteers.csv, projects.csv, platform.csv, classes.csv.
void write_metrics_artifacts(const MetricsReport& report, const std::filesystem::path& dir);
/// ecdf_recruitment.dat, ecdf_computing.dat, activity_ci.dat.
void write_plot_data(const MetricsReport& report, const std::filesystem::path& dir);

void write_volunteers_csv(std::ostream& out, const MetricsReport& report);
void write_projects_csv(std::ostream& out, const MetricsReport& report);
void write_platform_csv(std::ostream& out, const MetricsReport& report);
void write_classes_csv(std::ostream& out, const MetricsReport& report);
void write_ecdf_dat(std::ostream& out, const EcdfSeries& series, std::string_view title);
void write_activity_dat(std::ostream& out, const MetricsReport& report);

/// Human-readable tables with whole-number percentages.
void print_summary(std::ostream& out, const MetricsReport& report);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

}  // namespace cspm
