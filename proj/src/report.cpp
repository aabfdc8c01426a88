#include "cspm/report.hpp"

#include "cspm/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <ostream>

namespace cspm {

using json = nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

std::string ReportConfig::hash() const {
    const json doc = {{"platform_name", platform_name},
                      {"availability", to_string(availability)},
                      {"confidence_level", confidence_level},
                      {"bootstrap_resamples", bootstrap_resamples},
                      {"seed", seed}};
    return fmt::format("{:016x}", fnv1a(doc.dump()));
}

EcdfSeries make_series(const Ecdf& ecdf) {
    EcdfSeries s;
    s.points = ecdf.points();
    s.finite = ecdf.finite_count();
    s.unbounded_negative = ecdf.unbounded_negative();
    s.unbounded_positive = ecdf.unbounded_positive();
    s.fraction_at_or_below_zero = ecdf(0.0);
    return s;
}

MetricsReport build_report(const PlatformSnapshot& snapshot, const ReportConfig& config,
                           const Registrations* registrations) {
    MetricsReport r;
    r.platform_name = config.platform_name;

    auto& s = r.summary;
    s.events = snapshot.event_count();
    s.volunteers = snapshot.volunteer_ids().size();
    s.projects = snapshot.project_ids().size();
    s.duplicates_removed = snapshot.duplicates_removed();
    s.excluded_events = snapshot.excluded_events();
    s.excluded_projects.assign(snapshot.excluded_projects().begin(), snapshot.excluded_projects().end());
    s.first_event = snapshot.first_event_time();
    s.last_event = snapshot.last_event_time();
    s.observation_end = snapshot.observation_end();

    const Profiles profiles = derive_profiles(snapshot, registrations);
    r.volunteers = compute_volunteer_metrics(profiles, snapshot.observation_end(), config.availability);
    r.projects = compute_project_balances(profiles);
    r.recruitment_inequality = recruitment_inequality(profiles);
    r.contribution_inequality = contribution_inequality(profiles);
    r.classes = class_distribution(r.volunteers);

    std::vector<Balance> recruitment, computing;
    for (const auto& p : r.projects) {
        recruitment.push_back(p.balance_in_recruitment);
        computing.push_back(p.balance_in_computing);
    }
    r.ecdf_recruitment = make_series(Ecdf(std::span<const Balance>(recruitment)));
    r.ecdf_computing = make_series(Ecdf(std::span<const Balance>(computing)));
    r.activity_groups =
        activity_duration_groups(r.volunteers, config.confidence_level, config.bootstrap_resamples, config.seed);

    auto& m = r.metadata;
    m.tool_version = std::string(kToolVersion);
    m.config_hash = config.hash();
    m.seed = config.seed;
    m.availability = std::string(to_string(config.availability));
    m.confidence_level = config.confidence_level;
    m.bootstrap_resamples = config.bootstrap_resamples;
    if (registrations != nullptr) {
        for (const auto& v : profiles.volunteers) m.registrations_applied += v.join_instant < v.first_event ? 1 : 0;
    }
    return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json balance_json(const Balance& b) {
    if (b.is_finite()) return b.value();
    return b.to_string();
}

Balance balance_from(const json& j) {
    if (j.is_number()) return Balance::finite(j.get<double>());
    if (j.is_string()) {
        if (auto b = Balance::parse(j.get<std::string>())) return *b;
    }
    throw SchemaError("report: bad balance value " + j.dump());
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

json series_json(const EcdfSeries& s) {
    json points = json::array();
    for (const auto& p : s.points) points.push_back({p.x, p.fraction});
    return {{"points", points},
            {"finite", s.finite},
            {"unbounded_negative", s.unbounded_negative},
            {"unbounded_positive", s.unbounded_positive},
            {"fraction_at_or_below_zero", s.fraction_at_or_below_zero}};
}

EcdfSeries series_from(const json& j) {
    EcdfSeries s;
    for (const auto& p : j.at("points")) s.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    s.finite = j.at("finite").get<std::size_t>();
    s.unbounded_negative = j.at("unbounded_negative").get<std::size_t>();
    s.unbounded_positive = j.at("unbounded_positive").get<std::size_t>();
    s.fraction_at_or_below_zero = j.at("fraction_at_or_below_zero").get<double>();
    return s;
}

json ci_json(const BootstrapCI& ci) {
    return {{"mean", ci.mean},         {"lower", ci.lower},         {"upper", ci.upper},
            {"level", ci.level},       {"resamples", ci.resamples}, {"seed", ci.seed},
            {"sample_size", ci.sample_size}};
}

BootstrapCI ci_from(const json& j) {
    BootstrapCI ci;
    ci.mean = j.at("mean").get<double>();
    ci.lower = j.at("lower").get<double>();
    ci.upper = j.at("upper").get<double>();
    ci.level = j.at("level").get<double>();
    ci.resamples = j.at("resamples").get<std::size_t>();
    ci.seed = j.at("seed").get<std::uint64_t>();
    ci.sample_size = j.at("sample_size").get<std::size_t>();
    return ci;
}

template <class Enum, class Parse>
Enum enum_from(const json& j, Parse parse, const char* what) {
    if (auto v = parse(j.get<std::string>())) return *v;
    throw SchemaError(std::string("report: unknown ") + what + " '" + j.get<std::string>() + "'");
}

}  // namespace

json to_json(const MetricsReport& r) {
    json doc;
    doc["platform"] = r.platform_name;

    const auto& s = r.summary;
    doc["snapshot"] = {{"events", s.events},
                       {"volunteers", s.volunteers},
                       {"projects", s.projects},
                       {"duplicates_removed", s.duplicates_removed},
                       {"excluded_events", s.excluded_events},
                       {"excluded_projects", s.excluded_projects},
                       {"first_event", format_instant(s.first_event)},
                       {"last_event", format_instant(s.last_event)},
                       {"observation_end", format_instant(s.observation_end)}};
    if (r.ingest) {
        doc["ingest"] = {{"rows", r.ingest->rows},
                         {"anonymous_dropped", r.ingest->anonymous_dropped},
                         {"malformed_skipped", r.ingest->malformed_skipped}};
    } else {
        doc["ingest"] = nullptr;
    }

    json volunteers = json::array();
    for (const auto& v : r.volunteers) {
        volunteers.push_back({{"volunteer_id", v.volunteer_id},
                              {"available_projects", v.available_projects},
                              {"explored_projects", v.explored_projects},
                              {"regular_projects", v.regular_projects},
                              {"exploration_rate", v.exploration_rate},
                              {"engagement_rate", v.engagement_rate},
                              {"relative_activity_duration", v.relative_activity_duration},
                              {"platform_class", to_string(v.platform_class)},
                              {"project_class", to_string(v.project_class)}});
    }
    doc["volunteers"] = std::move(volunteers);

    json projects = json::array();
    for (const auto& p : r.projects) {
        projects.push_back({{"project_id", p.project_id},
                            {"inherited", p.inherited},
                            {"recruited", p.recruited},
                            {"inherited_mean_tasks", optional_json(p.inherited_mean_tasks)},
                            {"recruited_mean_tasks", optional_json(p.recruited_mean_tasks)},
                            {"balance_in_recruitment", balance_json(p.balance_in_recruitment)},
                            {"balance_in_computing", balance_json(p.balance_in_computing)}});
    }
    doc["projects"] = std::move(projects);

    doc["platform_metrics"] = {{"recruitment_inequality", r.recruitment_inequality},
                               {"contribution_inequality", r.contribution_inequality}};

    json platform_classes = json::object(), project_classes = json::object();
    for (auto c : kPlatformClasses) {
        platform_classes[std::string(to_string(c))] = {{"count", r.classes.count(c)}, {"percent", r.classes.percent(c)}};
    }
    for (auto c : kProjectClasses) {
        project_classes[std::string(to_string(c))] = {{"count", r.classes.count(c)}, {"percent", r.classes.percent(c)}};
    }
    doc["classes"] = {{"total", r.classes.total}, {"platform", platform_classes}, {"project", project_classes}};

    doc["ecdf"] = {{"balance_in_recruitment", series_json(r.ecdf_recruitment)},
                   {"balance_in_computing", series_json(r.ecdf_computing)}};

    json groups = json::array();
    for (const auto& g : r.activity_groups) {
        groups.push_back({{"platform_class", to_string(PlatformClass::PlatformRegular)},
                          {"project_class", to_string(g.project_class)},
                          {"count", g.count},
                          {"ci", g.ci ? ci_json(*g.ci) : json(nullptr)}});
    }
    doc["relative_activity_duration"] = std::move(groups);

    const auto& m = r.metadata;
    doc["metadata"] = {{"tool_version", m.tool_version},
                       {"config_hash", m.config_hash},
                       {"seed", m.seed},
                       {"availability", m.availability},
                       {"confidence_level", m.confidence_level},
                       {"bootstrap_resamples", m.bootstrap_resamples},
                       {"registrations_applied", m.registrations_applied}};
    return doc;
}

MetricsReport report_from_json(const json& doc) {
    try {
        MetricsReport r;
        r.platform_name = doc.at("platform").get<std::string>();

        const auto& s = doc.at("snapshot");
        r.summary.events = s.at("events").get<std::size_t>();
        r.summary.volunteers = s.at("volunteers").get<std::size_t>();
        r.summary.projects = s.at("projects").get<std::size_t>();
        r.summary.duplicates_removed = s.at("duplicates_removed").get<std::size_t>();
        r.summary.excluded_events = s.at("excluded_events").get<std::size_t>();
        r.summary.excluded_projects = s.at("excluded_projects").get<std::vector<std::string>>();
        r.summary.first_event = parse_instant(s.at("first_event").get<std::string>());
        r.summary.last_event = parse_instant(s.at("last_event").get<std::string>());
        r.summary.observation_end = parse_instant(s.at("observation_end").get<std::string>());

        if (const auto& i = doc.at("ingest"); !i.is_null()) {
            r.ingest = IngestSummary{i.at("rows").get<std::size_t>(), i.at("anonymous_dropped").get<std::size_t>(),
                                     i.at("malformed_skipped").get<std::size_t>()};
        }

        for (const auto& v : doc.at("volunteers")) {
            VolunteerMetrics m;
            m.volunteer_id = v.at("volunteer_id").get<std::string>();
            m.available_projects = v.at("available_projects").get<std::size_t>();
            m.explored_projects = v.at("explored_projects").get<std::size_t>();
            m.regular_projects = v.at("regular_projects").get<std::size_t>();
            m.exploration_rate = v.at("exploration_rate").get<double>();
            m.engagement_rate = v.at("engagement_rate").get<double>();
            m.relative_activity_duration = v.at("relative_activity_duration").get<double>();
            m.platform_class = enum_from<PlatformClass>(v.at("platform_class"), parse_platform_class, "platform class");
            m.project_class = enum_from<ProjectClass>(v.at("project_class"), parse_project_class, "project class");
            r.volunteers.push_back(std::move(m));
        }

        for (const auto& p : doc.at("projects")) {
            ProjectBalances b;
            b.project_id = p.at("project_id").get<std::string>();
            b.inherited = p.at("inherited").get<std::size_t>();
            b.recruited = p.at("recruited").get<std::size_t>();
            b.inherited_mean_tasks = optional_from(p.at("inherited_mean_tasks"));
            b.recruited_mean_tasks = optional_from(p.at("recruited_mean_tasks"));
            b.balance_in_recruitment = balance_from(p.at("balance_in_recruitment"));
            b.balance_in_computing = balance_from(p.at("balance_in_computing"));
            r.projects.push_back(std::move(b));
        }

        r.recruitment_inequality = doc.at("platform_metrics").at("recruitment_inequality").get<double>();
        r.contribution_inequality = doc.at("platform_metrics").at("contribution_inequality").get<double>();

        const auto& classes = doc.at("classes");
        r.classes.total = classes.at("total").get<std::size_t>();
        for (auto c : kPlatformClasses) {
            r.classes.platform[static_cast<std::size_t>(c)] =
                classes.at("platform").at(std::string(to_string(c))).at("count").get<std::size_t>();
        }
        for (auto c : kProjectClasses) {
            r.classes.project[static_cast<std::size_t>(c)] =
                classes.at("project").at(std::string(to_string(c))).at("count").get<std::size_t>();
        }

        r.ecdf_recruitment = series_from(doc.at("ecdf").at("balance_in_recruitment"));
        r.ecdf_computing = series_from(doc.at("ecdf").at("balance_in_computing"));

        for (const auto& g : doc.at("relative_activity_duration")) {
            ActivityGroup group;
            group.project_class = enum_from<ProjectClass>(g.at("project_class"), parse_project_class, "project class");
            group.count = g.at("count").get<std::size_t>();
            if (!g.at("ci").is_null()) group.ci = ci_from(g.at("ci"));
            r.activity_groups.push_back(std::move(group));
        }

        const auto& m = doc.at("metadata");
        r.metadata.tool_version = m.at("tool_version").get<std::string>();
        r.metadata.config_hash = m.at("config_hash").get<std::string>();
        r.metadata.seed = m.at("seed").get<std::uint64_t>();
        r.metadata.availability = m.at("availability").get<std::string>();
        r.metadata.confidence_level = m.at("confidence_level").get<double>();
        r.metadata.bootstrap_resamples = m.at("bootstrap_resamples").get<std::size_t>();
        r.metadata.registrations_applied = m.at("registrations_applied").get<std::size_t>();
        return r;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Tables

void write_volunteers_csv(std::ostream& out, const MetricsReport& r) {
    out << "volunteer_id,available_projects,explored_projects,regular_projects,exploration_rate,engagement_rate,"
           "relative_activity_duration,platform_class,project_class\n";
    for (const auto& v : r.volunteers) {
        out << v.volunteer_id << ',' << v.available_projects << ',' << v.explored_projects << ','
            << v.regular_projects << ',' << format_number(v.exploration_rate) << ','
            << format_number(v.engagement_rate) << ',' << format_number(v.relative_activity_duration) << ','
            << to_string(v.platform_class) << ',' << to_string(v.project_class) << '\n';
    }
}

void write_projects_csv(std::ostream& out, const MetricsReport& r) {
    out << "project_id,inherited,recruited,inherited_mean_tasks,recruited_mean_tasks,balance_in_recruitment,"
           "balance_in_computing\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& p : r.projects) {
        out << p.project_id << ',' << p.inherited << ',' << p.recruited << ',' << opt(p.inherited_mean_tasks) << ','
            << opt(p.recruited_mean_tasks) << ',' << p.balance_in_recruitment.to_string() << ','
            << p.balance_in_computing.to_string() << '\n';
    }
}

void write_platform_csv(std::ostream& out, const MetricsReport& r) {
    out << "platform,events,volunteers,projects,recruitment_inequality,contribution_inequality\n";
    out << r.platform_name << ',' << r.summary.events << ',' << r.summary.volunteers << ',' << r.summary.projects
        << ',' << format_number(r.recruitment_inequality) << ',' << format_number(r.contribution_inequality) << '\n';
}

void write_classes_csv(std::ostream& out, const MetricsReport& r) {
    out << "dimension,class,count,percent\n";
    for (auto c : kPlatformClasses) {
        out << "platform," << to_string(c) << ',' << r.classes.count(c) << ','
            << fmt::format("{:.4f}", r.classes.percent(c)) << '\n';
    }
    for (auto c : kProjectClasses) {
        out << "project," << to_string(c) << ',' << r.classes.count(c) << ','
            << fmt::format("{:.4f}", r.classes.percent(c)) << '\n';
    }
}

void write_ecdf_dat(std::ostream& out, const EcdfSeries& s, std::string_view title) {
    out << "# ECDF of " << title << " (finite values only)\n";
    out << "# finite " << s.finite << '\n';
    out << "# unbounded_negative " << s.unbounded_negative << '\n';
    out << "# unbounded_positive " << s.unbounded_positive << '\n';
    out << "# fraction_at_or_below_zero " << format_number(s.fraction_at_or_below_zero) << '\n';
    out << "# x F(x)\n";
    for (const auto& p : s.points) out << format_number(p.x) << ' ' << format_number(p.fraction) << '\n';
}

void write_activity_dat(std::ostream& out, const MetricsReport& r) {
    out << "# relative activity duration of platform-regular volunteers by project class\n";
    out << "# index class count mean lower upper\n";
    std::size_t index = 0;
    for (const auto& g : r.activity_groups) {
        out << index++ << ' ' << to_string(g.project_class) << ' ' << g.count;
        if (g.ci) {
            out << ' ' << format_number(g.ci->mean) << ' ' << format_number(g.ci->lower) << ' '
                << format_number(g.ci->upper);
        } else {
            out << " nan nan nan";
        }
        out << '\n';
    }
}

namespace {

template <class Fn>
void write_file(const std::filesystem::path& path, Fn fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    fn(out);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

void write_metrics_artifacts(const MetricsReport& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", [&](std::ostream& o) { o << to_json(r).dump(2) << '\n'; });
    write_file(dir / "volunteers.csv", [&](std::ostream& o) { write_volunteers_csv(o, r); });
    write_file(dir / "projects.csv", [&](std::ostream& o) { write_projects_csv(o, r); });
    write_file(dir / "platform.csv", [&](std::ostream& o) { write_platform_csv(o, r); });
    write_file(dir / "classes.csv", [&](std::ostream& o) { write_classes_csv(o, r); });
}

void write_plot_data(const MetricsReport& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / "ecdf_recruitment.dat",
               [&](std::ostream& o) { write_ecdf_dat(o, r.ecdf_recruitment, "balance in recruitment"); });
    write_file(dir / "ecdf_computing.dat",
               [&](std::ostream& o) { write_ecdf_dat(o, r.ecdf_computing, "balance in computing"); });
    write_file(dir / "activity_ci.dat", [&](std::ostream& o) { write_activity_dat(o, r); });
}

void print_summary(std::ostream& out, const MetricsReport& r) {
    const auto& s = r.summary;
    out << fmt::format("{}: {} events, {} volunteers, {} projects, {} to {} (observed until {})\n", r.platform_name,
                       s.events, s.volunteers, s.projects, format_instant(s.first_event),
                       format_instant(s.last_event), format_instant(s.observation_end));
    if (s.duplicates_removed > 0) out << fmt::format("  {} duplicate task executions removed\n", s.duplicates_removed);
    if (r.ingest && (r.ingest->anonymous_dropped > 0 || r.ingest->malformed_skipped > 0)) {
        out << fmt::format("  {} anonymous and {} malformed rows skipped\n", r.ingest->anonymous_dropped,
                           r.ingest->malformed_skipped);
    }

    out << "\nVolunteer classes\n";
    for (auto c : kPlatformClasses) {
        out << fmt::format("  {:<24} {:>4.0f}%  ({})\n", to_string(c), r.classes.percent(c), r.classes.count(c));
    }
    for (auto c : kProjectClasses) {
        out << fmt::format("  {:<24} {:>4.0f}%  ({})\n", to_string(c), r.classes.percent(c), r.classes.count(c));
    }

    out << "\nInequality among projects (Gini)\n";
    out << fmt::format("  recruitment   {:.2f}\n  contribution  {:.2f}\n", r.recruitment_inequality,
                       r.contribution_inequality);

    out << "\nRelative activity duration, platform-regular volunteers\n";
    for (const auto& g : r.activity_groups) {
        if (g.ci) {
            out << fmt::format("  {:<24} n={:<7} mean {:.3f}  [{:.3f}, {:.3f}]\n", to_string(g.project_class),
                               g.count, g.ci->mean, g.ci->lower, g.ci->upper);
        } else {
            out << fmt::format("  {:<24} n=0\n", to_string(g.project_class));
        }
    }
}

}  // namespace cspm
