#include "cspm/cli.hpp"

#include "cspm/errors.hpp"
#include "cspm/ingest.hpp"
#include "cspm/report.hpp"
#include "cspm/synth.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <omp.h>

#include <fstream>
#include <iostream>
#include <optional>

namespace cspm::cli {

namespace {

struct SourceOptions {
    std::string input;
    std::string api_url;
    std::string format;  // csv | jsonl, inferred from the extension when empty
    bool strict = false;
    std::size_t page_size = 100;
    std::string cache_dir;
    FieldMapping fields;
    std::vector<std::string> excluded;
    std::string observation_end;

    void attach(CLI::App& app, bool with_snapshot_options = true) {
        auto* in = app.add_option("--input", input, "Event file (CSV or JSONL); '-' reads stdin");
        auto* api = app.add_option("--api-url", api_url, "Base URL of a PyBossa-compatible server");
        in->excludes(api);
        api->excludes(in);
        app.add_option("--format", format, "Input format")->check(CLI::IsMember({"csv", "jsonl"}));
        app.add_flag("--strict", strict, "Fail on the first malformed row instead of skipping it");
        app.add_option("--page-size", page_size, "API page size")->check(CLI::PositiveNumber);
        app.add_option("--cache-dir", cache_dir, "Directory for cached API pages");
        app.add_option("--volunteer-field", fields.volunteer_id, "Input name of the volunteer id field");
        app.add_option("--task-field", fields.task_id, "Input name of the task id field");
        app.add_option("--project-field", fields.project_id, "Input name of the project id field");
        app.add_option("--timestamp-field", fields.timestamp, "Input name of the timestamp field");
        if (with_snapshot_options) {
            app.add_option("--exclude-project", excluded, "Project id to leave out (repeatable)");
            app.add_option("--observation-end", observation_end, "Data collection instant (ISO-8601)");
        }
    }

    IngestConfig config(const std::string& default_cache) const {
        if (input.empty() && api_url.empty()) throw CLI::ValidationError("--input or --api-url is required");
        IngestConfig c;
        c.fields = fields;
        c.strict = strict;
        c.page_size = page_size;
        c.excluded_projects.insert(excluded.begin(), excluded.end());
        if (!api_url.empty()) {
            c.kind = SourceKind::Api;
            c.location = api_url;
            if (!cache_dir.empty()) {
                c.cache_dir = cache_dir;
            } else if (!default_cache.empty()) {
                c.cache_dir = default_cache;
            }
        } else {
            c.location = input;
            std::string f = format;
            if (f.empty()) {
                const auto ext = std::filesystem::path(input).extension().string();
                f = (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") ? "jsonl" : "csv";
            }
            c.kind = f == "jsonl" ? SourceKind::JsonlFile : SourceKind::CsvFile;
        }
        return c;
    }

    std::optional<Instant> end() const {
        if (observation_end.empty()) return std::nullopt;
        auto t = try_parse_instant(observation_end);
        if (!t) throw CLI::ValidationError("--observation-end: not an ISO-8601 instant: " + observation_end);
        return t;
    }
};

struct MetricsOptions {
    std::string out_dir;
    std::string registrations;
    std::string availability = "overlap";
    std::size_t resamples = 10000;
    double level = 0.95;
    std::uint64_t seed = 1;
    std::string platform_name = "platform";
    int threads = 0;
    bool quiet = false;

    void attach(CLI::App& app) {
        app.add_option("--out", out_dir, "Output directory")->required();
        app.add_option("--registrations", registrations, "CSV of volunteer_id,registered_at join-date overrides");
        app.add_option("--availability", availability, "Which projects count as available")
            ->check(CLI::IsMember({"overlap", "all"}));
        app.add_option("--bootstrap-resamples", resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
        app.add_option("--confidence-level", level, "Bootstrap confidence level")->check(CLI::Range(0.5, 0.9999));
        app.add_option("--seed", seed, "Bootstrap seed");
        app.add_option("--platform-name", platform_name, "Label used in the platform table");
        app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
        app.add_flag("--quiet", quiet, "Do not print the summary tables");
    }

    ReportConfig config() const {
        ReportConfig c;
        c.platform_name = platform_name;
        c.availability = *parse_availability(availability);
        c.bootstrap_resamples = resamples;
        c.confidence_level = level;
        c.seed = seed;
        return c;
    }
};

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::pair<PlatformSnapshot, IngestSummary> load_snapshot(const SourceOptions& src, const std::string& default_cache,
                                                         std::ostream& err) {
    const IngestConfig config = src.config(default_cache);
    IngestResult loaded = ingest(config);
    if (!loaded.problems.empty()) {
        err << fmt::format("skipped {} malformed rows; first problems:\n", loaded.malformed_skipped);
        for (const auto& p : loaded.problems) err << "  " << p << '\n';
    }
    IngestSummary summary{loaded.total_rows, loaded.anonymous_dropped, loaded.malformed_skipped};
    return {build_snapshot(loaded.events, src.end(), config.excluded_projects), summary};
}

int cmd_metrics(const SourceOptions& src, const MetricsOptions& opt, bool plots, std::ostream& out,
                std::ostream& err) {
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
    auto [snapshot, ingest_summary] =
        load_snapshot(src, (std::filesystem::path(opt.out_dir) / "api_cache").string(), err);
    std::optional<Registrations> registrations;
    if (!opt.registrations.empty()) registrations = load_registrations(opt.registrations);
    MetricsReport report = build_report(snapshot, opt.config(), registrations ? &*registrations : nullptr);
    report.ingest = ingest_summary;
    write_metrics_artifacts(report, opt.out_dir);
    if (plots) write_plot_data(report, opt.out_dir);
    if (!opt.quiet) print_summary(out, report);
    return kExitOk;
}

int cmd_ingest(const SourceOptions& src, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    auto [snapshot, summary] = load_snapshot(src, (std::filesystem::path(out_dir) / "api_cache").string(), err);
    std::filesystem::create_directories(out_dir);
    const auto events = snapshot.materialize();
    {
        std::ofstream f(std::filesystem::path(out_dir) / "events.csv", std::ios::binary);
        write_csv(f, events);
    }
    const nlohmann::json doc = {{"rows", summary.rows},
                                {"anonymous_dropped", summary.anonymous_dropped},
                                {"malformed_skipped", summary.malformed_skipped},
                                {"events", snapshot.event_count()},
                                {"duplicates_removed", snapshot.duplicates_removed()},
                                {"excluded_events", snapshot.excluded_events()},
                                {"volunteers", snapshot.volunteer_ids().size()},
                                {"projects", snapshot.project_ids().size()},
                                {"observation_end", format_instant(snapshot.observation_end())}};
    {
        std::ofstream f(std::filesystem::path(out_dir) / "ingest.json", std::ios::binary);
        f << doc.dump(2) << '\n';
    }
    out << fmt::format("{} events from {} rows ({} anonymous, {} malformed, {} duplicates)\n", snapshot.event_count(),
                       summary.rows, summary.anonymous_dropped, summary.malformed_skipped,
                       snapshot.duplicates_removed());
    return kExitOk;
}

int cmd_validate(SourceOptions src, std::ostream& out, std::ostream& err) {
    if (src.input.empty()) throw CLI::ValidationError("validate needs --input");
    src.strict = false;
    IngestConfig config = src.config("");
    const IngestResult r = load_file(config);
    out << fmt::format("{}: {} rows, {} valid, {} anonymous, {} malformed\n", config.location, r.total_rows,
                       r.events.size(), r.anonymous_dropped, r.malformed_skipped);
    for (const auto& p : r.problems) err << p << '\n';
    if (r.malformed_skipped > r.problems.size()) {
        err << fmt::format("... and {} more\n", r.malformed_skipped - r.problems.size());
    }
    return r.malformed_skipped == 0 ? kExitOk : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-project engagement metrics for citizen-science task logs", "cspm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    SourceOptions ingest_src, metrics_src, report_src, validate_src;
    MetricsOptions metrics_opt, report_opt;
    std::string ingest_out;

    auto* ingest_cmd = app.add_subcommand("ingest", "Load events and write a normalised, deduplicated CSV");
    ingest_src.attach(*ingest_cmd);
    ingest_cmd->add_option("--out", ingest_out, "Output directory")->required();

    auto* metrics_cmd = app.add_subcommand("metrics", "Compute metrics; write report.json and CSV tables");
    metrics_src.attach(*metrics_cmd);
    metrics_opt.attach(*metrics_cmd);

    auto* report_cmd = app.add_subcommand("report", "As metrics, plus ECDF and confidence-interval plot data");
    report_src.attach(*report_cmd);
    report_opt.attach(*report_cmd);

    auto* validate_cmd = app.add_subcommand("validate", "Check an event file against the input schema");
    validate_src.attach(*validate_cmd, false);

    synth::SynthConfig sc;
    std::string synth_out = "-", synth_labels, synth_format = "csv", mix, tasks_per_day, active_days;
    std::string synth_start, synth_end;
    double switch_probability = -1.0;
    std::size_t target_events = 0;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic event log with planted volunteer classes");
    synth_cmd->add_option("--seed", sc.seed, "Generator seed");
    synth_cmd->add_option("--volunteers", sc.volunteer_count, "Number of volunteers")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--projects", sc.project_count, "Number of projects")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--mix", mix,
                          "Class fractions: transient-one-project,transient-explorer,regular-one-project,"
                          "regular-explorer,multi-project-regular");
    synth_cmd->add_option("--skew", sc.recruitment_skew, "Zipf exponent of project recruitment shares");
    synth_cmd->add_option("--active-days", active_days, "Active-day range lo,hi for regular classes");
    synth_cmd->add_option("--tasks-per-day", tasks_per_day, "Tasks per project-day range lo,hi");
    synth_cmd->add_option("--switch-probability", switch_probability, "Chance of touching one more project");
    synth_cmd->add_option("--start", synth_start, "Platform start (ISO-8601)");
    synth_cmd->add_option("--end", synth_end, "Platform end (ISO-8601)");
    synth_cmd->add_option("--target-events", target_events, "Pad the log to exactly this many events");
    synth_cmd->add_option("--format", synth_format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
    synth_cmd->add_option("--out", synth_out, "Output file ('-' for stdout)");
    synth_cmd->add_option("--labels", synth_labels, "Write planted labels CSV here");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ingest_cmd) return cmd_ingest(ingest_src, ingest_out, out, err);
        if (*metrics_cmd) return cmd_metrics(metrics_src, metrics_opt, false, out, err);
        if (*report_cmd) return cmd_metrics(report_src, report_opt, true, out, err);
        if (*validate_cmd) return cmd_validate(validate_src, out, err);
        if (*synth_cmd) {
            if (!mix.empty()) {
                const auto f = parse_doubles(mix);
                if (f.size() != synth::kPlantedClassCount) throw CLI::ValidationError("--mix needs five fractions");
                std::copy(f.begin(), f.end(), sc.class_mix.begin());
            }
            auto range = [](const std::string& s, const char* name) {
                const auto v = parse_doubles(s);
                if (v.size() != 2) throw CLI::ValidationError(std::string(name) + " needs lo,hi");
                return synth::IntRange{static_cast<int>(v[0]), static_cast<int>(v[1])};
            };
            for (auto& model : sc.activity) {
                if (!active_days.empty()) model.active_days = range(active_days, "--active-days");
                if (!tasks_per_day.empty()) model.tasks_per_day = range(tasks_per_day, "--tasks-per-day");
                if (switch_probability >= 0.0) model.project_switch_probability = switch_probability;
            }
            if (!synth_start.empty()) sc.start = parse_instant(synth_start);
            if (!synth_end.empty()) sc.end = parse_instant(synth_end);
            if (target_events > 0) sc.target_events = target_events;

            const synth::SynthOutput generated = synth::generate(sc);
            auto emit = [&](std::ostream& o) {
                if (synth_format == "jsonl") {
                    write_jsonl(o, generated.events);
                } else {
                    write_csv(o, generated.events);
                }
            };
            if (synth_out == "-") {
                emit(out);
            } else {
                std::ofstream f(synth_out, std::ios::binary);
                if (!f) throw Error("cannot write '" + synth_out + "'");
                emit(f);
            }
            if (!synth_labels.empty()) {
                std::ofstream f(synth_labels, std::ios::binary);
                synth::write_labels_csv(f, generated.labels);
            }
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InfeasibleConfig& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace cspm::cli
