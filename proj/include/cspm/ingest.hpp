#pragma once

#include "cspm/event_model.hpp"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace cspm {

enum class SourceKind { CsvFile, JsonlFile, Api };

/// Input field names for the four event fields. CSV headers may also use the
/// canonical names (volunteer_id, task_id, project_id, timestamp).
struct FieldMapping {
    std::string volunteer_id = "user_id";
    std::string task_id = "task_id";
    std::string project_id = "project_id";
    std::string timestamp = "finish_time";
};

struct IngestConfig {
    SourceKind kind = SourceKind::CsvFile;
    std::string location;  // file path ("-" for stdin) or API base URL
    FieldMapping fields;
    std::size_t page_size = 100;
    std::set<std::string> excluded_projects;  // applied by build_snapshot
    bool strict = false;

    // API only.
    std::optional<std::filesystem::path> cache_dir;
    int max_attempts = 5;
    std::chrono::milliseconds initial_backoff{250};

    /// Throws std::invalid_argument.
    void validate() const;
};

struct IngestResult {
    std::vector<TaskExecutionEvent> events;
    std::size_t total_rows = 0;         // data rows/lines/records seen
    std::size_t anonymous_dropped = 0;  // absent or null volunteer id
    std::size_t malformed_skipped = 0;  // lenient mode only
    std::vector<std::string> problems;  // first few malformed-row messages

    // API only.
    std::size_t pages = 0;
    std::size_t cached_pages = 0;
    std::size_t retries = 0;

    std::size_t skipped() const noexcept { return anonymous_dropped + malformed_skipped; }
};

/// CSV or JSONL, chosen by config.kind. Throws FileNotFound, SchemaError, and
/// in strict mode MalformedRow.
IngestResult load_file(const IngestConfig& config);

IngestResult load_csv(std::istream& in, const IngestConfig& config, const std::string& source_name = "<csv>");
IngestResult load_jsonl(std::istream& in, const IngestConfig& config, const std::string& source_name = "<jsonl>");

/// GET <base>/api/taskrun?limit=L&offset=O until a page shorter than L.
/// Pages are cached under config.cache_dir when set and served from there on
/// later runs. Transient failures back off exponentially.
/// Throws NetworkError, SchemaError, MalformedRow (strict).
IngestResult fetch_api(const IngestConfig& config);

/// Dispatches on config.kind.
IngestResult ingest(const IngestConfig& config);

/// Canonical CSV: header volunteer_id,task_id,project_id,timestamp.
void write_csv(std::ostream& out, std::span<const TaskExecutionEvent> events);
/// One JSON object per line using the mapped field names.
void write_jsonl(std::ostream& out, std::span<const TaskExecutionEvent> events, const FieldMapping& fields = {});

/// CSV with header volunteer_id,registered_at.
Registrations load_registrations(const std::filesystem::path& path);

}  // namespace cspm
