#include "cspm/ingest.hpp"

#include "cspm/errors.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cspm {

using json = nlohmann::json;

void IngestConfig::validate() const {
    if (page_size < 1) throw std::invalid_argument("page size must be at least 1");
    if (fields.volunteer_id.empty() || fields.task_id.empty() || fields.project_id.empty() ||
        fields.timestamp.empty()) {
        throw std::invalid_argument("field mapping must name all four fields");
    }
    if (location.empty()) throw std::invalid_argument("no input location given");
    if (max_attempts < 1) throw std::invalid_argument("max attempts must be at least 1");
}

namespace {

constexpr std::size_t kMaxProblems = 20;

// Row-level outcome shared by every source.
class Collector {
public:
    Collector(const IngestConfig& config, std::string source) : config_(config), source_(std::move(source)) {}

    void malformed(std::size_t line, const std::string& why) {
        if (config_.strict) throw MalformedRow(source_, line, why);
        ++result_.malformed_skipped;
        if (result_.problems.size() < kMaxProblems) {
            result_.problems.push_back(source_ + ":" + std::to_string(line) + ": " + why);
        }
    }

    // Returns false when the row was dropped or skipped.
    bool accept(std::size_t line, std::string volunteer, std::string task, std::string project,
                std::string_view timestamp) {
        ++result_.total_rows;
        if (volunteer.empty()) {
            ++result_.anonymous_dropped;
            return false;
        }
        if (task.empty() || project.empty()) {
            malformed(line, "empty task or project id");
            return false;
        }
        auto t = try_parse_instant(timestamp);
        if (!t) {
            malformed(line, "invalid timestamp '" + std::string(timestamp) + "'");
            return false;
        }
        result_.events.push_back({std::move(volunteer), std::move(task), std::move(project), *t});
        return true;
    }

    void count_row() { ++result_.total_rows; }
    void set_source(std::string s) { source_ = std::move(s); }
    IngestResult& result() { return result_; }

private:
    const IngestConfig& config_;
    std::string source_;
    IngestResult result_;
};

// Splits one CSV record. Supports double-quoted fields with "" escapes.
// Returns false on an unterminated quote.
bool split_csv(std::string_view line, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) return false;
    out.push_back(std::move(field));
    return true;
}

std::string_view trim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

std::string read_all(std::istream& in) {
    std::string data;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) data.append(buf, static_cast<std::size_t>(in.gcount()));
    return data;
}

// Calls fn(line_number, line) for every line of data (1-based).
template <class Fn>
void for_each_line(std::string_view data, Fn fn) {
    std::size_t line_no = 0;
    while (!data.empty()) {
        const auto nl = data.find('\n');
        std::string_view line = data.substr(0, nl);
        ++line_no;
        fn(line_no, trim_cr(line));
        if (nl == std::string_view::npos) break;
        data.remove_prefix(nl + 1);
    }
}

int column_of(const std::vector<std::string>& header, const std::string& canonical, const std::string& mapped) {
    for (const auto* name : {&canonical, &mapped}) {
        auto it = std::find(header.begin(), header.end(), *name);
        if (it != header.end()) return static_cast<int>(it - header.begin());
    }
    return -1;
}

// Ids may arrive as strings or integers; null or absent volunteer ids are
// anonymous contributions.
enum class IdStatus { Ok, Missing, Invalid };

IdStatus id_from_json(const json& obj, const std::string& key, std::string& out) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return IdStatus::Missing;
    if (it->is_string()) {
        out = it->get<std::string>();
        return IdStatus::Ok;
    }
    if (it->is_number_integer()) {
        out = it->is_number_unsigned() ? std::to_string(it->get<std::uint64_t>())
                                        : std::to_string(it->get<std::int64_t>());
        return IdStatus::Ok;
    }
    return IdStatus::Invalid;
}

void accept_json_record(Collector& c, std::size_t line, const json& obj, const FieldMapping& f) {
    if (!obj.is_object()) {
        c.count_row();
        c.malformed(line, "record is not a JSON object");
        return;
    }
    std::string volunteer, task, project;
    const auto vs = id_from_json(obj, f.volunteer_id, volunteer);
    const auto ts = id_from_json(obj, f.task_id, task);
    const auto ps = id_from_json(obj, f.project_id, project);
    if (vs == IdStatus::Invalid || ts == IdStatus::Invalid || ps == IdStatus::Invalid) {
        c.count_row();
        c.malformed(line, "id field has an unsupported type");
        return;
    }
    auto tit = obj.find(f.timestamp);
    if (tit == obj.end() || !tit->is_string()) {
        if (vs == IdStatus::Missing) {
            c.accept(line, "", task, project, "");
            return;
        }
        c.count_row();
        c.malformed(line, "missing or non-string '" + f.timestamp + "'");
        return;
    }
    c.accept(line, std::move(volunteer), std::move(task), std::move(project), tit->get_ref<const std::string&>());
}

}  // namespace

IngestResult load_csv(std::istream& in, const IngestConfig& config, const std::string& source_name) {
    const std::string data = read_all(in);
    Collector c(config, source_name);
    std::vector<std::string> fields;
    int cv = -1, ct = -1, cp = -1, cts = -1;
    std::size_t width = 0;
    bool have_header = false;

    for_each_line(data, [&](std::size_t line_no, std::string_view line) {
        if (line.empty()) return;
        if (!have_header) {
            if (!split_csv(line, fields)) throw SchemaError(source_name + ": unreadable CSV header");
            const auto& m = config.fields;
            cv = column_of(fields, "volunteer_id", m.volunteer_id);
            ct = column_of(fields, "task_id", m.task_id);
            cp = column_of(fields, "project_id", m.project_id);
            cts = column_of(fields, "timestamp", m.timestamp);
            if (cv < 0 || ct < 0 || cp < 0 || cts < 0) {
                throw SchemaError(source_name + ": CSV header must contain volunteer_id, task_id, project_id and "
                                                "timestamp columns (or their mapped names)");
            }
            width = fields.size();
            have_header = true;
            return;
        }
        if (!split_csv(line, fields)) {
            c.count_row();
            c.malformed(line_no, "unterminated quoted field");
            return;
        }
        if (fields.size() != width) {
            c.count_row();
            c.malformed(line_no, "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
            return;
        }
        c.accept(line_no, std::move(fields[static_cast<std::size_t>(cv)]), std::move(fields[static_cast<std::size_t>(ct)]),
                 std::move(fields[static_cast<std::size_t>(cp)]), fields[static_cast<std::size_t>(cts)]);
    });
    if (!have_header) throw SchemaError(source_name + ": missing CSV header");
    return std::move(c.result());
}

IngestResult load_jsonl(std::istream& in, const IngestConfig& config, const std::string& source_name) {
    const std::string data = read_all(in);
    Collector c(config, source_name);
    for_each_line(data, [&](std::size_t line_no, std::string_view line) {
        if (line.find_first_not_of(" \t") == std::string_view::npos) return;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) {
            c.count_row();
            c.malformed(line_no, "invalid JSON");
            return;
        }
        accept_json_record(c, line_no, obj, config.fields);
    });
    return std::move(c.result());
}

IngestResult load_file(const IngestConfig& config) {
    config.validate();
    if (config.kind == SourceKind::Api) throw std::invalid_argument("load_file called with an API source");
    const bool csv = config.kind == SourceKind::CsvFile;
    if (config.location == "-") {
        return csv ? load_csv(std::cin, config, "<stdin>") : load_jsonl(std::cin, config, "<stdin>");
    }
    std::ifstream in(config.location, std::ios::binary);
    if (!in) throw FileNotFound(config.location);
    return csv ? load_csv(in, config, config.location) : load_jsonl(in, config, config.location);
}

namespace {

struct BaseUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path prefix without trailing slash
};

BaseUrl split_url(const std::string& url) {
    const auto scheme = url.find("://");
    const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    BaseUrl b;
    b.origin = url.substr(0, path_start);
    if (path_start != std::string::npos) b.prefix = url.substr(path_start);
    while (!b.prefix.empty() && b.prefix.back() == '/') b.prefix.pop_back();
    return b;
}

std::string fetch_page_body(httplib::Client& client, const std::string& path, const IngestConfig& config,
                            std::size_t& retries) {
    std::string last_error;
    for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
        auto res = client.Get(path);
        if (res && res->status == 200) return res->body;
        bool retryable = true;
        if (!res) {
            last_error = "request failed: " + httplib::to_string(res.error());
        } else {
            last_error = "HTTP " + std::to_string(res->status);
            retryable = res->status >= 500 || res->status == 429;
        }
        if (!retryable || attempt == config.max_attempts) break;
        const auto delay = config.initial_backoff * (1 << (attempt - 1));
        ++retries;
        std::clog << "[cspm] " << path << ": " << last_error << "; retry " << attempt << " of "
                  << (config.max_attempts - 1) << " in " << delay.count() << " ms\n";
        std::this_thread::sleep_for(delay);
    }
    throw NetworkError(path + ": " + last_error);
}

}  // namespace

IngestResult fetch_api(const IngestConfig& config) {
    config.validate();
    const BaseUrl base = split_url(config.location);
    httplib::Client client(base.origin);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(60));

    if (config.cache_dir) std::filesystem::create_directories(*config.cache_dir);

    Collector c(config, "api");
    std::size_t retries = 0, pages = 0, cached = 0;
    for (std::size_t offset = 0;; offset += config.page_size) {
        const std::string path = base.prefix + "/api/taskrun?limit=" + std::to_string(config.page_size) +
                                 "&offset=" + std::to_string(offset);
        std::string body;
        std::filesystem::path cache_file;
        if (config.cache_dir) {
            cache_file = *config.cache_dir / ("taskrun_limit" + std::to_string(config.page_size) + "_offset" +
                                              std::to_string(offset) + ".json");
        }
        if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
            std::ifstream in(cache_file, std::ios::binary);
            body = read_all(in);
            ++cached;
        } else {
            body = fetch_page_body(client, path, config, retries);
            if (!cache_file.empty()) {
                auto tmp = cache_file;
                tmp += ".tmp";
                {
                    std::ofstream out(tmp, std::ios::binary);
                    out << body;
                }
                std::filesystem::rename(tmp, cache_file);
            }
        }
        ++pages;

        json page = json::parse(body, nullptr, false);
        if (page.is_discarded() || !page.is_array()) {
            throw SchemaError(path + ": response is not a JSON array");
        }
        c.set_source("api offset " + std::to_string(offset));
        std::size_t index = 0;
        for (const auto& obj : page) {
            ++index;
            if (obj.is_object()) {
                for (const auto* key : {&config.fields.task_id, &config.fields.project_id, &config.fields.timestamp}) {
                    if (!obj.contains(*key)) throw SchemaError(path + ": record " + std::to_string(index) + " lacks '" + *key + "'");
                }
            }
            accept_json_record(c, index, obj, config.fields);
        }
        if (page.size() < config.page_size) break;
    }
    IngestResult r = std::move(c.result());
    r.pages = pages;
    r.cached_pages = cached;
    r.retries = retries;
    return r;
}

IngestResult ingest(const IngestConfig& config) {
    return config.kind == SourceKind::Api ? fetch_api(config) : load_file(config);
}

namespace {

void write_csv_field(std::ostream& out, std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        out << s;
        return;
    }
    out << '"';
    for (char ch : s) {
        if (ch == '"') out << '"';
        out << ch;
    }
    out << '"';
}

}  // namespace

void write_csv(std::ostream& out, std::span<const TaskExecutionEvent> events) {
    out << "volunteer_id,task_id,project_id,timestamp\n";
    for (const auto& e : events) {
        write_csv_field(out, e.volunteer_id);
        out << ',';
        write_csv_field(out, e.task_id);
        out << ',';
        write_csv_field(out, e.project_id);
        out << ',' << format_instant(e.timestamp) << '\n';
    }
}

void write_jsonl(std::ostream& out, std::span<const TaskExecutionEvent> events, const FieldMapping& fields) {
    for (const auto& e : events) {
        json obj = {{fields.volunteer_id, e.volunteer_id},
                    {fields.task_id, e.task_id},
                    {fields.project_id, e.project_id},
                    {fields.timestamp, format_instant(e.timestamp)}};
        out << obj.dump() << '\n';
    }
}

Registrations load_registrations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path.string());
    const std::string data = read_all(in);
    Registrations out;
    std::vector<std::string> fields;
    int cv = -1, ct = -1;
    bool have_header = false;
    for_each_line(data, [&](std::size_t line_no, std::string_view line) {
        if (line.empty()) return;
        if (!split_csv(line, fields)) throw MalformedRow(path.string(), line_no, "unterminated quoted field");
        if (!have_header) {
            cv = column_of(fields, "volunteer_id", "user_id");
            ct = column_of(fields, "registered_at", "created");
            if (cv < 0 || ct < 0) throw SchemaError(path.string() + ": header must contain volunteer_id,registered_at");
            have_header = true;
            return;
        }
        if (fields.size() <= static_cast<std::size_t>(std::max(cv, ct))) {
            throw MalformedRow(path.string(), line_no, "too few fields");
        }
        auto t = try_parse_instant(fields[static_cast<std::size_t>(ct)]);
        if (!t) throw MalformedRow(path.string(), line_no, "invalid timestamp");
        out[fields[static_cast<std::size_t>(cv)]] = *t;
    });
    return out;
}

}  // namespace cspm
