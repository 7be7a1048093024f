#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "crowdnet/data_io.hpp"
#include "crowdnet/error.hpp"

namespace crowdnet {
namespace {

class Table {
 public:
  Table(std::istream& in, std::string name, std::vector<std::string_view> required)
      : in_(in), name_(std::move(name)) {
    std::string header;
    if (!next_line(header)) throw DataError(name_ + ": missing header row");
    const auto cols = split_csv_line(header);
    for (auto col : required) {
      auto it = std::find(cols.begin(), cols.end(), col);
      if (it == cols.end()) throw DataError(name_ + ": missing column '" + std::string(col) + "'");
      index_.push_back(static_cast<std::size_t>(it - cols.begin()));
    }
    width_ = cols.size();
  }

  /// False at end of input; skips blank lines.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (next_line(line)) {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      auto all = split_csv_line(line);
      if (all.size() != width_) {
        fail("expected " + std::to_string(width_) + " fields, found " + std::to_string(all.size()));
      }
      fields.clear();
      for (auto i : index_) fields.push_back(std::move(all[i]));
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_; }
  const std::string& name() const { return name_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(name_ + " line " + std::to_string(line_) + ": " + what);
  }

 private:
  bool next_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::istream& in_;
  std::string name_;
  std::vector<std::size_t> index_;
  std::size_t width_ = 0;
  std::size_t line_ = 0;
};

double parse_double(const Table& t, const std::string& text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    t.fail("invalid " + std::string(what) + " '" + text + "'");
  }
  return v;
}

bool parse_flag(const Table& t, const std::string& text, std::string_view what) {
  if (text == "0") return false;
  if (text == "1") return true;
  t.fail(std::string(what) + " must be 0 or 1, got '" + text + "'");
}

Date parse_date(const Table& t, const std::string& text) {
  try {
    return Date::parse(text);
  } catch (const DataError& e) {
    t.fail(e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto bar = text.find('|', start);
    const auto end = bar == std::string::npos ? text.size() : bar;
    if (end > start) out.push_back(text.substr(start, end - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += '|';
    out += s;
  }
  return out;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

IngestResult parse_dataset(std::istream& tasks_in, std::istream& regs_in, std::istream& workers_in) {
  IngestResult result;
  Dataset& d = result.dataset;
  std::vector<std::string> f;

  Table workers(workers_in, "workers", {"worker_id", "rating"});
  while (workers.next(f)) {
    const double rating = parse_double(workers, f[1], "rating");
    if (rating < 0.0) workers.fail("negative rating");
    d.workers.push_back({f[0], rating});
  }

  Table tasks(tasks_in, "tasks",
              {"task_id", "project_id", "status", "posting_date", "submission_deadline", "prize",
               "technologies", "platforms"});
  while (tasks.next(f)) {
    TaskRecord t;
    t.id = f[0];
    t.project_id = f[1];
    try {
      t.status = parse_task_status(f[2]);
    } catch (const DataError& e) {
      tasks.fail(e.what());
    }
    t.posting_date = parse_date(tasks, f[3]);
    t.submission_deadline = parse_date(tasks, f[4]);
    t.prize = f[5].empty() ? 0.0 : parse_double(tasks, f[5], "prize");
    t.technologies = split_list(f[6]);
    t.platforms = split_list(f[7]);
    d.tasks.push_back(std::move(t));
  }

  Table regs(regs_in, "registrations",
             {"worker_id", "task_id", "registration_date", "submitted", "valid", "won", "score"});
  std::set<std::pair<std::string, std::string>> seen;
  while (regs.next(f)) {
    RegistrationEvent e;
    e.worker_id = f[0];
    e.task_id = f[1];
    e.registration_date = parse_date(regs, f[2]);
    e.submitted = parse_flag(regs, f[3], "submitted");
    e.valid = parse_flag(regs, f[4], "valid");
    e.won = parse_flag(regs, f[5], "won");
    if (!f[6].empty()) e.score = parse_double(regs, f[6], "score");
    if ((e.won && !e.valid) || (e.valid && !e.submitted)) {
      result.rejected.push_back({regs.name(), regs.line(),
                                 "flag chain violated (won implies valid implies submitted)"});
      continue;
    }
    if (!seen.emplace(e.worker_id, e.task_id).second) {
      ++result.duplicate_events;
      continue;
    }
    d.events.push_back(std::move(e));
  }

  canonicalize(d);
  validate(d);
  return result;
}

IngestResult parse_dataset_files(const std::filesystem::path& tasks,
                                 const std::filesystem::path& registrations,
                                 const std::filesystem::path& workers) {
  auto open = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open " + p.string());
    return in;
  };
  auto t = open(tasks);
  auto r = open(registrations);
  auto w = open(workers);
  return parse_dataset(t, r, w);
}

IngestResult parse_dataset_dir(const std::filesystem::path& dir) {
  return parse_dataset_files(dir / "tasks.csv", dir / "registrations.csv", dir / "workers.csv");
}

void write_dataset_csv(const Dataset& input, const std::filesystem::path& dir) {
  Dataset d = input;
  canonicalize(d);
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("workers.csv");
    out << "worker_id,rating\n";
    for (const auto& w : d.workers) out << quote(w.id) << ',' << format_double(w.rating) << '\n';
  }
  {
    auto out = open("tasks.csv");
    out << "task_id,project_id,status,posting_date,submission_deadline,prize,technologies,platforms\n";
    for (const auto& t : d.tasks) {
      out << quote(t.id) << ',' << quote(t.project_id) << ',' << to_string(t.status) << ','
          << t.posting_date.str() << ',' << t.submission_deadline.str() << ','
          << format_double(t.prize) << ',' << quote(join_list(t.technologies)) << ','
          << quote(join_list(t.platforms)) << '\n';
    }
  }
  {
    auto out = open("registrations.csv");
    out << "worker_id,task_id,registration_date,submitted,valid,won,score\n";
    for (const auto& e : d.events) {
      out << quote(e.worker_id) << ',' << quote(e.task_id) << ',' << e.registration_date.str() << ','
          << int(e.submitted) << ',' << int(e.valid) << ',' << int(e.won) << ','
          << (e.score ? format_double(*e.score) : std::string()) << '\n';
    }
  }
  if (!d.metadata.planted_clusters.empty()) {
    auto out = open("planted.csv");
    out << "worker_id,cluster\n";
    for (const auto& [id, c] : d.metadata.planted_clusters) out << quote(id) << ',' << c << '\n';
  }
}

}  // namespace crowdnet
