#pragma once

// Canonical in-memory dataset: workers, tasks and registration events.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace crowdnet {

/// Calendar date, stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  static Date from_days(std::int32_t days) {
    Date d;
    d.days_ = days;
    return d;
  }
  /// Strict YYYY-MM-DD. Throws DataError.
  static Date parse(std::string_view text);
  static Date from_ymd(int year, unsigned month, unsigned day);

  std::int32_t days() const { return days_; }
  int year() const;
  unsigned month() const;
  /// year * 12 + (month - 1); consecutive months differ by one.
  int month_index() const { return year() * 12 + static_cast<int>(month()) - 1; }
  std::string str() const;

  auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

/// Inclusive range of calendar months, as month_index() values.
struct MonthWindow {
  int first = 0;
  int last = -1;

  bool contains(const Date& d) const { return d.month_index() >= first && d.month_index() <= last; }
  /// Parses "YYYY-MM:YYYY-MM".
  static MonthWindow parse(std::string_view text);
  std::string str() const;
  bool operator==(const MonthWindow&) const = default;
};

enum class TaskStatus { Completed, Failed };

std::string_view to_string(TaskStatus s);
TaskStatus parse_task_status(std::string_view text);

struct WorkerRecord {
  std::string id;
  double rating = 0.0;

  bool operator==(const WorkerRecord&) const = default;
};

struct TaskRecord {
  std::string id;
  std::string project_id;
  TaskStatus status = TaskStatus::Failed;
  Date posting_date;
  Date submission_deadline;
  double prize = 0.0;
  std::vector<std::string> technologies;  // sorted, unique
  std::vector<std::string> platforms;     // sorted, unique

  bool operator==(const TaskRecord&) const = default;
};

struct RegistrationEvent {
  std::string worker_id;
  std::string task_id;
  Date registration_date;
  bool submitted = false;
  bool valid = false;
  bool won = false;
  std::optional<double> score;

  bool operator==(const RegistrationEvent&) const = default;
};

struct DatasetMetadata {
  std::optional<std::uint64_t> seed;
  std::string generator;  // empty for ingested data
  std::string rng;
  std::map<std::string, int> planted_clusters;  // worker -> planted label

  bool operator==(const DatasetMetadata&) const = default;
};

struct Dataset {
  DatasetMetadata metadata;
  std::vector<WorkerRecord> workers;
  std::vector<TaskRecord> tasks;
  std::vector<RegistrationEvent> events;

  bool operator==(const Dataset&) const = default;
};

/// Throws DataError describing the first class of violations found:
/// unknown references, duplicate ids or (worker, task) pairs, flag-chain
/// breaks (won => valid => submitted), registration after the deadline.
void validate(const Dataset& d);

/// Sort workers, tasks and events into canonical order.
void canonicalize(Dataset& d);

/// WTech: worker -> technologies of the tasks they registered for.
std::map<std::string, std::set<std::string>> derive_worker_expertise(const Dataset& d);

/// Months spanned by task posting dates. Empty window for no tasks.
MonthWindow posting_window(const Dataset& d);

}  // namespace crowdnet
