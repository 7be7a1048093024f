#include "crowdnet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "crowdnet/error.hpp"

namespace crowdnet {
namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::chrono::year_month_day ymd_of(std::int32_t days) {
  return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days}}};
}

int parse_month_token(std::string_view text) {
  // YYYY-MM
  if (text.size() != 7 || text[4] != '-') {
    throw DataError("invalid month '" + std::string(text) + "', expected YYYY-MM");
  }
  const int y = parse_int(text.substr(0, 4), "year");
  const int m = parse_int(text.substr(5, 2), "month");
  if (m < 1 || m > 12) throw DataError("invalid month '" + std::string(text) + "'");
  return y * 12 + m - 1;
}

std::string month_token(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", index / 12, index % 12 + 1);
  return buf;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) throw DataError("invalid calendar date");
  return from_days(static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw DataError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  const int y = parse_int(text.substr(0, 4), "year");
  const int m = parse_int(text.substr(5, 2), "month");
  const int d = parse_int(text.substr(8, 2), "day");
  if (m < 1 || m > 12 || d < 1 || d > 31) {
    throw DataError("invalid date '" + std::string(text) + "'");
  }
  try {
    return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
  } catch (const DataError&) {
    throw DataError("invalid date '" + std::string(text) + "'");
  }
}

int Date::year() const { return static_cast<int>(ymd_of(days_).year()); }

unsigned Date::month() const { return static_cast<unsigned>(ymd_of(days_).month()); }

std::string Date::str() const {
  const auto ymd = ymd_of(days_);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

MonthWindow MonthWindow::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DataError("invalid window '" + std::string(text) + "', expected YYYY-MM:YYYY-MM");
  }
  MonthWindow w{parse_month_token(text.substr(0, colon)), parse_month_token(text.substr(colon + 1))};
  if (w.last < w.first) throw DataError("window ends before it starts: " + std::string(text));
  return w;
}

std::string MonthWindow::str() const {
  if (last < first) return "";
  return month_token(first) + ":" + month_token(last);
}

std::string_view to_string(TaskStatus s) { return s == TaskStatus::Completed ? "completed" : "failed"; }

TaskStatus parse_task_status(std::string_view text) {
  if (text == "completed") return TaskStatus::Completed;
  if (text == "failed") return TaskStatus::Failed;
  throw DataError("invalid task status '" + std::string(text) + "'");
}

void validate(const Dataset& d) {
  std::unordered_set<std::string> workers;
  for (const auto& w : d.workers) {
    if (w.id.empty()) throw DataError("empty worker id");
    if (!(w.rating >= 0.0)) throw DataError("worker " + w.id + " has a negative rating");
    if (!workers.insert(w.id).second) throw DataError("duplicate worker id " + w.id);
  }
  std::unordered_map<std::string, const TaskRecord*> tasks;
  for (const auto& t : d.tasks) {
    if (t.id.empty()) throw DataError("empty task id");
    if (!tasks.emplace(t.id, &t).second) throw DataError("duplicate task id " + t.id);
    if (t.submission_deadline < t.posting_date) {
      throw DataError("task " + t.id + " has its deadline before its posting date");
    }
  }

  std::vector<std::string> unknown;
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const auto& e : d.events) {
    const bool known_worker = workers.contains(e.worker_id);
    const auto task_it = tasks.find(e.task_id);
    if (!known_worker) unknown.push_back("worker " + e.worker_id);
    if (task_it == tasks.end()) unknown.push_back("task " + e.task_id);
    if (!known_worker || task_it == tasks.end()) continue;
    if (!seen.emplace(e.worker_id, e.task_id).second) {
      throw DataError("duplicate registration of " + e.worker_id + " on " + e.task_id);
    }
    if ((e.won && !e.valid) || (e.valid && !e.submitted)) {
      throw DataError("flag chain violated for " + e.worker_id + " on " + e.task_id);
    }
    if (task_it->second->submission_deadline < e.registration_date) {
      throw DataError("registration of " + e.worker_id + " on " + e.task_id + " after the deadline");
    }
  }
  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    unknown.erase(std::unique(unknown.begin(), unknown.end()), unknown.end());
    std::ostringstream msg;
    msg << "unknown references:";
    for (const auto& u : unknown) msg << ' ' << u;
    throw DataError(msg.str());
  }
}

void canonicalize(Dataset& d) {
  std::sort(d.workers.begin(), d.workers.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(d.tasks.begin(), d.tasks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (auto& t : d.tasks) {
    for (auto* v : {&t.technologies, &t.platforms}) {
      std::sort(v->begin(), v->end());
      v->erase(std::unique(v->begin(), v->end()), v->end());
    }
  }
  std::sort(d.events.begin(), d.events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.task_id, a.worker_id) < std::tie(b.task_id, b.worker_id);
  });
}

std::map<std::string, std::set<std::string>> derive_worker_expertise(const Dataset& d) {
  std::unordered_map<std::string_view, const TaskRecord*> tasks;
  for (const auto& t : d.tasks) tasks.emplace(t.id, &t);
  std::map<std::string, std::set<std::string>> out;
  for (const auto& w : d.workers) out[w.id];
  for (const auto& e : d.events) {
    auto& techs = out[e.worker_id];
    if (auto it = tasks.find(e.task_id); it != tasks.end()) {
      techs.insert(it->second->technologies.begin(), it->second->technologies.end());
    }
  }
  return out;
}

MonthWindow posting_window(const Dataset& d) {
  if (d.tasks.empty()) return {};
  int first = d.tasks.front().posting_date.month_index();
  int last = first;
  for (const auto& t : d.tasks) {
    first = std::min(first, t.posting_date.month_index());
    last = std::max(last, t.posting_date.month_index());
  }
  return {first, last};
}

}  // namespace crowdnet
