#include "hatch/events.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "hatch/errors.hpp"

namespace hatch {

namespace {

constexpr const char* kHeaderTag = "hatch-events";
constexpr const char* kHeaderVersion = "v1";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

EventLog read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read event log: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw format_error("event log: missing header");
  std::istringstream header(line);
  std::string tag, version, dim_field, arms_field;
  header >> tag >> version >> dim_field >> arms_field;
  if (tag != kHeaderTag || version != kHeaderVersion)
    throw format_error("event log: unrecognized header: " + line);
  EventLog log;
  if (std::sscanf(dim_field.c_str(), "dim=%d", &log.dim) != 1 || log.dim < 1)
    throw format_error("event log: bad dim declaration");
  if (std::sscanf(arms_field.c_str(), "arms=%d", &log.n_arms) != 1 || log.n_arms < 1)
    throw format_error("event log: bad arms declaration");

  std::size_t line_no = 1;
  double max_norm = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    Event e;
    e.x.resize(log.dim);
    if (!(fields >> e.t)) throw format_error("event log: bad record at line " + std::to_string(line_no));
    for (int i = 0; i < log.dim; ++i) {
      if (!(fields >> e.x[i]))
        throw format_error("event log: truncated context at line " + std::to_string(line_no));
    }
    if (!(fields >> e.arm >> e.reward))
      throw format_error("event log: missing arm/reward at line " + std::to_string(line_no));
    int class_id;
    if (fields >> class_id) e.class_id = class_id;
    if (e.arm < 0 || e.arm >= log.n_arms)
      throw format_error("event log: arm out of range at line " + std::to_string(line_no));
    if (e.reward != 0.0 && e.reward != 1.0)
      throw format_error("event log: reward must be 0 or 1 at line " + std::to_string(line_no));
    if (!e.x.allFinite())
      throw format_error("event log: non-finite context at line " + std::to_string(line_no));
    max_norm = std::max(max_norm, e.x.norm());
    log.events.push_back(std::move(e));
  }

  if (max_norm > 1.0 + 1e-9) {
    std::cerr << "warning: event log " << path.string() << " has context norms up to "
              << max_norm << "; rescaling all contexts by 1/" << max_norm << "\n";
    for (Event& e : log.events) e.x /= max_norm;
  }
  return log;
}

void write_event_log(const std::filesystem::path& path, const EventLog& log) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write event log: " + path.string());
  out << kHeaderTag << ' ' << kHeaderVersion << " dim=" << log.dim << " arms=" << log.n_arms
      << '\n';
  for (const Event& e : log.events) {
    out << e.t;
    for (int i = 0; i < log.dim; ++i) out << ' ' << format_double(e.x[i]);
    out << ' ' << e.arm << ' ' << (e.reward != 0.0 ? 1 : 0);
    if (e.class_id) out << ' ' << *e.class_id;
    out << '\n';
  }
  if (!out) throw io_error("failed writing event log: " + path.string());
}

}  // namespace hatch
