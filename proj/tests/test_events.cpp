#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hatch/errors.hpp"
#include "hatch/events.hpp"

using hatch::Event;
using hatch::EventLog;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "hatch_events_test") {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

EventLog sample_log() {
  EventLog log;
  log.dim = 3;
  log.n_arms = 4;
  Event a;
  a.t = 1;
  a.x = Eigen::Vector3d(0.25, 0.5, 0.125);
  a.arm = 2;
  a.reward = 1.0;
  a.class_id = 7;
  Event b;
  b.t = 2;
  b.x = Eigen::Vector3d(0.1, 0.0, 0.9921875);
  b.arm = 0;
  b.reward = 0.0;
  log.events = {a, b};
  return log;
}

}  // namespace

TEST_CASE("event logs round-trip exactly") {
  TempDir tmp;
  const fs::path file = tmp.path / "log.txt";
  const EventLog log = sample_log();
  hatch::write_event_log(file, log);
  const EventLog loaded = hatch::read_event_log(file);
  CHECK(loaded.dim == 3);
  CHECK(loaded.n_arms == 4);
  REQUIRE(loaded.events.size() == 2);
  CHECK(loaded.events[0].t == 1);
  CHECK(loaded.events[0].x == log.events[0].x);
  CHECK(loaded.events[0].arm == 2);
  CHECK(loaded.events[0].reward == 1.0);
  REQUIRE(loaded.events[0].class_id.has_value());
  CHECK(*loaded.events[0].class_id == 7);
  CHECK_FALSE(loaded.events[1].class_id.has_value());
  CHECK(loaded.events[1].x == log.events[1].x);
}

TEST_CASE("header and record validation") {
  TempDir tmp;
  const fs::path file = tmp.path / "log.txt";

  auto write_text = [&](const char* text) {
    std::ofstream out(file);
    out << text;
  };

  write_text("wrong-header v1 dim=2 arms=2\n");
  CHECK_THROWS_AS(hatch::read_event_log(file), hatch::format_error);

  write_text("hatch-events v1 dim=0 arms=2\n");
  CHECK_THROWS_AS(hatch::read_event_log(file), hatch::format_error);

  write_text("hatch-events v1 dim=2 arms=2\n1 0.5 0.5\n");
  CHECK_THROWS_AS(hatch::read_event_log(file), hatch::format_error);

  write_text("hatch-events v1 dim=2 arms=2\n1 0.5 0.5 5 1\n");
  CHECK_THROWS_AS(hatch::read_event_log(file), hatch::format_error);

  write_text("hatch-events v1 dim=2 arms=2\n1 0.5 0.5 1 0.7\n");
  CHECK_THROWS_AS(hatch::read_event_log(file), hatch::format_error);

  write_text("hatch-events v1 dim=2 arms=2\n1 0.5 0.5 1 1\n\n2 0.1 0.2 0 0 3\n");
  const EventLog ok = hatch::read_event_log(file);
  CHECK(ok.events.size() == 2);

  CHECK_THROWS_AS(hatch::read_event_log(tmp.path / "missing.txt"), hatch::io_error);
}

TEST_CASE("oversized contexts are rescaled by the largest norm") {
  TempDir tmp;
  const fs::path file = tmp.path / "log.txt";
  {
    std::ofstream out(file);
    out << "hatch-events v1 dim=2 arms=2\n";
    out << "1 3.0 4.0 0 1\n";   // norm 5
    out << "2 1.0 0.0 1 0\n";   // norm 1
  }
  const EventLog log = hatch::read_event_log(file);
  CHECK(log.events[0].x.norm() == doctest::Approx(1.0));
  CHECK(log.events[0].x[0] == doctest::Approx(0.6));
  CHECK(log.events[1].x[0] == doctest::Approx(0.2));
}
