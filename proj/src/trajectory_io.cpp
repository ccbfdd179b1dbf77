#include "autorvo/trajectory_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <tuple>

#include "autorvo/errors.hpp"

namespace autorvo::sim {

std::string format_fixed(double x) {
  if (x == 0.0) x = 0.0;  // no "-0.000000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  std::string s(buf);
  if (s == "-0.000000000") s = "0.000000000";
  return s;
}

std::string trajectory_csv(const TrajectoryLog& log) {
  struct Row {
    int step;
    const std::string* id;
    const AgentTrack* track;
    const TrajectoryRecord* rec;
  };
  std::vector<Row> rows;
  for (const AgentTrack& t : log.agents) {
    for (const TrajectoryRecord& r : t.records) rows.push_back({r.step, &t.id, &t, &r});
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return std::tie(a.step, *a.id) < std::tie(b.step, *b.id); });

  std::string out = "step,time,id,type,x,y,theta,v,phi,b\n";
  for (const Row& row : rows) {
    const TrajectoryRecord& r = *row.rec;
    out += std::to_string(r.step);
    out += ',' + format_fixed(r.time);
    out += ',' + *row.id;
    out += ',' + std::string(dynamics::to_string(row.track->type));
    out += ',' + format_fixed(r.position.x);
    out += ',' + format_fixed(r.position.y);
    out += ',' + format_fixed(r.theta);
    out += ',' + format_fixed(r.v);
    out += ',' + (r.phi ? format_fixed(*r.phi) : std::string());
    out += ',' + std::string(to_string(r.behavior));
    out += '\n';
  }
  return out;
}

Json trajectory_json(const TrajectoryLog& log) {
  std::vector<const AgentTrack*> tracks;
  for (const AgentTrack& t : log.agents) tracks.push_back(&t);
  std::sort(tracks.begin(), tracks.end(), [](auto* a, auto* b) { return a->id < b->id; });

  Json agents = Json::array();
  for (const AgentTrack* t : tracks) {
    Json records = Json::array();
    for (const TrajectoryRecord& r : t->records) {
      Json j = {{"step", r.step},
                {"time", r.time},
                {"x", r.position.x},
                {"y", r.position.y},
                {"theta", r.theta},
                {"v", r.v},
                {"phi", r.phi ? Json(*r.phi) : Json(nullptr)},
                {"b", std::string(to_string(r.behavior))}};
      records.push_back(std::move(j));
    }
    agents.push_back({{"id", t->id}, {"type", std::string(dynamics::to_string(t->type))}, {"records", records}});
  }
  Json audit = Json::array();
  for (const AuditEvent& e : log.audit) audit.push_back({{"step", e.step}, {"a", e.a}, {"b", e.b}});

  Json config = Json::object();
  if (!log.config_echo.empty()) config = Json::parse(log.config_echo);
  return Json{{"tau", log.tau},
              {"steps", log.steps},
              {"agents", agents},
              {"audit_per_step", log.audit_per_step},
              {"audit", audit},
              {"total_overlaps", log.total_overlaps()},
              {"arrivals", log.arrivals},
              {"emergencies", log.emergencies},
              {"config", config}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path.string() + ": cannot write file");
  out << text;
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace autorvo::sim
