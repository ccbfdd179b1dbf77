#include "autorvo/reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "autorvo/errors.hpp"
#include "autorvo/trajectory_io.hpp"

namespace autorvo::eval {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": bad number '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": bad integer '" + s + "'");
  }
}

}  // namespace

const ReferenceAgent* ReferenceTrajectorySet::find(std::string_view id) const {
  auto it = std::lower_bound(agents.begin(), agents.end(), id,
                             [](const ReferenceAgent& a, std::string_view k) { return a.id < k; });
  return it != agents.end() && it->id == id ? &*it : nullptr;
}

ReferenceTrajectorySet parse_reference(std::string_view csv, std::string_view sidecar) {
  sim::Json meta;
  try {
    meta = sim::Json::parse(sidecar);
  } catch (const sim::Json::parse_error& e) {
    throw ParseError(std::string("reference sidecar: ") + e.what());
  }
  if (!meta.is_object() || !meta.contains("frame_rate") || !meta["frame_rate"].is_number()) {
    throw ParseError("reference sidecar: frame_rate missing");
  }
  if (!meta.contains("agents") || !meta["agents"].is_object()) {
    throw ParseError("reference sidecar: agents missing");
  }
  ReferenceTrajectorySet ref;
  ref.frame_rate = meta["frame_rate"].get<double>();
  if (!(ref.frame_rate > 0.0)) throw ParseError("reference sidecar: frame_rate must be > 0");

  std::map<std::string, ReferenceAgent> agents;
  for (const auto& [id, info] : meta["agents"].items()) {
    const std::string path = "reference sidecar: agents." + id;
    if (!info.is_object() || !info.contains("type") || !info["type"].is_string()) {
      throw ParseError(path + ".type missing");
    }
    const auto type = dynamics::agent_type_from_string(info["type"].get<std::string>());
    if (!type) throw ParseError(path + ".type: unknown agent type");
    ReferenceAgent a;
    a.id = id;
    a.type = *type;
    try {
      if (info.contains("goal")) a.goal = Vec2{info["goal"].at(0).get<double>(), info["goal"].at(1).get<double>()};
      if (info.contains("disks")) {
        std::vector<geometry::Disk> disks;
        for (const auto& d : info["disks"]) {
          disks.push_back({{d.at(0).get<double>(), d.at(1).get<double>()}, d.at(2).get<double>()});
        }
        a.disks = std::move(disks);
      }
    } catch (const sim::Json::exception& e) {
      throw ParseError(path + ": " + e.what());
    }
    agents[id] = std::move(a);
  }

  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("reference csv: empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "frame,id,x,y") throw ParseError("reference csv: header must be 'frame,id,x,y'");
  int line_no = 1;
  std::vector<std::string> unknown;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const std::string where = "reference csv line " + std::to_string(line_no);
    if (cells.size() != 4) throw ParseError(where + ": expected 4 fields");
    auto it = agents.find(cells[1]);
    if (it == agents.end()) {
      unknown.push_back(cells[1]);
      continue;
    }
    it->second.frames.push_back({parse_int(cells[0], where),
                                 {parse_double(cells[2], where), parse_double(cells[3], where)}});
  }
  if (!unknown.empty()) {
    throw IdMismatch("reference csv: id '" + unknown.front() + "' not described in the sidecar");
  }
  for (auto& [id, a] : agents) {
    std::sort(a.frames.begin(), a.frames.end(),
              [](const ReferenceFrame& x, const ReferenceFrame& y) { return x.frame < y.frame; });
    for (std::size_t i = 1; i < a.frames.size(); ++i) {
      if (a.frames[i].frame == a.frames[i - 1].frame) {
        throw ParseError("reference csv: duplicate frame " + std::to_string(a.frames[i].frame) +
                         " for id '" + id + "'");
      }
    }
    if (a.frames.empty()) throw IdMismatch("reference csv: no rows for sidecar id '" + id + "'");
    ref.agents.push_back(std::move(a));
  }
  return ref;
}

ReferenceTrajectorySet load_reference(const std::filesystem::path& csv,
                                      const std::filesystem::path& sidecar) {
  return parse_reference(sim::read_text_file(csv), sim::read_text_file(sidecar));
}

std::string reference_csv(const ReferenceTrajectorySet& ref) {
  struct Row {
    int frame;
    const std::string* id;
    Vec2 p;
  };
  std::vector<Row> rows;
  for (const auto& a : ref.agents) {
    for (const auto& f : a.frames) rows.push_back({f.frame, &a.id, f.position});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.frame, *a.id) < std::tie(b.frame, *b.id);
  });
  std::string out = "frame,id,x,y\n";
  for (const Row& r : rows) {
    out += std::to_string(r.frame) + ',' + *r.id + ',' + sim::format_fixed(r.p.x) + ',' +
           sim::format_fixed(r.p.y) + '\n';
  }
  return out;
}

sim::Json reference_sidecar(const ReferenceTrajectorySet& ref) {
  sim::Json agents = sim::Json::object();
  for (const auto& a : ref.agents) {
    sim::Json j = {{"type", std::string(dynamics::to_string(a.type))}};
    if (a.goal) j["goal"] = {a.goal->x, a.goal->y};
    if (a.disks) {
      sim::Json disks = sim::Json::array();
      for (const auto& d : *a.disks) disks.push_back({d.center.x, d.center.y, d.radius});
      j["disks"] = disks;
    }
    agents[a.id] = j;
  }
  return {{"frame_rate", ref.frame_rate}, {"agents", agents}};
}

std::vector<ResampledTrack> resample(const ReferenceTrajectorySet& ref, double tau) {
  std::vector<ResampledTrack> out;
  if (ref.agents.empty()) return out;
  int frame0 = ref.agents.front().frames.front().frame;
  for (const auto& a : ref.agents) frame0 = std::min(frame0, a.frames.front().frame);
  constexpr double kSlack = 1e-9;

  for (const auto& a : ref.agents) {
    const auto& fr = a.frames;
    const double t_first = (fr.front().frame - frame0) / ref.frame_rate;
    const double t_last = (fr.back().frame - frame0) / ref.frame_rate;
    ResampledTrack track;
    track.id = a.id;
    track.first_step = static_cast<int>(std::ceil(t_first / tau - kSlack));
    const int last = static_cast<int>(std::floor(t_last / tau + kSlack));
    std::size_t j = 0;
    for (int k = track.first_step; k <= last; ++k) {
      // Position in frame units; snapping absorbs rounding at exact frames.
      double f = frame0 + k * tau * ref.frame_rate;
      if (std::abs(f - std::round(f)) < 1e-6) f = std::round(f);
      f = std::clamp(f, static_cast<double>(fr.front().frame), static_cast<double>(fr.back().frame));
      while (j + 1 < fr.size() && fr[j + 1].frame <= f) ++j;
      if (j + 1 == fr.size() || fr[j].frame == f) {
        track.positions.push_back(fr[j].position);
        continue;
      }
      const double w = (f - fr[j].frame) / (fr[j + 1].frame - fr[j].frame);
      track.positions.push_back(fr[j].position + (fr[j + 1].position - fr[j].position) * w);
    }
    if (!track.positions.empty()) out.push_back(std::move(track));
  }
  return out;
}

}  // namespace autorvo::eval
