#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include "autorvo/errors.hpp"
#include "autorvo/scenario_io.hpp"
#include "autorvo/simulator.hpp"
#include "autorvo/trajectory_io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace autorvo;
using namespace autorvo::sim;

namespace {

Scenario fixture(const std::string& name, double duration) {
  const Override o{"duration", std::to_string(duration)};
  return load_scenario_file(helpers::source_path("fixtures/" + name), std::span(&o, 1));
}

const AgentTrack& track(const TrajectoryLog& log, const std::string& id) {
  return *std::find_if(log.agents.begin(), log.agents.end(), [&](const AgentTrack& t) { return t.id == id; });
}

std::string expect_validation(const std::string& text) {
  try {
    load_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("a minimal pedestrian scenario loads with defaults") {
  const auto s = load_scenario(R"({"agents":[{"id":"p","type":"pedestrian","position":[0,0],"goal":[5,0]}]})");
  REQUIRE(s.agents.size() == 1);
  CHECK(s.duration == 60.0);
  CHECK(s.goal_radius == 0.5);
  CHECK(s.seed == 0);
  CHECK(s.nav.sigma == 1.5);
  CHECK(s.nav.tau == 0.2);
  const auto& p = s.agents[0];
  CHECK(p.speed() == 0.0);
  CHECK(p.heading() == 0.0);
  CHECK(p.reference_point().x == doctest::Approx(0.0));
  CHECK(p.shape.width() == doctest::Approx(0.64));
  CHECK(p.dyn.v_max_type == 1.6);
}

TEST_CASE("vehicles are placed by their front axle") {
  const auto s = load_scenario(R"({"agents":[{"id":"c","type":"car","position":[3,1],"theta":1.5707963267948966,"goal":[3,20]}]})");
  const auto placed = s.agents[0].placed();
  // body extends one wheelbase behind the front axle plus the rear disk
  double lo = 1e9, hi = -1e9;
  for (const auto& d : placed.disks()) {
    lo = std::min(lo, d.center.y - d.radius);
    hi = std::max(hi, d.center.y + d.radius);
  }
  CHECK(hi == doctest::Approx(1.9));
  CHECK(lo == doctest::Approx(1 - 2.7 - 0.9));
}

TEST_CASE("scenario validation names the offending path") {
  CHECK(expect_validation(R"({"agents":[{"id":"a","type":"car","position":[0,0],"goal":[9,0]},
                                        {"id":"b","type":"car","position":[1,0],"goal":[9,0]}]})") ==
        "agents: 'a' and 'b' overlap initially");
  CHECK(expect_validation(R"({"agents":[{"id":"a","type":"truck","position":[0,0],"goal":[9,0]}]})") ==
        "agents[0].type: unknown agent type 'truck'");
  CHECK(expect_validation(R"({"agents":[{"id":"a","type":"car","position":[0,0],"goal":[9,0],"speed":1}]})") ==
        "agents[0].speed: unknown key");
  CHECK(expect_validation(R"({"nav":{"sigma":0.5}})").find("nav.sigma") == 0);
  CHECK(expect_validation(R"({"agents":[{"id":"a","type":"car","position":[0,0],"goal":[9,0],"phi":0.9}]})") ==
        "agents[0].phi: exceeds phi_max");
  CHECK(expect_validation(R"({"agents":[{"id":"a","type":"car","position":[0,0],"goal":[9,0]},
                                        {"id":"a","type":"car","position":[0,9],"goal":[9,9]}]})") ==
        "agents[1].id: duplicate id 'a'");
  CHECK_THROWS_AS(load_scenario("{not json"), ParseError);
}

TEST_CASE("overrides address nested keys and reject unknown paths") {
  const std::string text = R"({"agents":[{"id":"p","type":"pedestrian","position":[0,0],"goal":[5,0]}]})";
  const std::vector<Override> ok = {parse_override("nav.weights.d=3"), parse_override("agents.0.goal=[7,1]"),
                                    parse_override("agent_types.pedestrian.v_max_type=2")};
  const auto s = load_scenario(text, ok);
  CHECK(s.nav.weights.d == 3.0);
  CHECK(s.agents[0].goal.x == 7.0);
  CHECK(s.agents[0].dyn.v_max_type == 2.0);

  const std::vector<Override> bad = {parse_override("nav.bogus=1")};
  CHECK_THROWS_AS(load_scenario(text, bad), ValidationError);
  CHECK_THROWS_AS(parse_override("novalue"), ValidationError);
}

TEST_CASE("neighbor query is a closed ball around the reference point") {
  std::vector<AgentState> agents = {helpers::pedestrian("p", {0, 0}, 0, {9, 9}),
                                    helpers::pedestrian("q", {0, 3}, 0, {9, 9})};
  const std::vector<Obstacle> obstacles = {{"o", geometry::CtmatShape({{{5, 0}, 1}})}};
  const WorldView w{agents, obstacles};
  CHECK(neighbors_of(w, 0, 4.0).size() == 2);
  CHECK(neighbors_of(w, 0, 3.999).size() == 1);
  CHECK(neighbors_of(w, 0, 1e-9).empty());
  const auto all = neighbors_of(w, 0, std::numeric_limits<double>::infinity());
  REQUIRE(all.size() == 2);
  CHECK(all[0].kind == Neighbor::Kind::Agent);  // q at 2.68 is nearer than the post at 4
  CHECK(all[0].distance == doctest::Approx(3 - 0.12 - 0.2));
  CHECK(all[1].distance == doctest::Approx(4.0));
  agents[1].arrived = true;
  CHECK(neighbors_of(WorldView{agents, obstacles}, 0, 100.0).size() == 1);
}

TEST_CASE("a step with everyone arrived only advances time") {
  World w;
  w.agents = {helpers::car("c", {0, 0}, 0, {0.1, 0})};
  w.agents[0].arrived = true;
  const auto before = w.agents[0].reference_point();
  nav::NavConfig cfg;
  const auto r = step(w, cfg);
  CHECK(w.step == 1);
  CHECK(w.time == doctest::Approx(0.2));
  CHECK(r.arrivals == 0);
  CHECK(distance(w.agents[0].reference_point(), before) == 0.0);
}

TEST_CASE("empty scenario gives an empty log") {
  const auto s = load_scenario(R"({"duration": 5})");
  const auto log = run(s);
  CHECK(log.agents.empty());
  CHECK(log.steps == 0);
  CHECK(trajectory_csv(log) == "step,time,id,type,x,y,theta,v,phi,b\n");
}

TEST_CASE("a lone walker tracking the preferred speed arrives within the speed bracket") {
  const std::string text = R"({"agent_types":{"pedestrian":{"v_max_type":2}},
      "agents":[{"id":"p","type":"pedestrian","position":[0,0],"goal":[10,0]}]})";
  // Without the smoothness term the walker settles on v_o = v_max/2 = 1 m/s.
  const Override no_smoothing{"nav.weights.b", "0"};
  const auto log = run(load_scenario(text, std::span(&no_smoothing, 1)));
  CHECK(log.arrivals == 1);
  const double t = log.agents[0].records.back().time;
  CHECK(t >= 10.0 / 2.0 * 1.2);
  CHECK(t <= 10.0 / 1.0 * 1.2);
  CHECK(log.agents[0].records.back().v == doctest::Approx(1.0));
}

TEST_CASE("the L1 smoothness term leaves a speed deadband below the preferred speed") {
  const auto s = load_scenario(R"({"agent_types":{"pedestrian":{"v_max_type":2}},
      "agents":[{"id":"p","type":"pedestrian","position":[0,0],"goal":[10,0]}]})");
  const auto log = run(s);
  CHECK(log.arrivals == 1);
  const double cruise = log.agents[0].records.back().v;
  // Accelerating by dv pays b*dv in smoothness and gains about 2(v_o - v)dv + e*tau*dv,
  // so the walker stops accelerating once v_o - v < (b - e*tau) / 2.
  const auto& w = s.nav.weights;
  const double band = (w.b - w.e * s.nav.tau) / 2.0;
  CHECK(cruise < 1.0);
  CHECK(1.0 - cruise <= band + 1e-9);
}

TEST_CASE("property: arrived agents stay put and leave the log") {
  const auto log = run(fixture("solo.json", 20));
  REQUIRE(log.arrivals == 1);
  const auto& recs = log.agents[0].records;
  CHECK(recs.back().step < log.steps + 1);
  CHECK(distance(recs.back().position, {20, 0}) <= 0.5);
  // nothing past the arrival step
  for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].step == recs[i - 1].step + 1);
}

TEST_CASE("property: agent order does not change any trajectory") {
  auto s = fixture("traffic-3.json", 8);
  const auto base = run(s);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 2; ++trial) {
    auto shuffled = s;
    std::shuffle(shuffled.agents.begin(), shuffled.agents.end(), rng);
    const auto log = run(shuffled);
    REQUIRE(log.agents.size() == base.agents.size());
    CHECK(trajectory_csv(log) == trajectory_csv(base));
  }
}

TEST_CASE("property: worker count does not change the result") {
  const auto s = fixture("traffic-6.json", 6);
  const auto one = run(s, {1, nullptr});
  const auto four = run(s, {4, nullptr});
  CHECK(trajectory_csv(one) == trajectory_csv(four));
  CHECK(trajectory_csv(one) == trajectory_csv(run(s, {1, nullptr})));
}

TEST_CASE("property: every agent plans against the snapshot before anyone commits") {
  const auto s = fixture("traffic-3.json", 2);
  std::mutex m;
  std::vector<std::pair<int, char>> events;
  StepHooks hooks;
  hooks.on_plan = [&](int step, const std::string&) {
    std::lock_guard lock(m);
    events.push_back({step, 'p'});
  };
  hooks.on_commit = [&](int step, const std::string&) {
    std::lock_guard lock(m);
    events.push_back({step, 'c'});
  };
  run(s, {3, &hooks});
  REQUIRE_FALSE(events.empty());
  for (std::size_t i = 1; i < events.size(); ++i) {
    // steps are nondecreasing and within a step no plan follows a commit
    CHECK(events[i].first >= events[i - 1].first);
    if (events[i].first == events[i - 1].first && events[i - 1].second == 'c') CHECK(events[i].second == 'c');
  }
  const auto plans = std::count_if(events.begin(), events.end(), [](auto& e) { return e.second == 'p'; });
  CHECK(plans * 2 == static_cast<long>(events.size()));
}

TEST_CASE("trajectory CSV layout") {
  const auto s = load_scenario(R"({"duration": 0.4, "agents":[
      {"id":"b","type":"pedestrian","position":[0,0],"goal":[5,0]},
      {"id":"a","type":"car","position":[0,10],"goal":[30,10]}]})");
  const auto csv = trajectory_csv(run(s));
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 1 + 3 * 2);
  CHECK(lines[0] == "step,time,id,type,x,y,theta,v,phi,b");
  CHECK(lines[1] == "0,0.000000000,a,car,0.000000000,10.000000000,0.000000000,0.000000000,0.000000000,GoAhead");
  CHECK(lines[2].rfind("0,0.000000000,b,pedestrian,", 0) == 0);
  CHECK(lines[2].find(",,") != std::string::npos);  // no steering for pedestrians
  CHECK(lines[3].rfind("1,0.200000000,a,", 0) == 0);
  CHECK(csv.find("-0.000000000") == std::string::npos);
}

TEST_CASE("calibration table matches the built-in defaults") {
  const auto doc = Json::parse(read_text_file(helpers::source_path("data/agent_types.json")));
  for (auto type : {AgentType::Pedestrian, AgentType::Bicycle, AgentType::Tricycle, AgentType::Car}) {
    const std::string name(dynamics::to_string(type));
    REQUIRE(doc.contains(name));
    auto entry = doc[name];
    const auto shape = entry["shape"];
    entry.erase("shape");
    CHECK(entry == params_to_json(dynamics::default_params(type)));
    const auto disks = dynamics::default_shape(type);
    REQUIRE(shape.size() == disks.size());
    for (std::size_t i = 0; i < disks.size(); ++i) {
      CHECK(shape[i][0].get<double>() == disks[i].center.x);
      CHECK(shape[i][1].get<double>() == disks[i].center.y);
      CHECK(shape[i][2].get<double>() == disks[i].radius);
    }
  }
}
