#include "ringseg/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ringseg {

using nlohmann::json;

const char* to_string(Color c) {
  switch (c) {
    case Color::red: return "red";
    case Color::green: return "green";
    case Color::blue: return "blue";
    case Color::yellow: return "yellow";
    case Color::grey: return "grey";
  }
  throw TraceError("invalid color value");
}

const char* to_string(Action a) {
  switch (a) {
    case Action::move_ring: return "move_ring";
    case Action::move_peg: return "move_peg";
    case Action::move_center: return "move_center";
    case Action::grasp: return "grasp";
    case Action::extract: return "extract";
    case Action::release: return "release";
  }
  throw TraceError("invalid action value");
}

const char* to_string(Arm a) {
  switch (a) {
    case Arm::psm1: return "psm1";
    case Arm::psm2: return "psm2";
    case Arm::both: return "both";
  }
  throw TraceError("invalid arm value");
}

Color color_from_string(const std::string& s) {
  if (s == "red") return Color::red;
  if (s == "green") return Color::green;
  if (s == "blue") return Color::blue;
  if (s == "yellow") return Color::yellow;
  if (s == "grey") return Color::grey;
  throw TraceError("unknown color '" + s + "'");
}

Action action_from_string(const std::string& s) {
  if (s == "move_ring") return Action::move_ring;
  if (s == "move_peg") return Action::move_peg;
  if (s == "move_center") return Action::move_center;
  if (s == "grasp") return Action::grasp;
  if (s == "extract") return Action::extract;
  if (s == "release") return Action::release;
  throw TraceError("unknown action '" + s + "'");
}

Arm arm_from_string(const std::string& s) {
  if (s == "psm1") return Arm::psm1;
  if (s == "psm2") return Arm::psm2;
  if (s == "both") return Arm::both;
  throw TraceError("unknown arm '" + s + "'");
}

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
  throw TraceError(ctx + ": " + what);
}

void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) fail(ctx, "expected an object");
  for (const char* k : required)
    if (!j.contains(k)) fail(ctx, std::string("missing key '") + k + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    bool known = false;
    for (const char* r : required) known = known || k == r;
    for (const char* o : optional) known = known || k == o;
    if (!known) fail(ctx, "unknown key '" + k + "'");
  }
}

double get_number(const json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx, "expected a number");
  return j.get<double>();
}

template <std::size_t N>
std::array<double, N> get_vector(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != N)
    fail(ctx, "expected an array of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = get_number(j[i], ctx);
  return out;
}

std::string get_string(const json& j, const std::string& ctx) {
  if (!j.is_string()) fail(ctx, "expected a string");
  return j.get<std::string>();
}

ArmState arm_from(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"pos", "quat", "jaw"});
  ArmState a;
  a.pos = get_vector<3>(j["pos"], ctx + ".pos");
  a.quat = get_vector<4>(j["quat"], ctx + ".quat");
  a.jaw = get_number(j["jaw"], ctx + ".jaw");
  return a;
}

SceneState scene_from(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"rings", "pegs", "base_center", "ring_radius"});
  SceneState s;
  if (!j["rings"].is_array()) fail(ctx, "'rings' must be an array");
  if (!j["pegs"].is_array()) fail(ctx, "'pegs' must be an array");
  for (std::size_t i = 0; i < j["rings"].size(); ++i) {
    const std::string rctx = ctx + ".rings[" + std::to_string(i) + "]";
    check_keys(j["rings"][i], rctx, {"color", "pos"});
    s.rings.push_back({color_from_string(get_string(j["rings"][i]["color"], rctx)),
                       get_vector<3>(j["rings"][i]["pos"], rctx + ".pos")});
  }
  for (std::size_t i = 0; i < j["pegs"].size(); ++i) {
    const std::string pctx = ctx + ".pegs[" + std::to_string(i) + "]";
    check_keys(j["pegs"][i], pctx, {"color", "pos"});
    s.pegs.push_back({color_from_string(get_string(j["pegs"][i]["color"], pctx)),
                      get_vector<3>(j["pegs"][i]["pos"], pctx + ".pos")});
  }
  s.base_center = get_vector<3>(j["base_center"], ctx + ".base_center");
  s.ring_radius = get_number(j["ring_radius"], ctx + ".ring_radius");
  return s;
}

json arm_to(const ArmState& a) {
  return json{{"pos", a.pos}, {"quat", a.quat}, {"jaw", a.jaw}};
}

json scene_to(const SceneState& s) {
  json rings = json::array();
  for (const auto& r : s.rings) rings.push_back({{"color", to_string(r.color)}, {"pos", r.pos}});
  json pegs = json::array();
  for (const auto& p : s.pegs) pegs.push_back({{"color", to_string(p.color)}, {"pos", p.pos}});
  return json{{"rings", rings},
              {"pegs", pegs},
              {"base_center", s.base_center},
              {"ring_radius", s.ring_radius}};
}

}  // namespace

void validate_trace(const ExecutionTrace& trace) {
  if (!(trace.sample_rate > 0) || !std::isfinite(trace.sample_rate))
    throw TraceError("sample_rate must be positive and finite");
  const double dt = 1.0 / trace.sample_rate;
  for (std::size_t i = 0; i < trace.frames.size(); ++i) {
    const Frame& f = trace.frames[i];
    const std::string ctx = "frame " + std::to_string(i);
    if (!(f.t >= 0)) fail(ctx, "t must be non-negative");
    if (i > 0) {
      const double prev = trace.frames[i - 1].t;
      if (!(f.t > prev)) fail(ctx, "t must be strictly increasing");
      if (std::abs((f.t - prev) - dt) > 1e-9)
        fail(ctx, "frames must be equally spaced at 1/sample_rate");
    }
    for (int a = 0; a < kNumArms; ++a) {
      const ArmState& arm = f.arms[a];
      double n2 = 0;
      for (double q : arm.quat) n2 += q * q;
      if (std::abs(std::sqrt(n2) - 1.0) > 1e-6)
        fail(ctx, std::string(a == 0 ? "psm1" : "psm2") + " quaternion is not unit-norm");
      if (!(arm.jaw >= 0.0 && arm.jaw <= 3.14159265358979323846 + 1e-12))
        fail(ctx, std::string(a == 0 ? "psm1" : "psm2") + " jaw out of [0, pi]");
    }
    if (!(f.scene.ring_radius > 0)) fail(ctx, "ring_radius must be positive");
    std::set<Color> rc, pc;
    for (const auto& r : f.scene.rings)
      if (!rc.insert(r.color).second) fail(ctx, "duplicate ring color");
    for (const auto& p : f.scene.pegs)
      if (!pc.insert(p.color).second) fail(ctx, "duplicate peg color");
  }
  if (trace.annotations) {
    const auto& anns = *trace.annotations;
    for (std::size_t i = 0; i < anns.size(); ++i)
      if (!(anns[i].start < anns[i].end))
        fail("annotation " + std::to_string(i), "start must precede end");
    for (int a = 0; a < kNumArms; ++a) {
      const Arm arm = a == 0 ? Arm::psm1 : Arm::psm2;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < anns.size(); ++i)
        if (anns[i].arm == arm || anns[i].arm == Arm::both) idx.push_back(i);
      std::sort(idx.begin(), idx.end(),
                [&](std::size_t x, std::size_t y) { return anns[x].start < anns[y].start; });
      for (std::size_t i = 1; i < idx.size(); ++i)
        if (anns[idx[i]].start < anns[idx[i - 1]].end - 1e-12)
          fail("annotation " + std::to_string(idx[i]),
               std::string("overlaps annotation ") + std::to_string(idx[i - 1]) + " on " +
                   to_string(arm));
    }
  }
}

json trace_to_json(const ExecutionTrace& trace) {
  json frames = json::array();
  for (const Frame& f : trace.frames)
    frames.push_back({{"t", f.t},
                      {"psm1", arm_to(f.arms[0])},
                      {"psm2", arm_to(f.arms[1])},
                      {"scene", scene_to(f.scene)}});
  json anns;
  if (trace.annotations) {
    anns = json::array();
    for (const Annotation& a : *trace.annotations)
      anns.push_back({{"start", a.start},
                      {"end", a.end},
                      {"action", to_string(a.action)},
                      {"arm", to_string(a.arm)},
                      {"color", a.color ? json(to_string(*a.color)) : json(nullptr)}});
  } else {
    anns = nullptr;
  }
  return json{{"sample_rate", trace.sample_rate},
              {"meta", trace.meta},
              {"frames", frames},
              {"annotations", anns}};
}

ExecutionTrace trace_from_json(const json& j) {
  check_keys(j, "trace", {"sample_rate", "meta", "frames", "annotations"});
  ExecutionTrace t;
  t.sample_rate = get_number(j["sample_rate"], "trace.sample_rate");
  if (!j["meta"].is_object()) fail("trace.meta", "expected an object");
  for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it)
    t.meta[it.key()] = get_string(it.value(), "trace.meta." + it.key());
  if (!j["frames"].is_array()) fail("trace.frames", "expected an array");
  t.frames.reserve(j["frames"].size());
  for (std::size_t i = 0; i < j["frames"].size(); ++i) {
    const std::string ctx = "frame " + std::to_string(i);
    const json& jf = j["frames"][i];
    check_keys(jf, ctx, {"t", "psm1", "psm2", "scene"});
    Frame f;
    f.t = get_number(jf["t"], ctx + ".t");
    f.arms[0] = arm_from(jf["psm1"], ctx + ".psm1");
    f.arms[1] = arm_from(jf["psm2"], ctx + ".psm2");
    f.scene = scene_from(jf["scene"], ctx + ".scene");
    t.frames.push_back(std::move(f));
  }
  if (!j["annotations"].is_null()) {
    if (!j["annotations"].is_array()) fail("trace.annotations", "expected an array or null");
    std::vector<Annotation> anns;
    for (std::size_t i = 0; i < j["annotations"].size(); ++i) {
      const std::string ctx = "annotation " + std::to_string(i);
      const json& ja = j["annotations"][i];
      check_keys(ja, ctx, {"start", "end", "action", "arm", "color"});
      Annotation a;
      a.start = get_number(ja["start"], ctx + ".start");
      a.end = get_number(ja["end"], ctx + ".end");
      a.action = action_from_string(get_string(ja["action"], ctx + ".action"));
      a.arm = arm_from_string(get_string(ja["arm"], ctx + ".arm"));
      if (!ja["color"].is_null()) a.color = color_from_string(get_string(ja["color"], ctx + ".color"));
      anns.push_back(a);
    }
    t.annotations = std::move(anns);
  }
  validate_trace(t);
  return t;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw TraceError("parse error in '" + path.string() + "': " + e.what());
  }
}

void write_json_atomic(const json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw TraceError("cannot write '" + tmp.string() + "'");
    out << j.dump(1, '\t') << '\n';
    if (!out) throw TraceError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

ExecutionTrace load_trace(const std::filesystem::path& path) {
  return trace_from_json(read_json_file(path));
}

void save_trace(const ExecutionTrace& trace, const std::filesystem::path& path) {
  validate_trace(trace);
  write_json_atomic(trace_to_json(trace), path);
}

Eigen::MatrixXd kinematic_matrix(const ExecutionTrace& trace) {
  Eigen::MatrixXd K(static_cast<Eigen::Index>(trace.frames.size()), kNumFeatures);
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    const Frame& f = trace.frames[static_cast<std::size_t>(i)];
    for (int a = 0; a < kNumArms; ++a) {
      const ArmState& arm = f.arms[a];
      const int base = a * kFeaturesPerArm;
      K(i, base + 0) = arm.pos[0];
      K(i, base + 1) = arm.pos[1];
      K(i, base + 2) = arm.pos[2];
      K(i, base + 3) = arm.quat[0];
      K(i, base + 4) = arm.quat[1];
      K(i, base + 5) = arm.quat[2];
      K(i, base + 6) = arm.quat[3];
      K(i, base + 7) = arm.jaw;
    }
  }
  return K;
}

}  // namespace ringseg
