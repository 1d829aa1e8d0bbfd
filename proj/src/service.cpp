#include "dexhand/service.hpp"

#include "httplib.h"

#include "dexhand/choreography.hpp"
#include "dexhand/json_io.hpp"

namespace dexhand {

using json_io::Json;

namespace {

ApiResponse ok(const Json& body) { return {200, body.dump()}; }

ApiResponse error(int status, std::string code, std::string message, Json details = Json::object()) {
  Json body = Json::object();
  body["code"] = std::move(code);
  body["message"] = std::move(message);
  body["details"] = std::move(details);
  return {status, body.dump()};
}

ApiResponse not_found(const NotFoundError& e) {
  Json details = Json::object();
  details["id"] = e.key();
  details["suggestions"] = e.suggestions();
  return error(404, "not_found", e.what(), std::move(details));
}

Json record_to_json(const GestureRecord& r) {
  Json g = Json::object();
  g["id"] = r.id;
  g["name"] = r.name;
  g["category"] = std::string(to_string(r.category));
  g["source"] = std::string(to_string(r.source));
  g["pose"] = json_io::pose_to_json(r.pose);
  if (!r.notes.empty()) g["notes"] = r.notes;
  return g;
}

Json check_to_json(std::size_t frame, const kernels::PoseCheck& c) {
  Json j = Json::object();
  j["frame"] = frame;
  Json vs = Json::array();
  for (const auto& v : c.violations) vs.push_back(json_io::violation_to_json(v));
  j["violations"] = std::move(vs);
  j["residual_deg"] = c.residual;
  return j;
}

Json report_to_json(const TrajectoryReport& rep) {
  Json j = Json::object();
  Json rom = Json::array();
  for (const auto& fv : rep.rom_violations) {
    Json f = Json::object();
    f["frame"] = fv.frame;
    Json vs = Json::array();
    for (const auto& v : fv.violations) vs.push_back(json_io::violation_to_json(v));
    f["violations"] = std::move(vs);
    rom.push_back(std::move(f));
  }
  j["rom_violations"] = std::move(rom);
  j["max_residual_deg"] = rep.max_residual();
  j["max_step_limit_deg"] = rep.max_step_limit;
  Json steps = Json::array();
  for (const auto& s : rep.step_flags) {
    Json f = Json::object();
    f["segment"] = s.segment;
    f["joint"] = joint_name(s.joint);
    f["step_deg"] = s.step_deg;
    f["interval"] = s.interval;
    f["suggested_interval"] = s.suggested_interval;
    steps.push_back(std::move(f));
  }
  j["step_flags"] = std::move(steps);
  j["clean"] = rep.clean();
  return j;
}

/// Resolves a gesture id or an inline pose object.
HandPose pose_or_id(const Json& j, const std::string& path, const GestureSet& set) {
  if (j.is_string()) return find_gesture(set, j.get<std::string>()).pose;
  return json_io::pose_from_json(j, path);
}

Json parse_body(const ApiRequest& req) {
  if (req.body.empty()) throw SchemaError("", "request body is empty");
  Json body = json_io::parse(req.body, "request body");
  if (!body.is_object()) throw SchemaError("", "request body must be a JSON object");
  return body;
}

}  // namespace

Service::Service(HandSpec spec, std::string spec_document, GestureSet gestures, CouplingConfig coupling)
    : spec_(std::move(spec)),
      spec_document_(std::move(spec_document)),
      gestures_(std::move(gestures)),
      coupling_(coupling) {}

Service::~Service() = default;

ApiResponse Service::handle(const ApiRequest& req) const {
  static constexpr std::string_view kGesturePrefix = "/api/gestures/";
  try {
    if (req.method == "GET") {
      if (req.path == "/api/hand-spec") return {200, spec_document_};
      if (req.path == "/api/gestures") return get_gestures(req);
      if (req.path.starts_with(kGesturePrefix) && req.path.size() > kGesturePrefix.size())
        return get_gesture(req.path.substr(kGesturePrefix.size()));
    } else if (req.method == "POST") {
      if (req.path == "/api/interpolate") return post_interpolate(req);
      if (req.path == "/api/compile") return post_compile(req);
      if (req.path == "/api/fk") return post_fk(req);
    }
    return error(404, "no_route", "no route for " + req.method + " " + req.path);
  } catch (const NotFoundError& e) {
    if (req.method == "GET") return not_found(e);
    // an unknown id inside a request body is a malformed request
    Json details = Json::object();
    details["unknown_ids"] = {e.key()};
    details["suggestions"] = e.suggestions();
    return error(400, "unknown_gesture", e.what(), std::move(details));
  } catch (const SchemaError& e) {
    Json details = Json::object();
    details["path"] = e.path();
    return error(400, "bad_request", e.what(), std::move(details));
  } catch (const Error& e) {
    return error(400, "bad_request", e.what());
  }
}

ApiResponse Service::get_gestures(const ApiRequest& req) const {
  std::optional<GestureCategory> filter;
  if (auto it = req.query.find("category"); it != req.query.end()) {
    filter = parse_category(it->second);
    if (!filter) {
      Json details = Json::object();
      details["allowed"] = {"FeixGrasp", "Kapandji", "TranslationRotation"};
      return error(400, "bad_request", "unknown category \"" + it->second + "\"", std::move(details));
    }
  }
  Json list = Json::array();
  for (const auto& r : gestures_.records())
    if (!filter || r.category == *filter) list.push_back(record_to_json(r));
  Json body = Json::object();
  body["count"] = list.size();
  body["gestures"] = std::move(list);
  return ok(body);
}

ApiResponse Service::get_gesture(const std::string& id) const { return ok(record_to_json(find_gesture(gestures_, id))); }

ApiResponse Service::post_interpolate(const ApiRequest& req) const {
  const Json body = parse_body(req);
  const Json& t = json_io::require_field(body, "T", "");
  if (!t.is_number_integer() || t.get<long long>() < 1 || t.get<long long>() > 100000)
    throw SchemaError("T", "T must be an integer >= 1");
  const HandPose from = pose_or_id(json_io::require_field(body, "from", ""), "from", gestures_);
  const HandPose to = pose_or_id(json_io::require_field(body, "to", ""), "to", gestures_);

  const auto frames = interpolate_segment(from, to, static_cast<int>(t.get<long long>()));
  const auto checks = kernels::check_poses(frames, spec_, coupling_, Envelope::Ours, kernels::Execution::Serial);
  Json out = Json::object();
  Json fj = Json::array();
  for (const auto& f : frames) fj.push_back(json_io::pose_to_json(f));
  out["frames"] = std::move(fj);
  Json vj = Json::array();
  for (std::size_t i = 0; i < checks.size(); ++i) vj.push_back(check_to_json(i + 1, checks[i]));
  out["validation"] = std::move(vj);
  return ok(out);
}

ApiResponse Service::post_compile(const ApiRequest& req) const {
  const Json body = parse_body(req);
  const Json& sj = body.contains("script") ? body["script"] : body;
  const ManipulationScript script = parse_script_json(sj, body.contains("script") ? "script" : "");

  Trajectory traj;
  try {
    traj = compile_script(script, gestures_);
  } catch (const CompileError& e) {
    Json details = Json::object();
    details["unknown_ids"] = e.unknown_ids();
    return error(400, "compile_error", e.what(), std::move(details));
  }
  const TrajectoryReport rep =
      validate_trajectory(traj, spec_, coupling_, script.max_step_deg.value_or(kDefaultMaxStepDeg));
  const TrajectoryMetrics m = trajectory_metrics(traj);

  Json out = Json::object();
  Json tj = Json::object();
  tj["frame_rate_fps"] = traj.frame_rate;
  tj["key_frame_indices"] = traj.key_frame_indices;
  Json frames = Json::array();
  for (const auto& f : traj.frames) frames.push_back(json_io::pose_to_json(f));
  tj["frames"] = std::move(frames);
  out["trajectory"] = std::move(tj);
  Json mj = Json::object();
  mj["duration_s"] = m.duration_s;
  mj["gesture_count"] = m.gesture_count;
  mj["frame_count"] = m.frame_count;
  out["metrics"] = std::move(mj);
  out["validation"] = report_to_json(rep);
  return ok(out);
}

ApiResponse Service::post_fk(const ApiRequest& req) const {
  const Json body = parse_body(req);
  const HandPose pose = pose_or_id(json_io::require_field(body, "pose", ""), "pose", gestures_);
  Json digits = Json::object();
  for (DigitId d : kAllDigits) digits[std::string(to_string(d))] = json_io::chain_to_json(forward_kinematics(pose, spec_, d));
  Json out = Json::object();
  out["digits"] = std::move(digits);
  return ok(out);
}

int Service::bind(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});

  auto adapt = [this](const httplib::Request& hreq, httplib::Response& hres) {
    ApiRequest req;
    req.method = hreq.method;
    req.path = hreq.path;
    for (const auto& [k, v] : hreq.params) req.query.emplace(k, v);
    req.body = hreq.body;
    const ApiResponse res = handle(req);
    hres.status = res.status;
    hres.set_content(res.body, "application/json");
  };
  server_->Get(R"(/api/.*)", adapt);
  server_->Post(R"(/api/.*)", adapt);
  server_->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

void Service::run() {
  if (server_) server_->listen_after_bind();
}

void Service::stop() {
  if (server_) server_->stop();
}

}  // namespace dexhand
