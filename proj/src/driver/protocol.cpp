#include "pbtbench/driver/protocol.hpp"

#include "json.hpp"

namespace pbtbench::driver {

using nlohmann::json;

std::string_view to_string(TrialStatus s) noexcept {
  switch (s) {
    case TrialStatus::Found: return "found";
    case TrialStatus::GaveUp: return "gave_up";
    case TrialStatus::Timeout: return "timeout";
    case TrialStatus::Error: return "error";
  }
  return "?";
}

std::optional<TrialStatus> parse_status(std::string_view s) noexcept {
  for (auto st : {TrialStatus::Found, TrialStatus::GaveUp, TrialStatus::Timeout, TrialStatus::Error}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out = "ProtocolViolation: ";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out;
}

std::string_view last_line(std::string_view out) {
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r' || out.back() == ' ')) out.remove_suffix(1);
  const auto nl = out.rfind('\n');
  return nl == std::string_view::npos ? out : out.substr(nl + 1);
}

}  // namespace

ProtocolViolation::ProtocolViolation(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

TrialResult parse_trial_output(std::string_view output) {
  const auto line = last_line(output);
  if (line.empty()) throw ProtocolViolation({"no output"});
  const json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded()) throw ProtocolViolation({"last line is not JSON: " + std::string(line.substr(0, 200))});
  if (!doc.is_object()) throw ProtocolViolation({"last line is not a JSON object"});

  std::vector<std::string> problems;
  TrialResult r;

  auto number = [&](const char* key, bool required) -> std::optional<double> {
    const auto it = doc.find(key);
    if (it == doc.end() || (!required && it->is_null())) {
      if (required) problems.push_back(std::string("missing ") + key);
      return std::nullopt;
    }
    if (!it->is_number() || it->get<double>() < 0) {
      problems.push_back(std::string(key) + " must be a non-negative number");
      return std::nullopt;
    }
    return it->get<double>();
  };
  auto count = [&](const char* key) -> std::uint64_t {
    const auto it = doc.find(key);
    if (it == doc.end()) {
      problems.push_back(std::string("missing ") + key);
      return 0;
    }
    if (!it->is_number_unsigned()) {
      problems.push_back(std::string(key) + " must be a non-negative integer");
      return 0;
    }
    return it->get<std::uint64_t>();
  };

  const auto st = doc.find("status");
  std::optional<TrialStatus> status;
  if (st == doc.end()) {
    problems.push_back("missing status");
  } else if (!st->is_string() || !(status = parse_status(st->get<std::string>())) ||
             *status == TrialStatus::Timeout) {
    problems.push_back("status must be one of \"found\", \"gave_up\", \"error\"");
    status.reset();
  }
  if (status) r.status = *status;

  if (auto t = number("time_s", true)) r.time_s = *t;
  r.tests = count("tests");
  r.discards = count("discards");
  r.gen_time_s = number("gen_time_s", false);
  r.exec_time_s = number("exec_time_s", false);

  const auto cx = doc.find("counterexample");
  const bool has_cx = cx != doc.end() && !cx->is_null();
  if (has_cx && !cx->is_string()) problems.push_back("counterexample must be a string");
  if (status == TrialStatus::Found && !has_cx) problems.push_back("missing counterexample");
  if (has_cx && cx->is_string()) {
    if (status && status != TrialStatus::Found) {
      problems.push_back("counterexample given for status " + std::string(to_string(*status)));
    }
    r.counterexample = cx->get<std::string>();
  }
  if (const auto m = doc.find("message"); m != doc.end() && !m->is_null()) {
    if (m->is_string()) {
      r.message = m->get<std::string>();
    } else {
      problems.push_back("message must be a string");
    }
  }

  if (!problems.empty()) throw ProtocolViolation(std::move(problems));
  return r;
}

std::string format_trial_output(const TrialResult& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["status"] = to_string(r.status);
  j["time_s"] = r.time_s;
  j["tests"] = r.tests;
  j["discards"] = r.discards;
  if (r.counterexample) j["counterexample"] = *r.counterexample;
  if (r.gen_time_s) j["gen_time_s"] = *r.gen_time_s;
  if (r.exec_time_s) j["exec_time_s"] = *r.exec_time_s;
  if (r.message) j["message"] = *r.message;
  return j.dump();
}

}  // namespace pbtbench::driver
