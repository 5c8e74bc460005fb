#include <gtest/gtest.h>

#include "pbtbench/driver/protocol.hpp"

using namespace pbtbench::driver;

namespace {

std::vector<std::string> problems_of(std::string_view out) {
  try {
    parse_trial_output(out);
  } catch (const ProtocolViolation& e) {
    return e.problems();
  }
  ADD_FAILURE() << "accepted: " << out;
  return {};
}

}  // namespace

TEST(Protocol, ParsesLastLine) {
  const auto r = parse_trial_output(
      "noise\n{\"status\":\"found\",\"time_s\":0.5,\"tests\":12,\"discards\":3,\"counterexample\":\"(E 1 2)\",\"extra\":1}\n\n");
  EXPECT_EQ(r.status, TrialStatus::Found);
  EXPECT_DOUBLE_EQ(r.time_s, 0.5);
  EXPECT_EQ(r.tests, 12u);
  EXPECT_EQ(r.discards, 3u);
  EXPECT_EQ(r.counterexample, "(E 1 2)");
  EXPECT_FALSE(r.gen_time_s.has_value());
}

TEST(Protocol, FormatRoundTrips) {
  TrialResult r;
  r.status = TrialStatus::GaveUp;
  r.time_s = 1.25;
  r.tests = 1000000;
  r.discards = 7;
  r.gen_time_s = 0.5;
  r.exec_time_s = 0.75;
  EXPECT_EQ(parse_trial_output(format_trial_output(r)), r);
  r.status = TrialStatus::Error;
  r.message = "bad \"thing\"\nhappened";
  const auto line = format_trial_output(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(parse_trial_output(line), r);
}

TEST(Protocol, StatusNames) {
  for (auto s : {TrialStatus::Found, TrialStatus::GaveUp, TrialStatus::Timeout, TrialStatus::Error}) {
    EXPECT_EQ(parse_status(to_string(s)), s);
  }
  EXPECT_EQ(parse_status("Found"), std::nullopt);
}

TEST(Protocol, Violations) {
  EXPECT_EQ(problems_of("").size(), 1u);
  EXPECT_EQ(problems_of("hello").size(), 1u);
  EXPECT_EQ(problems_of("[1,2]").size(), 1u);
  // Children never report timeouts.
  EXPECT_FALSE(problems_of(R"({"status":"timeout","time_s":1,"tests":0,"discards":0})").empty());
  EXPECT_FALSE(problems_of(R"({"status":"found","time_s":1,"tests":1,"discards":0})").empty());
  EXPECT_FALSE(problems_of(R"({"status":"gave_up","time_s":1,"tests":1,"discards":0,"counterexample":"x"})").empty());
  EXPECT_FALSE(problems_of(R"({"status":"gave_up","time_s":-1,"tests":1,"discards":0})").empty());
  EXPECT_FALSE(problems_of(R"({"status":"gave_up","time_s":1,"tests":1.5,"discards":0})").empty());
  EXPECT_FALSE(problems_of(R"({"status":"error","time_s":1,"tests":1,"discards":0,"message":3})").empty());
  // Every problem is listed, not only the first.
  EXPECT_EQ(problems_of(R"({"status":"found"})").size(), 4u);
}
